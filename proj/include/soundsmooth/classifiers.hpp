// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef SOUNDSMOOTH_CLASSIFIERS_HPP
#define SOUNDSMOOTH_CLASSIFIERS_HPP

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "soundsmooth/attacks.hpp"
#include "soundsmooth/common.hpp"

namespace soundsmooth {

/// Deterministic binary base classifier, evaluable in either host precision.
/// Implementations hold no mutable state, so one instance may be shared.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual int classify(std::span<const float> x) const = 0;
  virtual int classify(std::span<const double> x) const = 0;
  /// Required input dimension, or 0 when any dimension is accepted.
  virtual std::size_t dimension() const { return 0; }
  virtual std::string describe() const = 0;
};

using ClassifierPtr = std::shared_ptr<const Classifier>;

/// Always returns c.
ClassifierPtr make_constant(int c);
/// predicate_fa(x[coordinate], a / L), with a / L formed once per precision.
ClassifierPtr make_fa(std::uint32_t intensity, std::uint32_t levels, std::size_t coordinate = 0);
/// predicate_ga against one anchor image.
ClassifierPtr make_ga(const QuantizedImage& anchor);
/// classifier_ha over an anchor set.
ClassifierPtr make_ha(attacks::AnchorSet anchors);
/// classifier_m: class-1 anchors win, then class-0 anchors block, then x[0] > floor(L/2)/L.
ClassifierPtr make_m(attacks::AnchorSet class0, attacks::AnchorSet class1, std::uint32_t levels);
/// 1 iff the mean intensity exceeds theta.
ClassifierPtr make_threshold(double theta);

/// Parses a classifier description:
///   constant:C | fa:A | fai:I:A | ga:FILE[:INDEX] | ha:FILE | m:FILE | threshold:THETA
/// Intensities are integers in 0..levels. For m:FILE, even-indexed images form
/// class 0 and odd-indexed images class 1.
ClassifierPtr parse_classifier(std::string_view text, std::uint32_t levels);

}  // namespace soundsmooth

#endif  // SOUNDSMOOTH_CLASSIFIERS_HPP
