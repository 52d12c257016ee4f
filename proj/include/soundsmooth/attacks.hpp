// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

// Reachability-predicate classifiers whose smoothed versions receive false
// certificates under the standard floating-point pipeline. Every operation
// runs in exactly one host precision T (float or double) end to end.

#ifndef SOUNDSMOOTH_ATTACKS_HPP
#define SOUNDSMOOTH_ATTACKS_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "soundsmooth/common.hpp"

namespace soundsmooth::attacks {

/// 1 iff (x - a) + a == x in T, i.e. x is consistent with being a + e for some e.
template <class T>
inline int predicate_fa(T x, T a) {
  const T diff = x - a;
  const T back = diff + a;
  return back == x ? 1 : 0;
}

/// Minimum of predicate_fa over all coordinates. Throws Error(Dimension) on size mismatch.
template <class T>
int predicate_ga(std::span<const T> x, std::span<const T> anchor) {
  if (x.size() != anchor.size()) throw Error(ErrorKind::Dimension, "predicate_ga: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!predicate_fa(x[i], anchor[i])) return 0;
  }
  return 1;
}

/// Memorized images with a class bit each. Host-precision copies of every
/// anchor are computed once at construction and reused.
class AnchorSet {
 public:
  AnchorSet() = default;
  AnchorSet(std::vector<QuantizedImage> images, std::vector<int> labels);

  std::size_t size() const noexcept { return images_.size(); }
  bool empty() const noexcept { return images_.empty(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<QuantizedImage>& images() const noexcept { return images_; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  template <class T>
  const std::vector<std::vector<T>>& host() const;

  /// Anchors carrying the given label, as a new set.
  AnchorSet with_label(int label) const;

 private:
  std::vector<QuantizedImage> images_;
  std::vector<int> labels_;
  std::size_t dimension_ = 0;
  std::vector<std::vector<float>> host32_;
  std::vector<std::vector<double>> host64_;
};

template <>
inline const std::vector<std::vector<float>>& AnchorSet::host<float>() const { return host32_; }
template <>
inline const std::vector<std::vector<double>>& AnchorSet::host<double>() const { return host64_; }

/// max over anchors of predicate_ga; 0 for an empty set. Stops at the first match.
template <class T>
int classifier_ha(std::span<const T> x, const AnchorSet& anchors) {
  if (anchors.empty()) return 0;
  if (x.size() != anchors.dimension()) throw Error(ErrorKind::Dimension, "classifier_ha: dimension mismatch");
  for (const auto& a : anchors.host<T>()) {
    if (predicate_ga<T>(x, a)) return 1;
  }
  return 0;
}

/// 1 if H_{A1}(x) = 1, or H_{A0}(x) = 0 and x_1 > floor(L/2)/L; else 0.
template <class T>
int classifier_m(std::span<const T> x, const AnchorSet& class0, const AnchorSet& class1, std::uint32_t levels) {
  if (x.empty()) throw Error(ErrorKind::Dimension, "classifier_m: empty input");
  if (classifier_ha<T>(x, class1)) return 1;
  const T threshold = static_cast<T>(levels / 2) / static_cast<T>(levels);
  return (!classifier_ha<T>(x, class0) && x[0] > threshold) ? 1 : 0;
}

/// (alpha, 1/L, ..., 1/L) with alpha = sign * 240/L, each entry a host quotient.
template <class T>
std::vector<T> universal_perturbation(std::size_t dimension, int alpha_sign, std::uint32_t levels) {
  if (dimension == 0) throw Error(ErrorKind::InvalidArgument, "universal_perturbation: d must be >= 1");
  const T step = T(1) / static_cast<T>(levels);
  std::vector<T> p(dimension, step);
  const T alpha = T(240) / static_cast<T>(levels);
  p[0] = alpha_sign < 0 ? -alpha : alpha;
  return p;
}

/// Euclidean norm, accumulated in long double.
template <class T>
double l2_norm(std::span<const T> v) {
  long double s = 0;
  for (T x : v) s += static_cast<long double>(x) * x;
  return static_cast<double>(std::sqrt(s));
}

/// Coordinatewise x + p in T.
template <class T>
std::vector<T> perturb(std::span<const T> x, std::span<const T> p) {
  if (x.size() != p.size()) throw Error(ErrorKind::Dimension, "perturb: dimension mismatch");
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + p[i];
  return out;
}

/// Monte-Carlo estimate of P[(t - b) + b == t] for t = a + e, e ~ N(0, sigma^2),
/// with noise from the platform normal generator seeded by `seed`.
template <class T>
double overlap_probability(T a, T b, double sigma, std::uint64_t trials, std::uint64_t seed);

struct OverlapMinimum {
  double probability = 1.0;
  int best_shift = 0;  // b = a + best_shift / L
};

/// Minimizes overlap_probability over b in {a + j/L : j = -2..2, j != 0}, each b in T.
template <class T>
OverlapMinimum minimize_overlap(std::uint32_t intensity, std::uint32_t levels, double sigma,
                                std::uint64_t trials, std::uint64_t seed);

}  // namespace soundsmooth::attacks

#endif  // SOUNDSMOOTH_ATTACKS_HPP
