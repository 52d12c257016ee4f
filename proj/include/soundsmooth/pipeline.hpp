// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

// Two-phase certification: n0 samples pick a candidate class, n fresh samples
// lower-bound its probability, and the bound becomes an l2 radius.
//
// The unsound runner adds platform Gaussian noise in host floating point. The
// sound runner maps each image onto the integer grid, adds exact discrete
// offsets from shared noise buffers, and classifies grid points.

#ifndef SOUNDSMOOTH_PIPELINE_HPP
#define SOUNDSMOOTH_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soundsmooth/classifiers.hpp"
#include "soundsmooth/common.hpp"
#include "soundsmooth/exact_tables.hpp"
#include "soundsmooth/images.hpp"
#include "soundsmooth/sampler.hpp"

namespace soundsmooth::pipeline {

enum class Method { Unsound, Sound };
enum class BoundKind { ClopperPearson, Hoeffding };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view text);
std::string_view to_string(BoundKind b) noexcept;
BoundKind parse_bound(std::string_view text);

inline constexpr int kAbstain = -1;

struct CertifyParams {
  double sigma = 0.5;
  std::uint64_t n0 = 100;
  std::uint64_t n = 100000;
  double alpha = 0.001;
  BoundKind bound = BoundKind::ClopperPearson;
  HostPrecision precision = HostPrecision::Binary64;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CertificationOutcome {
  std::size_t index = 0;
  int prediction = kAbstain;        // 0, 1 or kAbstain
  double p_lower = 0.0;
  std::optional<double> radius;     // present iff prediction != kAbstain
  std::uint64_t count0 = 0;         // estimation-phase votes
  std::uint64_t count1 = 0;
  std::uint64_t failures = 0;       // estimation-phase samples that could not be resolved
  Method method = Method::Unsound;
  double sigma = 0.0;
  double alpha = 0.0;
  std::uint64_t n0 = 0;
  std::uint64_t n = 0;

  bool abstained() const noexcept { return prediction == kAbstain; }
  bool operator==(const CertificationOutcome&) const = default;
};

/// Unsound certification of a host-precision point. Noise for the selection
/// and estimation phases comes from std::mt19937_64 seeded with
/// mix_seed(stream_seed, 0) and mix_seed(stream_seed, 1).
template <class T>
CertificationOutcome certify_unsound(const Classifier& f, std::span<const T> x, const CertifyParams& params,
                                     std::uint64_t stream_seed);

/// Unsound certification of a quantized image; the stream seed is mix_seed(seed, index).
CertificationOutcome certify_unsound(const Classifier& f, const QuantizedImage& x, const CertifyParams& params,
                                     std::size_t index = 0);

/// Selection and estimation buffers drawn once from one table and reused for every image.
struct SoundContext {
  tables::BreakingPointTable table;
  sampler::NoiseBuffer selection;
  sampler::NoiseBuffer estimation;

  /// Checks that both buffers come from the table's spec and share one dimension.
  void validate() const;
};

/// Draws the selection buffer from stream 0 and the estimation buffer from stream 1 of seed.
SoundContext make_sound_context(tables::BreakingPointTable table, std::size_t dimension, std::uint64_t n0,
                                std::uint64_t n, std::uint64_t seed);

/// Sound certification. sigma and the sample counts come from the context;
/// params.sigma must agree with the table. Samples that cannot be resolved
/// count against the candidate class.
CertificationOutcome certify_sound(const Classifier& f, const QuantizedImage& x, const SoundContext& context,
                                   const CertifyParams& params, std::size_t index = 0);

struct SummaryRow {
  double radius = 0.0;
  double certified_accuracy = 0.0;

  bool operator==(const SummaryRow&) const = default;
};

/// Radii of the default certified-accuracy summary.
const std::vector<double>& default_radius_grid();

struct DatasetResult {
  std::vector<CertificationOutcome> outcomes;
  std::vector<int> reference;        // base classifier on each clean image
  std::vector<SummaryRow> summary;
};

/// Fraction of images predicted as their reference label with radius >= r, for each r.
std::vector<SummaryRow> summarize(const std::vector<CertificationOutcome>& outcomes, const std::vector<int>& reference,
                                  const std::vector<double>& radii);

/// Certifies every image. For the sound method, pass a context (built once
/// and shared); when absent one is built from the default table for params.sigma.
DatasetResult run_dataset(const images::ImageSet& set, const Classifier& f, Method method, const CertifyParams& params,
                          const SoundContext* context = nullptr,
                          const std::vector<double>& radii = default_radius_grid());

/// CSV with header index,prediction,p_lower,radius,count0,count1,failures,method,sigma,alpha.
/// Abstentions print "abstain" with an empty radius; numbers use shortest round-trip form.
std::string emit_csv(const std::vector<CertificationOutcome>& outcomes);
std::vector<CertificationOutcome> parse_csv(std::string_view text);

struct Comparison {
  DatasetResult unsound;
  DatasetResult sound;
};

Comparison compare(const images::ImageSet& set, const Classifier& f, const CertifyParams& params,
                   const SoundContext* context = nullptr, const std::vector<double>& radii = default_radius_grid());

/// radius,unsound,sound rows.
std::string emit_comparison(const Comparison& c);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace soundsmooth::pipeline

#endif  // SOUNDSMOOTH_PIPELINE_HPP
