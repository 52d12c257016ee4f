// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

// Exact sampling of the clamped discrete Gaussian from uniform integers.
// Offsets are drawn once around zero and shifted onto each image, then clamped
// to [-k, k + L].

#ifndef SOUNDSMOOTH_SAMPLER_HPP
#define SOUNDSMOOTH_SAMPLER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "soundsmooth/common.hpp"
#include "soundsmooth/exact_tables.hpp"

namespace soundsmooth::sampler {

using tables::BreakingPointTable;
using tables::GridSpec;
using tables::OffsetRange;

/// Nearest grid index round(x * L), ties to even, clamped to [-k, k + L].
/// The product is resolved exactly, so midpoints are detected without error.
/// Throws Error(Domain) on NaN.
template <class T>
std::int64_t quantize_scalar(T x, const GridSpec& spec) {
  if (std::isnan(x)) throw Error(ErrorKind::Domain, "quantize: NaN input");
  const T levels = static_cast<T>(spec.levels);
  const T p = x * levels;
  const auto low = static_cast<T>(spec.clamp_low());
  const auto high = static_cast<T>(spec.clamp_high());
  if (!(p > low - 1)) return spec.clamp_low();
  if (!(p < high + 1)) return spec.clamp_high();
  const T err = std::fma(x, levels, -p);  // x * L == p + err exactly
  T r = std::nearbyint(p);
  const T d = p - r;
  // p is the correctly rounded product, so only a product rounded onto a
  // midpoint can hide which side of it the exact value lies.
  if ((d == T(0.5) && err > 0) || (d == T(-0.5) && err < 0)) r += 2 * d;
  const auto g = static_cast<std::int64_t>(r);
  return std::clamp(g, spec.clamp_low(), spec.clamp_high());
}

template <class T>
std::vector<std::int64_t> quantize_gk(std::span<const T> x, const GridSpec& spec) {
  std::vector<std::int64_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = quantize_scalar(x[i], spec);
  return out;
}

/// Offsets for a single n-bit uniform value (the table's lookup).
OffsetRange draw_offset(std::uint64_t u, const BreakingPointTable& table);

/// max(-k, min(k + L, x + offset)).
std::int64_t shift_clamp(std::int64_t x, std::int64_t offset, const GridSpec& spec);

/// A coordinate whose draw sat on a breaking point; its true offset lies in [lo, hi].
struct AmbiguousDraw {
  std::uint64_t index = 0;  // sample * dimension + coordinate
  std::int32_t hi = 0;      // lo is stored in the dense array

  bool operator==(const AmbiguousDraw&) const = default;
};

/// n samples of d offsets drawn once from one Philox stream and reused for every image.
class NoiseBuffer {
 public:
  NoiseBuffer() = default;
  NoiseBuffer(GridSpec spec, std::uint64_t seed, std::uint64_t stream, std::size_t dimension, std::size_t samples,
              std::vector<std::int32_t> offsets, std::vector<AmbiguousDraw> ambiguous);

  const GridSpec& spec() const noexcept { return spec_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t samples() const noexcept { return samples_; }

  /// Lower offsets of sample s (d entries).
  std::span<const std::int32_t> offsets(std::size_t s) const {
    return {offsets_.data() + s * dimension_, dimension_};
  }
  const std::vector<std::int32_t>& raw_offsets() const noexcept { return offsets_; }
  /// Breaking-point draws, sorted by index.
  const std::vector<AmbiguousDraw>& ambiguous() const noexcept { return ambiguous_; }
  /// Breaking-point draws that belong to sample s.
  std::span<const AmbiguousDraw> ambiguous_in(std::size_t s) const;

  /// Clamped sample s around image x, or false when some pixel's draw cannot
  /// be resolved (the sample is a Failure for this image).
  bool apply(std::size_t s, std::span<const std::uint32_t> x, std::span<std::int64_t> out) const;

  /// Marks one draw as a breaking point with the given upper offset (used to inject failures in tests).
  void inject_ambiguity(std::size_t sample, std::size_t coordinate, std::int32_t hi);

  bool operator==(const NoiseBuffer&) const = default;

 private:
  GridSpec spec_;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::size_t dimension_ = 0;
  std::size_t samples_ = 0;
  std::vector<std::int32_t> offsets_;
  std::vector<AmbiguousDraw> ambiguous_;
};

/// Draws n samples of dimension d from Philox keyed by (seed, stream). Each
/// uniform is the top n_bits of one 64-bit output.
NoiseBuffer build_noise_buffer(const BreakingPointTable& table, std::size_t dimension, std::size_t samples,
                               std::uint64_t seed, std::uint64_t stream = 0);

/// Noise file: "SNDNOISE", version, grid spec, buffer count, buffers, CRC-64.
void write_noise(const std::vector<NoiseBuffer>& buffers, const std::filesystem::path& path);
std::vector<NoiseBuffer> read_noise(const std::filesystem::path& path);
std::string serialize_noise(const std::vector<NoiseBuffer>& buffers);
std::vector<NoiseBuffer> deserialize_noise(const std::string& bytes);

}  // namespace soundsmooth::sampler

#endif  // SOUNDSMOOTH_SAMPLER_HPP
