// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

// Breaking-point tables for the discretized, truncated normal distribution.
//
// Everything here runs in grid units: intensities are integers 0..L, the
// clamp margin k is an integer number of grid steps, and the noise standard
// deviation in grid units is sigma * L (an exact rational). Entry j of a table
// is the smallest uniform n-bit value at which the sampled offset exceeds
// -K + j, where K = k + L.

#ifndef SOUNDSMOOTH_EXACT_TABLES_HPP
#define SOUNDSMOOTH_EXACT_TABLES_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "soundsmooth/common.hpp"

namespace soundsmooth::tables {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Threshold = unsigned __int128;

struct GridSpec {
  std::uint32_t levels = 255;     // L
  std::uint32_t k = 1530;         // clamp margin, in grid steps
  std::uint64_t sigma_num = 1;    // sigma in normalized units (intensity / L)
  std::uint64_t sigma_den = 2;
  unsigned n_bits = 64;

  void validate() const;

  Rational sigma() const { return Rational(sigma_num, sigma_den); }
  /// sigma * L, the standard deviation measured in grid steps.
  Rational sigma_grid() const { return Rational(BigInt(sigma_num) * levels, sigma_den); }
  /// Largest offset magnitude that can still move a pixel: K = k + L.
  std::int64_t half_range() const { return static_cast<std::int64_t>(k) + levels; }
  std::size_t entry_count() const { return static_cast<std::size_t>(2 * half_range() + 1); }
  /// Lowest and highest value after clamping: -k and k + L.
  std::int64_t clamp_low() const { return -static_cast<std::int64_t>(k); }
  std::int64_t clamp_high() const { return static_cast<std::int64_t>(k) + levels; }
  Threshold modulus() const { return Threshold{1} << n_bits; }

  bool operator==(const GridSpec&) const = default;
};

/// Spec with the default margin of 6 normalized units (6 L grid steps), widened
/// to ceil(6 sigma) units for sigma above 1.
GridSpec default_spec(std::uint32_t levels, std::uint64_t sigma_num, std::uint64_t sigma_den, unsigned n_bits = 64);

/// Closed interval [lo, hi] with exact rational endpoints.
struct Enclosure {
  Rational lo;
  Rational hi;

  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  Rational width() const { return hi - lo; }
};

/// Encloses P[N(0, sigma^2) <= x] in an interval of width at most 2^-width_bits.
Enclosure gaussian_cdf_enclosure(const Rational& x, const Rational& sigma, unsigned width_bits);

/// Offsets consistent with one uniform draw. lo == hi for an ordinary draw;
/// lo < hi when the draw sits on a breaking point and the true offset is
/// only known to lie in [lo, hi].
struct OffsetRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  bool determinate() const noexcept { return lo == hi; }
  bool operator==(const OffsetRange&) const = default;
};

class BreakingPointTable {
 public:
  BreakingPointTable() = default;
  BreakingPointTable(GridSpec spec, std::vector<Threshold> thresholds, std::vector<bool> ambiguous);

  const GridSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return thresholds_.size(); }
  const std::vector<Threshold>& thresholds() const noexcept { return thresholds_; }
  Threshold threshold(std::size_t j) const { return thresholds_.at(j); }
  /// True when the enclosure could not separate two candidate ceilings; the
  /// stored value is then the upper candidate.
  bool ambiguous(std::size_t j) const { return ambiguous_.at(j); }
  const std::vector<bool>& ambiguous_flags() const noexcept { return ambiguous_; }
  std::size_t ambiguous_count() const noexcept;

  /// Offsets for the uniform value u in [0, 2^n_bits). A value equal to a
  /// threshold (or one below an ambiguous threshold) yields a range.
  OffsetRange lookup(Threshold u) const;

  /// Structural checks: length, monotonicity, range and final entry.
  void validate() const;

  bool operator==(const BreakingPointTable&) const = default;

 private:
  GridSpec spec_;
  std::vector<Threshold> thresholds_;
  std::vector<bool> ambiguous_;
};

struct BuildOptions {
  /// Enclosure width exponent; 0 selects n_bits + 16.
  unsigned width_bits = 0;
  /// Extra refinement passes (64 more bits each) before an entry is declared ambiguous.
  unsigned refinements = 3;
};

BreakingPointTable build_table(const GridSpec& spec, const BuildOptions& options = {});

/// Binary file: "SNDSMOTH", version, spec, entries, ambiguity bitset, CRC-64.
void write_table(const BreakingPointTable& table, const std::filesystem::path& path);
BreakingPointTable read_table(const std::filesystem::path& path);
std::string serialize_table(const BreakingPointTable& table);
BreakingPointTable deserialize_table(const std::string& bytes);

/// CRC-64/XZ.
std::uint64_t crc64(const void* data, std::size_t size) noexcept;

struct FailureBound {
  Rational per_draw;            // P[a uniform draw lands on a breaking point]
  Rational per_coordinate;      // P[a pixel cannot be resolved], worst case over intensities
  std::uint64_t coordinates = 0;
  Rational aggregate_failure;   // union bound coordinates * per_coordinate, capped at 1
  Rational aggregate_success;   // 1 - aggregate_failure <= (1 - per_coordinate)^coordinates
};

/// Bound from the spec alone: every one of the 2K interior thresholds is a
/// breaking point, and a pixel is affected by at most 2k + L of them.
FailureBound failure_probability_bound(const GridSpec& spec, std::uint64_t dimension, std::uint64_t samples);

/// Exact counts from a built table (distinct breaking points plus ambiguous entries).
FailureBound failure_probability_bound(const BreakingPointTable& table, std::uint64_t dimension,
                                       std::uint64_t samples);

/// Decimal text of a 128-bit threshold.
std::string to_string(Threshold v);

}  // namespace soundsmooth::tables

#endif  // SOUNDSMOOTH_EXACT_TABLES_HPP
