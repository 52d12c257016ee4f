// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef SOUNDSMOOTH_COMMON_HPP
#define SOUNDSMOOTH_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace soundsmooth {

enum class ErrorKind {
  InvalidArgument,
  Domain,
  Io,
  Format,        // bad magic, unsupported version, truncated file
  Checksum,
  NonMonotone,
  SpecMismatch,
  Dimension,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception. The C API maps `kind()` onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Floating-point format in which every step of a host-side computation runs.
enum class HostPrecision { Binary32, Binary64 };

std::string_view to_string(HostPrecision p) noexcept;
HostPrecision parse_precision(std::string_view text);

/// A d-vector of integer intensities in {0, ..., L}.
struct QuantizedImage {
  std::vector<std::uint32_t> pixels;
  std::uint32_t levels = 255;  // L

  std::size_t dimension() const noexcept { return pixels.size(); }
  void validate() const;
};

/// Intensities as the host-precision quotients pixel / L, each computed once in T.
template <class T>
std::vector<T> to_host(const QuantizedImage& image) {
  std::vector<T> out(image.pixels.size());
  const T levels = static_cast<T>(image.levels);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<T>(image.pixels[i]) / levels;
  return out;
}

/// SplitMix64 finalizer; used to derive independent seeds from (seed, index) pairs.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace soundsmooth

#endif  // SOUNDSMOOTH_COMMON_HPP
