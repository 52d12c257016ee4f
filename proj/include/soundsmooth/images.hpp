// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef SOUNDSMOOTH_IMAGES_HPP
#define SOUNDSMOOTH_IMAGES_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "soundsmooth/common.hpp"

namespace soundsmooth::images {

/// Images sharing one dimension and one grid.
struct ImageSet {
  std::size_t dimension = 0;
  std::uint32_t levels = 255;
  std::vector<QuantizedImage> images;

  void validate() const;
};

/// "QIMGSET\0", d u32, L u32, count u64, then count * d intensities
/// (u8 when L <= 255, else u16), all little-endian.
std::string serialize_images(const ImageSet& set);
ImageSet deserialize_images(const std::string& bytes);
void write_images(const ImageSet& set, const std::filesystem::path& path);
ImageSet read_images(const std::filesystem::path& path);

enum class Pattern {
  Uniform,  // every pixel independent and uniform on 0..L
  Graded,   // a per-image base level plus small per-pixel jitter, so mean intensity spreads over 0..L
};

Pattern parse_pattern(std::string_view text);
std::string_view to_string(Pattern p) noexcept;

/// Deterministic synthetic images drawn from a Philox stream keyed by seed.
ImageSet generate(Pattern pattern, std::size_t count, std::size_t dimension, std::uint32_t levels, std::uint64_t seed);

}  // namespace soundsmooth::images

#endif  // SOUNDSMOOTH_IMAGES_HPP
