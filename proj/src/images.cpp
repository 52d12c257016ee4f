// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include "soundsmooth/images.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "soundsmooth/philox.hpp"

namespace soundsmooth::images {
namespace {

constexpr char kMagic[8] = {'Q', 'I', 'M', 'G', 'S', 'E', 'T', '\0'};
constexpr std::size_t kHeader = 8 + 4 + 4 + 8;

template <class U>
void put_le(std::string& out, U value) {
  for (unsigned i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

template <class U>
U get_le(const std::string& in, std::size_t pos) {
  U value = 0;
  for (unsigned i = 0; i < sizeof(U); ++i) value |= static_cast<U>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  return value;
}

// Unbiased integer in [0, bound) by rejection.
std::uint64_t uniform_below(sampler::UniformStream& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t v = rng.next();
    if (v < limit) return v % bound;
  }
}

}  // namespace

void ImageSet::validate() const {
  if (levels == 0) throw Error(ErrorKind::InvalidArgument, "image set: L must be >= 1");
  if (levels > 65535) throw Error(ErrorKind::InvalidArgument, "image set: L must fit in 16 bits");
  for (const auto& img : images) {
    if (img.dimension() != dimension) throw Error(ErrorKind::Dimension, "image set: images differ in dimension");
    if (img.levels != levels) throw Error(ErrorKind::InvalidArgument, "image set: images differ in L");
    img.validate();
  }
}

std::string serialize_images(const ImageSet& set) {
  set.validate();
  if (set.dimension > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorKind::InvalidArgument, "image set: d too large");
  std::string out(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(set.dimension));
  put_le<std::uint32_t>(out, set.levels);
  put_le<std::uint64_t>(out, set.images.size());
  const bool wide = set.levels > 255;
  for (const auto& img : set.images) {
    for (auto p : img.pixels) {
      if (wide) {
        put_le<std::uint16_t>(out, static_cast<std::uint16_t>(p));
      } else {
        out.push_back(static_cast<char>(p));
      }
    }
  }
  return out;
}

ImageSet deserialize_images(const std::string& bytes) {
  if (bytes.size() < kHeader || bytes.compare(0, 8, kMagic, 8) != 0) throw Error(ErrorKind::Format, "not an image set (bad magic)");
  ImageSet set;
  set.dimension = get_le<std::uint32_t>(bytes, 8);
  set.levels = get_le<std::uint32_t>(bytes, 12);
  const auto count = get_le<std::uint64_t>(bytes, 16);
  if (set.levels == 0 || set.levels > 65535) throw Error(ErrorKind::Format, "image set: bad L");
  const std::size_t width = set.levels > 255 ? 2 : 1;
  const std::size_t payload = bytes.size() - kHeader;
  if (set.dimension != 0 && count > payload / (set.dimension * width)) throw Error(ErrorKind::Format, "image set is truncated");
  if (payload != count * set.dimension * width) throw Error(ErrorKind::Format, "image set size does not match its header");
  set.images.resize(count);
  std::size_t pos = kHeader;
  for (auto& img : set.images) {
    img.levels = set.levels;
    img.pixels.resize(set.dimension);
    for (auto& p : img.pixels) {
      p = width == 2 ? get_le<std::uint16_t>(bytes, pos) : static_cast<unsigned char>(bytes[pos]);
      pos += width;
    }
  }
  try {
    set.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Format, std::string("image set: ") + e.what());
  }
  return set;
}

void write_images(const ImageSet& set, const std::filesystem::path& path) {
  const std::string bytes = serialize_images(set);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

ImageSet read_images(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_images(buf.str());
}

Pattern parse_pattern(std::string_view text) {
  if (text == "uniform") return Pattern::Uniform;
  if (text == "graded") return Pattern::Graded;
  throw Error(ErrorKind::InvalidArgument, "unknown image pattern '" + std::string(text) + "'");
}

std::string_view to_string(Pattern p) noexcept { return p == Pattern::Uniform ? "uniform" : "graded"; }

ImageSet generate(Pattern pattern, std::size_t count, std::size_t dimension, std::uint32_t levels, std::uint64_t seed) {
  if (dimension == 0) throw Error(ErrorKind::InvalidArgument, "generate: d must be >= 1");
  ImageSet set;
  set.dimension = dimension;
  set.levels = levels;
  set.validate();
  sampler::UniformStream rng(seed, 0x51A6E5ULL);
  const std::int64_t jitter = std::max<std::int64_t>(1, levels / 16);
  set.images.resize(count);
  for (auto& img : set.images) {
    img.levels = levels;
    img.pixels.resize(dimension);
    if (pattern == Pattern::Uniform) {
      for (auto& p : img.pixels) p = static_cast<std::uint32_t>(uniform_below(rng, levels + 1ULL));
    } else {
      const auto base = static_cast<std::int64_t>(uniform_below(rng, levels + 1ULL));
      for (auto& p : img.pixels) {
        const auto delta = static_cast<std::int64_t>(uniform_below(rng, 2 * jitter + 1)) - jitter;
        p = static_cast<std::uint32_t>(std::clamp<std::int64_t>(base + delta, 0, levels));
      }
    }
  }
  return set;
}

}  // namespace soundsmooth::images
