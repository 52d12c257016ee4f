// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include "soundsmooth/sampler.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "soundsmooth/philox.hpp"

namespace soundsmooth::sampler {
namespace {

constexpr char kMagic[8] = {'S', 'N', 'D', 'N', 'O', 'I', 'S', 'E'};
constexpr std::uint16_t kVersion = 1;

template <class U>
void put_le(std::string& out, U value) {
  for (unsigned i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes, std::size_t end) : bytes_(bytes), end_(end) {}

  template <class U>
  U get() {
    if (pos_ + sizeof(U) > end_) throw Error(ErrorKind::Format, "noise file is truncated");
    std::make_unsigned_t<U> value = 0;
    for (unsigned i = 0; i < sizeof(U); ++i) {
      value |= static_cast<std::make_unsigned_t<U>>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(U);
    return static_cast<U>(value);
  }
  void expect_room(std::uint64_t count, std::size_t width) const {
    if (count > (end_ - pos_) / width) throw Error(ErrorKind::Format, "noise file is truncated");
  }
  bool done() const { return pos_ == end_; }

 private:
  const std::string& bytes_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

}  // namespace

OffsetRange draw_offset(std::uint64_t u, const BreakingPointTable& table) {
  if (table.spec().n_bits < 64 && (u >> table.spec().n_bits) != 0) {
    throw Error(ErrorKind::InvalidArgument, "draw_offset: uniform value exceeds n_bits");
  }
  return table.lookup(u);
}

std::int64_t shift_clamp(std::int64_t x, std::int64_t offset, const GridSpec& spec) {
  return std::max(spec.clamp_low(), std::min(spec.clamp_high(), x + offset));
}

NoiseBuffer::NoiseBuffer(GridSpec spec, std::uint64_t seed, std::uint64_t stream, std::size_t dimension,
                         std::size_t samples, std::vector<std::int32_t> offsets, std::vector<AmbiguousDraw> ambiguous)
    : spec_(spec),
      seed_(seed),
      stream_(stream),
      dimension_(dimension),
      samples_(samples),
      offsets_(std::move(offsets)),
      ambiguous_(std::move(ambiguous)) {
  if (dimension_ == 0 || samples_ == 0) throw Error(ErrorKind::InvalidArgument, "noise buffer: d and n must be >= 1");
  if (offsets_.size() != dimension_ * samples_) throw Error(ErrorKind::Format, "noise buffer: offset count mismatch");
  const auto K = spec_.half_range();
  for (auto o : offsets_) {
    if (o < -K || o > K) throw Error(ErrorKind::Format, "noise buffer: offset outside [-K, K]");
  }
  for (std::size_t i = 0; i < ambiguous_.size(); ++i) {
    const auto& a = ambiguous_[i];
    if (a.index >= offsets_.size() || (i > 0 && a.index <= ambiguous_[i - 1].index) || a.hi < offsets_[a.index] ||
        a.hi > K) {
      throw Error(ErrorKind::Format, "noise buffer: malformed breaking-point list");
    }
  }
}

std::span<const AmbiguousDraw> NoiseBuffer::ambiguous_in(std::size_t s) const {
  const std::uint64_t first = s * dimension_;
  const std::uint64_t last = first + dimension_;
  const auto lo = std::lower_bound(ambiguous_.begin(), ambiguous_.end(), first,
                                   [](const AmbiguousDraw& a, std::uint64_t v) { return a.index < v; });
  const auto hi = std::lower_bound(lo, ambiguous_.end(), last,
                                   [](const AmbiguousDraw& a, std::uint64_t v) { return a.index < v; });
  return {ambiguous_.data() + (lo - ambiguous_.begin()), static_cast<std::size_t>(hi - lo)};
}

bool NoiseBuffer::apply(std::size_t s, std::span<const std::uint32_t> x, std::span<std::int64_t> out) const {
  if (x.size() != dimension_ || out.size() != dimension_) throw Error(ErrorKind::Dimension, "noise buffer: dimension mismatch");
  const auto row = offsets(s);
  for (std::size_t i = 0; i < dimension_; ++i) out[i] = shift_clamp(x[i], row[i], spec_);
  for (const auto& a : ambiguous_in(s)) {
    const std::size_t i = a.index - s * dimension_;
    if (shift_clamp(x[i], a.hi, spec_) != out[i]) return false;
  }
  return true;
}

void NoiseBuffer::inject_ambiguity(std::size_t sample, std::size_t coordinate, std::int32_t hi) {
  if (sample >= samples_ || coordinate >= dimension_) throw Error(ErrorKind::InvalidArgument, "inject: index out of range");
  const std::uint64_t index = sample * dimension_ + coordinate;
  if (hi < offsets_[index] || hi > spec_.half_range()) throw Error(ErrorKind::InvalidArgument, "inject: bad upper offset");
  auto it = std::lower_bound(ambiguous_.begin(), ambiguous_.end(), index,
                             [](const AmbiguousDraw& a, std::uint64_t v) { return a.index < v; });
  if (it != ambiguous_.end() && it->index == index) {
    it->hi = std::max(it->hi, hi);
  } else {
    ambiguous_.insert(it, AmbiguousDraw{index, hi});
  }
}

NoiseBuffer build_noise_buffer(const BreakingPointTable& table, std::size_t dimension, std::size_t samples,
                               std::uint64_t seed, std::uint64_t stream) {
  if (dimension == 0 || samples == 0) throw Error(ErrorKind::InvalidArgument, "noise buffer: d and n must be >= 1");
  if (samples > std::numeric_limits<std::size_t>::max() / dimension) {
    throw Error(ErrorKind::InvalidArgument, "noise buffer: d * n overflows");
  }
  const unsigned shift = 64 - table.spec().n_bits;
  UniformStream uniform(seed, stream);
  std::vector<std::int32_t> offsets(dimension * samples);
  std::vector<AmbiguousDraw> ambiguous;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const OffsetRange r = table.lookup(uniform.next() >> shift);
    offsets[i] = static_cast<std::int32_t>(r.lo);
    if (!r.determinate()) ambiguous.push_back({i, static_cast<std::int32_t>(r.hi)});
  }
  return NoiseBuffer(table.spec(), seed, stream, dimension, samples, std::move(offsets), std::move(ambiguous));
}

std::string serialize_noise(const std::vector<NoiseBuffer>& buffers) {
  if (buffers.empty()) throw Error(ErrorKind::InvalidArgument, "noise file: no buffers");
  const GridSpec& spec = buffers.front().spec();
  for (const auto& b : buffers) {
    if (!(b.spec() == spec)) throw Error(ErrorKind::SpecMismatch, "noise file: buffers disagree on grid spec");
  }
  std::string out(kMagic, sizeof kMagic);
  put_le<std::uint16_t>(out, kVersion);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(spec.n_bits));
  put_le<std::uint32_t>(out, spec.levels);
  put_le<std::uint32_t>(out, spec.k);
  put_le<std::uint64_t>(out, spec.sigma_num);
  put_le<std::uint64_t>(out, spec.sigma_den);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(buffers.size()));
  for (const auto& b : buffers) {
    put_le<std::uint64_t>(out, b.seed());
    put_le<std::uint64_t>(out, b.stream());
    put_le<std::uint64_t>(out, b.dimension());
    put_le<std::uint64_t>(out, b.samples());
    for (auto o : b.raw_offsets()) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(o));
    put_le<std::uint64_t>(out, b.ambiguous().size());
    for (const auto& a : b.ambiguous()) {
      put_le<std::uint64_t>(out, a.index);
      put_le<std::uint32_t>(out, static_cast<std::uint32_t>(a.hi));
    }
  }
  put_le<std::uint64_t>(out, tables::crc64(out.data(), out.size()));
  return out;
}

std::vector<NoiseBuffer> deserialize_noise(const std::string& bytes) {
  if (bytes.size() < sizeof kMagic + 8 || bytes.compare(0, sizeof kMagic, kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorKind::Format, "not a noise file (bad magic)");
  }
  const std::size_t body = bytes.size() - 8;
  std::uint64_t stored = 0;
  for (unsigned i = 0; i < 8; ++i) stored |= std::uint64_t{static_cast<unsigned char>(bytes[body + i])} << (8 * i);
  if (tables::crc64(bytes.data(), body) != stored) {
    throw Error(ErrorKind::Checksum, "noise file checksum mismatch");
  }
  Reader in(bytes, body);
  for (std::size_t i = 0; i < sizeof kMagic; ++i) in.get<std::uint8_t>();
  const auto version = in.get<std::uint16_t>();
  if (version != kVersion) throw Error(ErrorKind::Format, "unsupported noise file version " + std::to_string(version));
  GridSpec spec;
  spec.n_bits = in.get<std::uint8_t>();
  spec.levels = in.get<std::uint32_t>();
  spec.k = in.get<std::uint32_t>();
  spec.sigma_num = in.get<std::uint64_t>();
  spec.sigma_den = in.get<std::uint64_t>();
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Format, std::string("noise file: ") + e.what());
  }
  const auto count = in.get<std::uint32_t>();
  std::vector<NoiseBuffer> out;
  for (std::uint32_t b = 0; b < count; ++b) {
    const auto seed = in.get<std::uint64_t>();
    const auto stream = in.get<std::uint64_t>();
    const auto d = in.get<std::uint64_t>();
    const auto n = in.get<std::uint64_t>();
    if (d == 0 || n == 0 || n > std::numeric_limits<std::uint64_t>::max() / d) {
      throw Error(ErrorKind::Format, "noise file: bad buffer shape");
    }
    in.expect_room(d * n, 4);
    std::vector<std::int32_t> offsets(d * n);
    for (auto& o : offsets) o = in.get<std::int32_t>();
    const auto amb = in.get<std::uint64_t>();
    in.expect_room(amb, 12);
    std::vector<AmbiguousDraw> ambiguous(amb);
    for (auto& a : ambiguous) {
      a.index = in.get<std::uint64_t>();
      a.hi = in.get<std::int32_t>();
    }
    out.emplace_back(spec, seed, stream, d, n, std::move(offsets), std::move(ambiguous));
  }
  if (!in.done()) throw Error(ErrorKind::Format, "noise file has trailing bytes");
  return out;
}

void write_noise(const std::vector<NoiseBuffer>& buffers, const std::filesystem::path& path) {
  const std::string bytes = serialize_noise(buffers);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

std::vector<NoiseBuffer> read_noise(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_noise(buf.str());
}

}  // namespace soundsmooth::sampler
