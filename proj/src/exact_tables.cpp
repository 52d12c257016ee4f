// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include "soundsmooth/exact_tables.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include <boost/crc.hpp>

#include "soundsmooth/common.hpp"

namespace soundsmooth::tables {
namespace {

namespace mp = boost::multiprecision;

BigInt pow2(unsigned e) { return BigInt(1) << e; }

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (a % b != 0 && a > 0) ++q;
  return q;
}

// Value enclosed in [lo, hi] * 2^-precision.
struct Fixed {
  BigInt lo;
  BigInt hi;
  unsigned precision = 0;
};

// atan(1/x) * 2^P, enclosed. Each term is an exact floor, so the sum is off
// by less than one unit per term, plus the first omitted term (< 1 unit).
Fixed atan_inverse(unsigned x, unsigned precision) {
  const BigInt one = pow2(precision);
  const BigInt x2 = BigInt(x) * x;
  BigInt power = x;  // x^(2m+1)
  BigInt sum = 0;
  std::uint64_t terms = 0;
  for (unsigned m = 0;; ++m) {
    const BigInt term = one / (power * (2 * m + 1));
    if (term == 0) break;
    if (m % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
    ++terms;
    power *= x2;
  }
  return {sum - terms - 1, sum + terms + 1, precision};
}

// pi = 16 atan(1/5) - 4 atan(1/239).
Fixed compute_pi(unsigned precision) {
  const Fixed a = atan_inverse(5, precision);
  const Fixed b = atan_inverse(239, precision);
  return {16 * a.lo - 4 * b.hi, 16 * a.hi - 4 * b.lo, precision};
}

std::mutex g_constants_mutex;
std::map<unsigned, Fixed> g_inv_sqrt_two_pi;

// 1/sqrt(2 pi) * 2^P, enclosed.
Fixed inv_sqrt_two_pi(unsigned precision) {
  std::lock_guard<std::mutex> lock(g_constants_mutex);
  if (auto it = g_inv_sqrt_two_pi.find(precision); it != g_inv_sqrt_two_pi.end()) return it->second;
  const Fixed pi = compute_pi(precision + 8);
  // Rescale pi to P bits, outward.
  const BigInt pi_lo = floor_div(pi.lo, 256);
  const BigInt pi_hi = ceil_div(pi.hi, 256);
  // c 2^P = sqrt(2^(3P) / (2 pi 2^P))
  const BigInt big = pow2(3 * precision);
  const BigInt lo = mp::sqrt(BigInt(big / (2 * pi_hi)));
  const BigInt hi = mp::sqrt(ceil_div(big, 2 * pi_lo)) + 1;
  Fixed out{lo, hi, precision};
  g_inv_sqrt_two_pi.emplace(precision, out);
  return out;
}

// Number of bits v needs; v >= 0.
unsigned bit_length(const BigInt& v) { return v == 0 ? 0 : static_cast<unsigned>(mp::msb(v)) + 1; }

// Phi(y) for y > 0 via Phi(y) = 1/2 + y S(t) / sqrt(2 pi), t = y^2/2,
// S(t) = sum_n (-1)^n t^n / (n! (2n + 1)). Floors feed lower bounds and
// ceilings feed upper bounds throughout.
Fixed upper_half_series(const Rational& y, unsigned precision) {
  const BigInt one = pow2(precision);
  const Rational t = y * y / 2;
  const BigInt tp = mp::numerator(t);
  const BigInt tq = mp::denominator(t);

  BigInt u_lo = one, u_hi = one;  // t^n / n!
  BigInt s_lo = one, s_hi = one;
  for (std::uint64_t n = 1;; ++n) {
    const BigInt den = tq * n;
    u_lo = floor_div(u_lo * tp, den);
    u_hi = ceil_div(u_hi * tp, den);
    const BigInt a_lo = floor_div(u_lo, 2 * n + 1);
    const BigInt a_hi = ceil_div(u_hi, 2 * n + 1);
    if (n % 2 == 1) {
      s_lo -= a_hi;
      s_hi -= a_lo;
    } else {
      s_lo += a_lo;
      s_hi += a_hi;
    }
    // Once n > t the terms decrease, so the alternating remainder is
    // bounded by the latest term.
    if (tp < tq * n && a_hi <= 1) {
      s_lo -= a_hi;
      s_hi += a_hi;
      break;
    }
  }

  const Fixed c = inv_sqrt_two_pi(precision);
  const BigInt yp = mp::numerator(y);
  const BigInt yq = mp::denominator(y);
  const BigInt yc_lo = floor_div(yp * c.lo, yq);
  const BigInt yc_hi = ceil_div(yp * c.hi, yq);
  const BigInt p_lo = floor_div(s_lo * (s_lo >= 0 ? yc_lo : yc_hi), one);
  const BigInt p_hi = ceil_div(s_hi * (s_hi >= 0 ? yc_hi : yc_lo), one);
  const BigInt half = pow2(precision - 1);
  BigInt lo = half + p_lo;
  BigInt hi = half + p_hi;
  if (lo < half) lo = half;
  if (hi > one) hi = one;
  return {lo, hi, precision};
}

// Standard normal CDF at y, width at most 2^-width_bits.
Fixed standard_cdf(const Rational& y, unsigned width_bits) {
  if (y == 0) {
    const unsigned p = std::max(width_bits, 1u);
    return {pow2(p - 1), pow2(p - 1), p};
  }
  const bool negative = y < 0;
  const Rational a = negative ? Rational(-y) : y;

  // Far tail: 1 - Phi(a) <= exp(-t)/2 < 2^-(1.442 floor(t)).
  const Rational t = a * a / 2;
  const BigInt t_floor = mp::numerator(t) / mp::denominator(t);
  if (t_floor * 1442 / 1000 >= width_bits + 1) {
    const unsigned p = width_bits + 1;
    const BigInt one = pow2(p);
    if (negative) return {BigInt(0), BigInt(1), p};
    return {one - 1, one, p};
  }

  // Largest term of the series is about e^t; the guard bits absorb it.
  const unsigned t_bits = static_cast<unsigned>(t_floor.convert_to<std::uint64_t>() * 1443 / 1000 + 1);
  unsigned guard = t_bits + 32;
  for (;;) {
    const unsigned precision = width_bits + guard;
    Fixed r = upper_half_series(a, precision);
    if (r.hi - r.lo <= pow2(precision - width_bits)) {
      if (negative) {
        const BigInt one = pow2(precision);
        return {one - r.hi, one - r.lo, precision};
      }
      return r;
    }
    guard += 32 + bit_length(BigInt(guard));
  }
}

// ceil(2^n v) for v enclosed at precision P >= n, clamped to [1, 2^n].
BigInt scaled_ceiling(const BigInt& v, unsigned precision, unsigned n_bits) {
  BigInt c = ceil_div(v, pow2(precision - n_bits));
  if (c < 1) c = 1;
  if (c > pow2(n_bits)) c = pow2(n_bits);
  return c;
}

Threshold to_threshold(const BigInt& v) {
  Threshold out = 0;
  for (int shift = 96; shift >= 0; shift -= 32) {
    out = (out << 32) | static_cast<std::uint32_t>(((v >> shift) & 0xFFFFFFFFu).convert_to<std::uint64_t>());
  }
  return out;
}

template <class U>
void put_le(std::string& out, U value, unsigned bytes = sizeof(U)) {
  for (unsigned i = 0; i < bytes; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <class U>
  U get(unsigned width = sizeof(U)) {
    need(width);
    U value = 0;
    for (unsigned i = 0; i < width; ++i) {
      value |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += width;
    return value;
  }
  std::string take(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw Error(ErrorKind::Format, "table file is truncated");
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[8] = {'S', 'N', 'D', 'S', 'M', 'O', 'T', 'H'};
constexpr std::uint16_t kVersion = 1;

}  // namespace

void GridSpec::validate() const {
  if (levels < 1) throw Error(ErrorKind::InvalidArgument, "grid spec: L must be >= 1");
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "grid spec: k must be >= 1");
  if (sigma_num == 0 || sigma_den == 0) throw Error(ErrorKind::InvalidArgument, "grid spec: sigma must be a positive fraction");
  if (n_bits != 8 && n_bits != 16 && n_bits != 32 && n_bits != 64) {
    throw Error(ErrorKind::InvalidArgument, "grid spec: n_bits must be 8, 16, 32 or 64");
  }
  if (half_range() > (std::int64_t{1} << 30)) throw Error(ErrorKind::InvalidArgument, "grid spec: k + L too large");
}

GridSpec default_spec(std::uint32_t levels, std::uint64_t sigma_num, std::uint64_t sigma_den, unsigned n_bits) {
  GridSpec spec;
  spec.levels = levels;
  spec.sigma_num = sigma_num;
  spec.sigma_den = sigma_den;
  spec.n_bits = n_bits;
  const std::uint64_t units = sigma_num <= sigma_den ? 6 : (6 * sigma_num + sigma_den - 1) / sigma_den;
  spec.k = static_cast<std::uint32_t>(units * levels);
  spec.validate();
  return spec;
}

Enclosure gaussian_cdf_enclosure(const Rational& x, const Rational& sigma, unsigned width_bits) {
  if (sigma <= 0) throw Error(ErrorKind::InvalidArgument, "enclosure: sigma must be positive");
  if (width_bits < 1) throw Error(ErrorKind::InvalidArgument, "enclosure: width exponent must be >= 1");
  const Fixed f = standard_cdf(x / sigma, width_bits);
  const Rational scale(pow2(f.precision));
  return {Rational(f.lo) / scale, Rational(f.hi) / scale};
}

BreakingPointTable::BreakingPointTable(GridSpec spec, std::vector<Threshold> thresholds, std::vector<bool> ambiguous)
    : spec_(spec), thresholds_(std::move(thresholds)), ambiguous_(std::move(ambiguous)) {
  validate();
}

std::size_t BreakingPointTable::ambiguous_count() const noexcept {
  return static_cast<std::size_t>(std::count(ambiguous_.begin(), ambiguous_.end(), true));
}

void BreakingPointTable::validate() const {
  spec_.validate();
  if (thresholds_.size() != spec_.entry_count() || ambiguous_.size() != thresholds_.size()) {
    throw Error(ErrorKind::SpecMismatch, "table length does not match its grid spec");
  }
  const Threshold top = spec_.modulus();
  for (std::size_t j = 0; j < thresholds_.size(); ++j) {
    if (thresholds_[j] < 1 || thresholds_[j] > top) throw Error(ErrorKind::Format, "threshold outside [1, 2^n]");
    if (j > 0 && thresholds_[j] < thresholds_[j - 1]) {
      throw Error(ErrorKind::NonMonotone, "thresholds decrease at entry " + std::to_string(j));
    }
  }
  if (thresholds_.back() != top || ambiguous_.back()) throw Error(ErrorKind::Format, "final threshold must be 2^n");
}

OffsetRange BreakingPointTable::lookup(Threshold u) const {
  const auto begin = thresholds_.begin();
  const std::int64_t base = -spec_.half_range();
  const auto below = std::lower_bound(begin, thresholds_.end(), u);  // first T_j >= u
  const auto upto = std::upper_bound(below, thresholds_.end(), u);   // first T_j > u
  std::int64_t hi_index = upto - begin;
  // An ambiguous T_j may really be u + 1 - 1 = u.
  for (auto it = upto; it != thresholds_.end() && *it == u + 1; ++it) {
    const std::size_t j = static_cast<std::size_t>(it - begin);
    if (ambiguous_[j]) hi_index = static_cast<std::int64_t>(j) + 1;
  }
  return {base + (below - begin), base + hi_index};
}

BreakingPointTable build_table(const GridSpec& spec, const BuildOptions& options) {
  spec.validate();
  const unsigned base_width = options.width_bits != 0 ? options.width_bits : spec.n_bits + 16;
  if (base_width < spec.n_bits) throw Error(ErrorKind::InvalidArgument, "build_table: width must be >= n_bits");
  const std::int64_t K = spec.half_range();
  const Rational two_sigma = 2 * spec.sigma_grid();
  std::vector<Threshold> thresholds;
  std::vector<bool> ambiguous;
  thresholds.reserve(spec.entry_count());
  ambiguous.reserve(spec.entry_count());
  for (std::int64_t i = -K; i < K; ++i) {
    // P[offset <= i] = Phi((i + 1/2) / sigma_grid)
    const Rational y = Rational(2 * i + 1) / two_sigma;
    bool resolved = false;
    BigInt candidate;
    for (unsigned pass = 0; pass <= options.refinements && !resolved; ++pass) {
      const Fixed f = standard_cdf(y, base_width + 64 * pass);
      const unsigned precision = std::max(f.precision, spec.n_bits);
      const BigInt lo = f.lo << (precision - f.precision);
      const BigInt hi = f.hi << (precision - f.precision);
      const BigInt c_lo = scaled_ceiling(lo, precision, spec.n_bits);
      candidate = scaled_ceiling(hi, precision, spec.n_bits);
      resolved = c_lo == candidate;
    }
    thresholds.push_back(to_threshold(candidate));
    ambiguous.push_back(!resolved);
  }
  thresholds.push_back(spec.modulus());
  ambiguous.push_back(false);
  return BreakingPointTable(spec, std::move(thresholds), std::move(ambiguous));
}

std::uint64_t crc64(const void* data, std::size_t size) noexcept {
  boost::crc_optimal<64, 0x42F0E1EBA9EA3693ULL, ~0ULL, ~0ULL, true, true> crc;
  crc.process_bytes(data, size);
  return crc.checksum();
}

std::string serialize_table(const BreakingPointTable& table) {
  table.validate();
  const GridSpec& spec = table.spec();
  std::string out(kMagic, sizeof kMagic);
  put_le<std::uint16_t>(out, kVersion);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(spec.n_bits));
  put_le<std::uint32_t>(out, spec.levels);
  put_le<std::uint32_t>(out, spec.k);
  put_le<std::uint64_t>(out, spec.sigma_num);
  put_le<std::uint64_t>(out, spec.sigma_den);
  put_le<std::uint64_t>(out, table.size());
  // T_j - 1 fits in n_bits because 1 <= T_j <= 2^n.
  for (Threshold t : table.thresholds()) put_le<Threshold>(out, t - 1, spec.n_bits / 8);
  std::string bits((table.size() + 7) / 8, '\0');
  for (std::size_t j = 0; j < table.size(); ++j) {
    if (table.ambiguous(j)) bits[j / 8] = static_cast<char>(bits[j / 8] | (1 << (j % 8)));
  }
  out += bits;
  put_le<std::uint64_t>(out, crc64(out.data(), out.size()));
  return out;
}

BreakingPointTable deserialize_table(const std::string& bytes) {
  Reader in(bytes);
  if (in.take(sizeof kMagic) != std::string(kMagic, sizeof kMagic)) throw Error(ErrorKind::Format, "not a table file (bad magic)");
  const auto version = in.get<std::uint16_t>();
  if (version != kVersion) throw Error(ErrorKind::Format, "unsupported table file version " + std::to_string(version));
  GridSpec spec;
  spec.n_bits = in.get<std::uint8_t>();
  spec.levels = in.get<std::uint32_t>();
  spec.k = in.get<std::uint32_t>();
  spec.sigma_num = in.get<std::uint64_t>();
  spec.sigma_den = in.get<std::uint64_t>();
  const auto count = in.get<std::uint64_t>();
  if (spec.n_bits != 8 && spec.n_bits != 16 && spec.n_bits != 32 && spec.n_bits != 64) {
    throw Error(ErrorKind::Format, "table file: bad n_bits");
  }
  const std::size_t width = spec.n_bits / 8;
  if (count > bytes.size()) throw Error(ErrorKind::Format, "table file is truncated");
  const std::size_t expected = in.position() + count * width + (count + 7) / 8 + 8;
  if (bytes.size() < expected) throw Error(ErrorKind::Format, "table file is truncated");
  if (bytes.size() > expected) throw Error(ErrorKind::Format, "table file has trailing bytes");
  Reader tail(bytes);
  tail.take(expected - 8);
  const auto stored_crc = tail.get<std::uint64_t>();
  if (crc64(bytes.data(), expected - 8) != stored_crc) throw Error(ErrorKind::Checksum, "table file checksum mismatch");

  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Format, std::string("table file: ") + e.what());
  }
  if (count != spec.entry_count()) throw Error(ErrorKind::SpecMismatch, "table file: entry count does not match spec");
  std::vector<Threshold> thresholds(count);
  for (auto& t : thresholds) t = in.get<Threshold>(static_cast<unsigned>(width)) + 1;
  const std::string bits = in.take((count + 7) / 8);
  std::vector<bool> ambiguous(count);
  for (std::size_t j = 0; j < count; ++j) ambiguous[j] = (bits[j / 8] >> (j % 8)) & 1;
  return BreakingPointTable(spec, std::move(thresholds), std::move(ambiguous));
}

void write_table(const BreakingPointTable& table, const std::filesystem::path& path) {
  const std::string bytes = serialize_table(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

BreakingPointTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_table(buf.str());
}

namespace {

FailureBound finish_bound(Rational per_draw, Rational per_coordinate, std::uint64_t dimension, std::uint64_t samples) {
  FailureBound b;
  b.per_draw = std::move(per_draw);
  b.per_coordinate = std::move(per_coordinate);
  b.coordinates = dimension * samples;
  if (dimension != 0 && b.coordinates / dimension != samples) {
    throw Error(ErrorKind::InvalidArgument, "failure bound: dimension * samples overflows");
  }
  b.aggregate_failure = b.per_coordinate * b.coordinates;
  if (b.aggregate_failure > 1) b.aggregate_failure = 1;
  b.aggregate_success = 1 - b.aggregate_failure;
  return b;
}

}  // namespace

FailureBound failure_probability_bound(const GridSpec& spec, std::uint64_t dimension, std::uint64_t samples) {
  spec.validate();
  const Rational modulus(pow2(spec.n_bits));
  const BigInt interior = 2 * BigInt(spec.half_range());
  const BigInt window = 2 * BigInt(spec.k) + spec.levels;
  return finish_bound(Rational(interior) / modulus, Rational(window) / modulus, dimension, samples);
}

FailureBound failure_probability_bound(const BreakingPointTable& table, std::uint64_t dimension,
                                       std::uint64_t samples) {
  const GridSpec& spec = table.spec();
  const Threshold top = spec.modulus();
  std::set<Threshold> breaking;
  for (std::size_t j = 0; j + 1 < table.size(); ++j) {
    const Threshold t = table.threshold(j);
    if (t < top) breaking.insert(t);
    if (table.ambiguous(j)) breaking.insert(t - 1);
  }
  std::vector<OffsetRange> ranges;
  ranges.reserve(breaking.size());
  for (Threshold u : breaking) {
    const OffsetRange r = table.lookup(u);
    if (!r.determinate()) ranges.push_back(r);
  }
  std::uint64_t worst = 0;
  for (std::int64_t x = 0; x <= spec.levels; ++x) {
    std::uint64_t count = 0;
    for (const auto& r : ranges) {
      const auto lo = std::clamp(x + r.lo, spec.clamp_low(), spec.clamp_high());
      const auto hi = std::clamp(x + r.hi, spec.clamp_low(), spec.clamp_high());
      count += lo != hi ? 1 : 0;
    }
    worst = std::max(worst, count);
  }
  const Rational modulus(pow2(spec.n_bits));
  return finish_bound(Rational(BigInt(ranges.size())) / modulus, Rational(BigInt(worst)) / modulus, dimension, samples);
}

std::string to_string(Threshold v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {s.rbegin(), s.rend()};
}

}  // namespace soundsmooth::tables
