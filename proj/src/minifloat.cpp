// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include "soundsmooth/minifloat.hpp"

#include <cstdlib>
#include <string>

#include "soundsmooth/common.hpp"

namespace soundsmooth::minifloat {
namespace {

using BigInt = boost::multiprecision::cpp_int;

constexpr std::uint8_t kSignBit = 0x80;

// Round a nonnegative rational to an integer, ties to even.
BigInt round_half_even(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;
  const BigInt twice_rem = 2 * (num - q * den);
  if (twice_rem > den || (twice_rem == den && (q & 1) != 0)) ++q;
  return q;
}

// Round a nonnegative integer divided by 2^shift, ties to even.
std::uint64_t shift_round_half_even(std::uint64_t value, unsigned shift) {
  if (shift == 0) return value;
  const std::uint64_t q = value >> shift;
  const std::uint64_t rem = value & ((std::uint64_t{1} << shift) - 1);
  const std::uint64_t half = std::uint64_t{1} << (shift - 1);
  if (rem > half || (rem == half && (q & 1) != 0)) return q + 1;
  return q;
}

// Packs a rounded magnitude. `significand` is the rounded value in units of the
// binade's ulp (16..32 for normal binades); `exponent` is unbiased.
MiniFloat8 pack_normal(bool negative, int exponent, std::uint64_t significand) {
  if (significand == 32) {
    ++exponent;
    significand = 16;
  }
  const int field = exponent + MiniFloat8::kBias;
  const std::uint8_t sign = negative ? kSignBit : 0;
  if (field >= 7) return MiniFloat8::from_bits(sign | 0x70);
  return MiniFloat8::from_bits(
      static_cast<std::uint8_t>(sign | (field << 4) | static_cast<int>(significand - 16)));
}

// Exact value units/64 rounded into the format.
MiniFloat8 encode_sixty_fourths(std::int64_t units) {
  const bool negative = units < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-units) : static_cast<std::uint64_t>(units);
  const std::uint8_t sign = negative ? kSignBit : 0;
  if (mag < 16) return MiniFloat8::from_bits(static_cast<std::uint8_t>(sign | mag));
  if (mag >= 1024) return MiniFloat8::from_bits(sign | 0x70);  // >= 16
  int exponent = -2;
  while (mag >= (std::uint64_t{1} << (exponent + 7))) ++exponent;
  return pack_normal(negative, exponent, shift_round_half_even(mag, static_cast<unsigned>(exponent + 2)));
}

}  // namespace

Decoded decode(MiniFloat8 m) {
  Decoded out;
  if (m.is_nan()) {
    out.category = Category::NaN;
    return out;
  }
  if (m.is_inf()) {
    out.category = m.sign() ? Category::NegativeInf : Category::PositiveInf;
    return out;
  }
  out.value = Rational(to_sixty_fourths(m), 64);
  out.negative_zero = m.is_zero() && m.sign();
  return out;
}

int to_sixty_fourths(MiniFloat8 m) {
  if (!m.is_finite()) throw Error(ErrorKind::Domain, "minifloat: Inf/NaN has no finite value");
  const int e = static_cast<int>(m.exponent_field());
  const int mant = static_cast<int>(m.mantissa_field());
  const int mag = e == 0 ? mant : (16 + mant) << (e - 1);
  return m.sign() ? -mag : mag;
}

MiniFloat8 encode(const Rational& q) {
  if (q == 0) return MiniFloat8::from_bits(0);
  const bool negative = q < 0;
  const Rational mag = negative ? Rational(-q) : q;
  const std::uint8_t sign = negative ? kSignBit : 0;
  if (mag < Rational(1, 4)) {
    // Subnormal binade (and the rounding carry into the smallest normal).
    const BigInt n = round_half_even(mag * 64);
    return MiniFloat8::from_bits(static_cast<std::uint8_t>(sign | n.convert_to<unsigned>()));
  }
  if (mag >= 16) return MiniFloat8::from_bits(sign | 0x70);
  int exponent = -2;
  Rational upper(1, 2);  // 2^(exponent + 1)
  while (mag >= upper) {
    ++exponent;
    upper *= 2;
  }
  // ulp of the binade is 2^(exponent - 4)
  Rational scaled = mag;
  if (exponent - 4 >= 0) {
    scaled /= Rational(BigInt(1) << (exponent - 4));
  } else {
    scaled *= Rational(BigInt(1) << (4 - exponent));
  }
  return pack_normal(negative, exponent, round_half_even(scaled).convert_to<std::uint64_t>());
}

MiniFloat8 negate(MiniFloat8 m) { return MiniFloat8::from_bits(m.bits() ^ kSignBit); }

MiniFloat8 add(MiniFloat8 a, MiniFloat8 b) {
  if (a.is_nan()) return a.sign() ? kNegativeQuietNaN : kQuietNaN;
  if (b.is_nan()) return b.sign() ? kNegativeQuietNaN : kQuietNaN;
  if (a.is_inf() || b.is_inf()) {
    if (a.is_inf() && b.is_inf() && a.sign() != b.sign()) return kQuietNaN;
    return a.is_inf() ? a : b;
  }
  const int sum = to_sixty_fourths(a) + to_sixty_fourths(b);
  if (sum == 0) {
    // Exact zero: -0 only when both addends are -0 (round-to-nearest rule).
    return MiniFloat8::from_bits((a.is_zero() && b.is_zero() && a.sign() && b.sign()) ? kSignBit : 0);
  }
  return encode_sixty_fourths(sum);
}

MiniFloat8 sub(MiniFloat8 a, MiniFloat8 b) { return add(a, negate(b)); }

std::array<MiniFloat8, 256> enumerate_all() {
  std::array<MiniFloat8, 256> out{};
  for (unsigned i = 0; i < 256; ++i) out[i] = MiniFloat8::from_bits(static_cast<std::uint8_t>(i));
  return out;
}

bool same_value(MiniFloat8 a, MiniFloat8 b) {
  if (a.is_nan() || b.is_nan()) return a.is_nan() && b.is_nan();
  if (a.is_inf() || b.is_inf()) return a == b;
  return to_sixty_fourths(a) == to_sixty_fourths(b);
}

IdentityReport check_identities() {
  IdentityReport r;
  for (MiniFloat8 x : enumerate_all()) {
    if (!x.is_finite()) continue;
    for (MiniFloat8 y : enumerate_all()) {
      if (!y.is_finite()) continue;
      ++r.pairs;
      const MiniFloat8 s = add(x, y);
      const MiniFloat8 back = sub(s, y);
      const MiniFloat8 again = add(back, y);
      if (!same_value(sub(again, y), back)) ++r.always_violations;
      if (!same_value(again, s)) ++r.near_violations;
      if (!(s == add(y, x))) ++r.commutativity_violations;
    }
  }
  return r;
}

std::string to_bit_string(MiniFloat8 m) {
  std::string out = "0 000 0000";
  const std::uint8_t b = m.bits();
  const int positions[8] = {0, 2, 3, 4, 6, 7, 8, 9};
  for (int i = 0; i < 8; ++i) out[positions[i]] = ((b >> (7 - i)) & 1) ? '1' : '0';
  return out;
}

MiniFloat8 parse_bit_string(std::string_view text) {
  unsigned bits = 0;
  int count = 0;
  for (char c : text) {
    if (c == ' ' || c == '_') continue;
    if (c != '0' && c != '1') throw Error(ErrorKind::InvalidArgument, "minifloat: bad bit string '" + std::string(text) + "'");
    bits = (bits << 1) | static_cast<unsigned>(c - '0');
    ++count;
  }
  if (count != 8) throw Error(ErrorKind::InvalidArgument, "minifloat: expected 8 bits in '" + std::string(text) + "'");
  return MiniFloat8::from_bits(static_cast<std::uint8_t>(bits));
}

std::string to_decimal_string(MiniFloat8 m) {
  if (m.is_nan()) return "nan";
  if (m.is_inf()) return m.sign() ? "-inf" : "inf";
  const int units = to_sixty_fourths(m);
  const bool negative = m.sign();
  // units / 64 == units * 15625 / 10^6 exactly
  const long scaled = std::labs(static_cast<long>(units)) * 15625L;
  std::string out = negative ? "-" : "";
  out += std::to_string(scaled / 1000000);
  std::string frac = std::to_string(scaled % 1000000);
  frac.insert(0, 6 - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (!frac.empty()) out += "." + frac;
  return out;
}

Rational parse_rational(std::string_view text) {
  const std::string s(text);
  auto fail = [&]() -> Rational { throw Error(ErrorKind::InvalidArgument, "cannot parse rational '" + s + "'"); };
  if (s.empty()) return fail();
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(s.substr(0, slash));
    const Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) return fail();
    return num / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  BigInt digits = 0;
  int frac_digits = 0;
  bool any = false;
  bool in_frac = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      any = true;
      if (in_frac) ++frac_digits;
    } else if (c == '.' && !in_frac) {
      in_frac = true;
    } else {
      break;
    }
  }
  if (!any) return fail();
  int exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') return fail();
    char* end = nullptr;
    const long e = std::strtol(s.c_str() + pos + 1, &end, 10);
    if (end == s.c_str() + pos + 1 || *end != '\0' || e > 400 || e < -400) return fail();
    exponent = static_cast<int>(e);
  }
  exponent -= frac_digits;
  Rational value(digits);
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) {
    value *= Rational(ten_pow);
  } else {
    value /= Rational(ten_pow);
  }
  return negative ? Rational(-value) : value;
}

}  // namespace soundsmooth::minifloat
