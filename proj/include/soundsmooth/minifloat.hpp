// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

// 8-bit binary floating point: 1 sign bit, 3 exponent bits (bias 3), 4 mantissa
// bits, with subnormals (exponent field 000) and Inf/NaN (exponent field 111).
// Arithmetic is exact on rationals followed by a single round-to-nearest,
// ties to the even mantissa.

#ifndef SOUNDSMOOTH_MINIFLOAT_HPP
#define SOUNDSMOOTH_MINIFLOAT_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace soundsmooth::minifloat {

using Rational = boost::multiprecision::cpp_rational;

class MiniFloat8 {
 public:
  static constexpr unsigned kExponentBits = 3;
  static constexpr unsigned kMantissaBits = 4;
  static constexpr int kBias = 3;

  constexpr MiniFloat8() = default;
  static constexpr MiniFloat8 from_bits(std::uint8_t bits) { return MiniFloat8(bits); }

  constexpr std::uint8_t bits() const { return bits_; }
  constexpr bool sign() const { return (bits_ & 0x80) != 0; }
  constexpr unsigned exponent_field() const { return (bits_ >> 4) & 0x7; }
  constexpr unsigned mantissa_field() const { return bits_ & 0xF; }

  constexpr bool is_nan() const { return exponent_field() == 7 && mantissa_field() != 0; }
  constexpr bool is_inf() const { return exponent_field() == 7 && mantissa_field() == 0; }
  constexpr bool is_finite() const { return exponent_field() != 7; }
  constexpr bool is_zero() const { return (bits_ & 0x7F) == 0; }
  constexpr bool is_subnormal() const { return exponent_field() == 0 && mantissa_field() != 0; }

  /// Bitwise identity (distinguishes +0/-0 and NaN payloads).
  friend constexpr bool operator==(MiniFloat8, MiniFloat8) = default;

 private:
  explicit constexpr MiniFloat8(std::uint8_t bits) : bits_(bits) {}
  std::uint8_t bits_ = 0;
};

inline constexpr MiniFloat8 kPositiveInf = MiniFloat8::from_bits(0x70);
inline constexpr MiniFloat8 kNegativeInf = MiniFloat8::from_bits(0xF0);
inline constexpr MiniFloat8 kQuietNaN = MiniFloat8::from_bits(0x78);
inline constexpr MiniFloat8 kNegativeQuietNaN = MiniFloat8::from_bits(0xF8);

enum class Category { Finite, PositiveInf, NegativeInf, NaN };

struct Decoded {
  Category category = Category::Finite;
  Rational value;              // exact; meaningful only for Finite
  bool negative_zero = false;  // value == 0 with the sign bit set
};

Decoded decode(MiniFloat8 m);

/// Nearest representable value; ties go to the even mantissa; overflow gives +-Inf.
MiniFloat8 encode(const Rational& q);

/// Finite value as an integer count of 2^-6 (every finite pattern is such a multiple).
int to_sixty_fourths(MiniFloat8 m);

MiniFloat8 negate(MiniFloat8 m);
MiniFloat8 add(MiniFloat8 a, MiniFloat8 b);
MiniFloat8 sub(MiniFloat8 a, MiniFloat8 b);

/// All 256 patterns in increasing bit order.
std::array<MiniFloat8, 256> enumerate_all();

/// IEEE-style value equality extended so that NaN matches NaN; +0 matches -0.
bool same_value(MiniFloat8 a, MiniFloat8 b);

struct IdentityReport {
  std::uint64_t pairs = 0;                     // ordered pairs of finite patterns examined
  std::uint64_t always_violations = 0;         // (((x + y) - y) + y) - y differs from (x + y) - y
  std::uint64_t near_violations = 0;           // ((x + y) - y) + y differs from x + y
  std::uint64_t commutativity_violations = 0;  // x + y and y + x differ bitwise
};

/// Exhaustive check over all finite pairs; results compared with same_value.
IdentityReport check_identities();

/// "s eee mmmm", e.g. "1 110 1010".
std::string to_bit_string(MiniFloat8 m);
/// Accepts "s eee mmmm", "seeemmmm", or the same with '_' separators.
MiniFloat8 parse_bit_string(std::string_view text);

/// Exact decimal rendering: "-13", "0.015625", "-0", "inf", "-inf", "nan".
std::string to_decimal_string(MiniFloat8 m);

/// Parses "6.5", "-13", "1e-2", "13/4" into an exact rational.
Rational parse_rational(std::string_view text);

}  // namespace soundsmooth::minifloat

#endif  // SOUNDSMOOTH_MINIFLOAT_HPP
