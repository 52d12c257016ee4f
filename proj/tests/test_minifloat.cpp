// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "soundsmooth/common.hpp"
#include "soundsmooth/minifloat.hpp"

namespace mf = soundsmooth::minifloat;
using mf::MiniFloat8;

namespace {

MiniFloat8 value(const char* text) { return mf::encode(mf::parse_rational(text)); }
MiniFloat8 bits(const char* pattern) { return mf::parse_bit_string(pattern); }

}  // namespace

TEST(MinifloatDecode, NegativeThirteen) {
  const auto d = mf::decode(MiniFloat8::from_bits(0b1110'1010));
  EXPECT_EQ(d.category, mf::Category::Finite);
  EXPECT_EQ(d.value, mf::Rational(-13));
}

TEST(MinifloatDecode, SpecialPatterns) {
  EXPECT_EQ(mf::decode(mf::kPositiveInf).category, mf::Category::PositiveInf);
  EXPECT_EQ(mf::decode(mf::kNegativeInf).category, mf::Category::NegativeInf);
  EXPECT_EQ(mf::decode(mf::kQuietNaN).category, mf::Category::NaN);
  EXPECT_TRUE(mf::decode(MiniFloat8::from_bits(0x80)).negative_zero);
  // Largest finite value and smallest subnormal.
  EXPECT_EQ(mf::decode(MiniFloat8::from_bits(0x6F)).value, mf::Rational(31, 2));
  EXPECT_EQ(mf::decode(MiniFloat8::from_bits(0x01)).value, mf::Rational(1, 64));
}

TEST(MinifloatDecode, ThirtyNaNPatterns) {
  int nans = 0;
  for (auto m : mf::enumerate_all()) nans += m.is_nan() ? 1 : 0;
  EXPECT_EQ(nans, 30);
}

TEST(MinifloatArithmetic, GoldenSums) {
  EXPECT_EQ(mf::add(value("-13"), value("4.75")), value("-8"));
  EXPECT_EQ(mf::add(value("6.5"), value("4.75")), value("11"));
  EXPECT_EQ(mf::add(value("6.5"), value("4.5")), value("11"));
  EXPECT_EQ(mf::add(value("-13"), value("4.75")), bits("1 110 0000"));
}

TEST(MinifloatArithmetic, AdditionIsNotAssociative) {
  const auto a = value("2.375");
  const auto b = value("3.75");
  const auto c = value("3.25");
  EXPECT_EQ(mf::add(mf::add(a, b), c), value("9"));
  EXPECT_EQ(mf::add(a, mf::add(b, c)), value("9.5"));
}

TEST(MinifloatArithmetic, OverflowAndSpecials) {
  EXPECT_EQ(mf::add(value("13"), value("3.25")), mf::kPositiveInf);
  EXPECT_TRUE(mf::add(mf::kPositiveInf, mf::kNegativeInf).is_nan());
  EXPECT_EQ(mf::add(mf::kPositiveInf, value("-15.5")), mf::kPositiveInf);
  EXPECT_TRUE(mf::add(mf::kQuietNaN, value("1")).is_nan());
  // Exact cancellation gives +0 in round-to-nearest.
  EXPECT_EQ(mf::sub(value("3"), value("3")), MiniFloat8::from_bits(0x00));
  EXPECT_EQ(mf::add(MiniFloat8::from_bits(0x80), MiniFloat8::from_bits(0x80)), MiniFloat8::from_bits(0x80));
}

TEST(MinifloatEncode, RoundTripsEveryFinitePattern) {
  for (auto m : mf::enumerate_all()) {
    if (!m.is_finite()) continue;
    const auto d = mf::decode(m);
    const auto back = mf::encode(d.value);
    if (d.negative_zero) {
      EXPECT_TRUE(back.is_zero());
    } else {
      EXPECT_EQ(back, m) << mf::to_bit_string(m);
    }
  }
}

TEST(MinifloatEncode, TiesGoToEvenMantissa) {
  EXPECT_EQ(mf::encode(mf::Rational(49, 8)), value("6"));       // 6.125 between 6 and 6.25
  EXPECT_EQ(mf::encode(mf::Rational(51, 8)), value("6.5"));     // 6.375 between 6.25 and 6.5
  EXPECT_EQ(mf::encode(mf::Rational(63, 4)), mf::kPositiveInf); // 15.75 is the overflow midpoint
  EXPECT_EQ(mf::encode(mf::Rational(1, 128)), MiniFloat8::from_bits(0x00));
}

TEST(MinifloatText, BitStringRoundTrip) {
  for (auto m : mf::enumerate_all()) EXPECT_EQ(mf::parse_bit_string(mf::to_bit_string(m)), m);
  EXPECT_EQ(mf::to_bit_string(MiniFloat8::from_bits(0b1110'1010)), "1 110 1010");
  EXPECT_EQ(mf::to_decimal_string(MiniFloat8::from_bits(0b1110'1010)), "-13");
  EXPECT_THROW(mf::parse_bit_string("1 110 101"), soundsmooth::Error);
}

// Oracle counts for these identities come from an independent rational-arithmetic enumeration.
TEST(MinifloatProperties, CancellationIdentitiesOverAllFinitePairs) {
  const auto r = mf::check_identities();
  EXPECT_EQ(r.pairs, 224u * 224u);
  EXPECT_EQ(r.always_violations, 0u);
  EXPECT_EQ(r.near_violations, 94u);
  EXPECT_EQ(r.commutativity_violations, 0u);
}

TEST(MinifloatProperties, SubtractionIsAdditionOfNegation) {
  for (auto a : mf::enumerate_all()) {
    for (auto b : mf::enumerate_all()) {
      const auto lhs = mf::sub(a, b);
      const auto rhs = mf::add(a, mf::negate(b));
      if (lhs.is_nan()) {
        EXPECT_TRUE(rhs.is_nan());
      } else {
        ASSERT_EQ(lhs, rhs) << mf::to_bit_string(a) << " - " << mf::to_bit_string(b);
      }
    }
  }
}

TEST(MinifloatProperties, AdditionIsMonotone) {
  // For fixed y, x <= x' implies x + y <= x' + y.
  std::vector<MiniFloat8> finite;
  for (auto m : mf::enumerate_all()) {
    if (m.is_finite()) finite.push_back(m);
  }
  std::sort(finite.begin(), finite.end(),
            [](MiniFloat8 a, MiniFloat8 b) { return mf::decode(a).value < mf::decode(b).value; });
  auto key = [](MiniFloat8 m) {
    if (m.is_inf()) return m.sign() ? mf::Rational(-1000) : mf::Rational(1000);
    return mf::decode(m).value;
  };
  for (auto y : finite) {
    for (std::size_t i = 1; i < finite.size(); ++i) {
      EXPECT_LE(key(mf::add(finite[i - 1], y)), key(mf::add(finite[i], y)));
    }
  }
}
