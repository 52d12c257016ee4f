// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include <cstring>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "mpfr_oracle.hpp"
#include "soundsmooth/exact_tables.hpp"

using namespace soundsmooth::tables;
using soundsmooth::Error;
using soundsmooth::ErrorKind;

namespace {

// L = 4, k = 2, sigma = 4 grid steps, 8-bit uniforms.
GridSpec small_spec() { return GridSpec{4, 2, 1, 1, 8}; }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

// Recomputes the trailing CRC after a deliberate edit.
void reseal(std::string& bytes) {
  const std::uint64_t crc = crc64(bytes.data(), bytes.size() - 8);
  for (int i = 0; i < 8; ++i) bytes[bytes.size() - 8 + i] = static_cast<char>((crc >> (8 * i)) & 0xFF);
}

// ceil(2^n Phi((2i+1) / (2 sigma_grid))) by MPFR with directed rounding; nullopt if the
// two roundings straddle an integer.
std::optional<BigInt> mpfr_threshold(const GridSpec& spec, std::int64_t i) {
  const Rational s = 2 * spec.sigma_grid();
  const std::string num = (BigInt(2 * i + 1) * boost::multiprecision::denominator(s)).str();
  const std::string den = boost::multiprecision::numerator(s).str();
  BigInt out[2];
  const mpfr_rnd_t modes[2] = {MPFR_RNDD, MPFR_RNDU};
  for (int m = 0; m < 2; ++m) {
    oracle::Real p(320);
    oracle::normal_cdf_ratio(p, num, den, modes[m], 320);
    mpfr_mul_2ui(p.get(), p.get(), spec.n_bits, modes[m]);
    mpfr_ceil(p.get(), p.get());
    char* text = nullptr;
    mpfr_asprintf(&text, "%.0Rf", p.get());
    out[m] = BigInt(text);
    mpfr_free_str(text);
    if (out[m] < 1) out[m] = 1;
  }
  if (out[0] != out[1]) return std::nullopt;
  return out[0];
}

}  // namespace

TEST(BreakingPointTable, SmallGoldenTable) {
  const auto t = build_table(small_spec());
  const std::vector<Threshold> want = {22, 34, 49, 69, 91, 116, 141, 166, 188, 208, 223, 235, 256};
  ASSERT_EQ(t.size(), want.size());
  for (std::size_t j = 0; j < want.size(); ++j) EXPECT_EQ(t.threshold(j), want[j]) << j;
  EXPECT_EQ(t.ambiguous_count(), 0u);
}

// T - 1 for L = 255, k = 1530, sigma = 1/2, n = 64; reference values from an
// independent 400-bit evaluation of the normal CDF.
TEST(BreakingPointTable, FrozenEntriesForDefaultSpec) {
  const GridSpec spec{255, 1530, 1, 2, 64};
  const auto t = build_table(spec);
  ASSERT_EQ(t.size(), 3571u);
  const std::pair<std::size_t, std::uint64_t> frozen[] = {
      {0, 0ULL},
      {985, 3317523810ULL},
      {1485, 173610753001542041ULL},
      {1685, 4013643341120327259ULL},
      {1784, 9194512557308354100ULL},
      {1785, 9252231516401197515ULL},
      {1786, 9309948700245272359ULL},
      {1885, 14475537420402061945ULL},
      {2085, 18276756796759189855ULL},
      {3569, 18446744073709551615ULL},
  };
  for (auto [j, minus_one] : frozen) EXPECT_EQ(t.threshold(j) - 1, Threshold{minus_one}) << j;
  EXPECT_EQ(t.threshold(3570), Threshold{1} << 64);
}

TEST(BreakingPointTable, AgreesWithMpfrOnSampledEntries) {
  const GridSpec specs[] = {{255, 1530, 1, 2, 64}, {255, 1530, 1, 4, 32}, {15, 30, 3, 7, 16}, {255, 2040, 4, 3, 64}};
  std::mt19937_64 rng(7);
  for (const auto& spec : specs) {
    const auto t = build_table(spec);
    for (int trial = 0; trial < 60; ++trial) {
      const auto j = static_cast<std::int64_t>(rng() % (t.size() - 1));
      const auto want = mpfr_threshold(spec, j - spec.half_range());
      if (!want) continue;
      const BigInt got(t.threshold(static_cast<std::size_t>(j)));
      EXPECT_EQ(got, std::min(*want, BigInt(1) << spec.n_bits)) << "L=" << spec.levels << " j=" << j;
    }
  }
}

TEST(BreakingPointTable, MirrorEntriesSumToModulusPlusOne) {
  for (const auto& spec : {GridSpec{255, 1530, 1, 2, 64}, GridSpec{255, 1530, 1, 4, 16}, small_spec()}) {
    const auto t = build_table(spec);
    const std::size_t last = t.size() - 1;  // index 2K holds 2^n
    for (std::size_t j = 0; j < last; ++j) {
      ASSERT_EQ(t.threshold(j) + t.threshold(last - 1 - j), spec.modulus() + 1) << j;
    }
  }
}

TEST(BreakingPointTable, ThresholdsAreMonotone) {
  const auto t = build_table(GridSpec{255, 1530, 3, 1, 64});
  for (std::size_t j = 1; j < t.size(); ++j) EXPECT_LE(t.threshold(j - 1), t.threshold(j));
  EXPECT_NO_THROW(t.validate());
}

TEST(BreakingPointTable, LowPrecisionFlagsAmbiguousEntriesWithUpperCandidate) {
  const auto exact = build_table(small_spec());
  const auto rough = build_table(small_spec(), BuildOptions{8, 0});
  ASSERT_EQ(rough.size(), exact.size());
  for (std::size_t j = 0; j < exact.size(); ++j) {
    if (rough.ambiguous(j)) {
      EXPECT_GE(rough.threshold(j), exact.threshold(j));
      EXPECT_LE(rough.threshold(j), exact.threshold(j) + 1);
    } else {
      EXPECT_EQ(rough.threshold(j), exact.threshold(j)) << j;
    }
  }
}

TEST(BreakingPointTable, LookupOnSmallTable) {
  const auto t = build_table(small_spec());
  EXPECT_EQ(t.lookup(0), (OffsetRange{-6, -6}));
  EXPECT_EQ(t.lookup(21), (OffsetRange{-6, -6}));
  EXPECT_EQ(t.lookup(22), (OffsetRange{-6, -5}));  // breaking point
  EXPECT_EQ(t.lookup(23), (OffsetRange{-5, -5}));
  EXPECT_EQ(t.lookup(128), (OffsetRange{0, 0}));
  EXPECT_EQ(t.lookup(235), (OffsetRange{5, 6}));
  EXPECT_EQ(t.lookup(255), (OffsetRange{6, 6}));
}

TEST(BreakingPointTable, LookupWidensAcrossAmbiguousEntry) {
  const auto exact = build_table(small_spec());
  std::vector<Threshold> thr = exact.thresholds();
  std::vector<bool> amb(thr.size(), false);
  amb[5] = true;  // stored 116 may really be 115
  const BreakingPointTable t(small_spec(), thr, amb);
  EXPECT_EQ(t.lookup(115), (OffsetRange{-1, 0}));
  EXPECT_EQ(t.lookup(116), (OffsetRange{-1, 0}));
  EXPECT_EQ(t.lookup(114), (OffsetRange{-1, -1}));
}

TEST(GaussianCdfEnclosure, ContainsMpfrValueAndIsNarrow) {
  const std::pair<long, long> points[] = {{0, 1}, {1, 3}, {-7, 2}, {25, 4}, {-151, 10}, {3, 1000}, {-1, 7}};
  for (auto [num, den] : points) {
    const Rational x(num, den);
    const auto e = gaussian_cdf_enclosure(x, Rational(1), 100);
    EXPECT_LE(e.width(), Rational(1, BigInt(1) << 100));
    oracle::Real lo(400), hi(400);
    oracle::normal_cdf_ratio(lo, std::to_string(num), std::to_string(den), MPFR_RNDD, 400);
    oracle::normal_cdf_ratio(hi, std::to_string(num), std::to_string(den), MPFR_RNDU, 400);
    // Compare at 2^-120 resolution: the enclosure must cover [lo, hi] up to rounding of the check.
    mpfr_mul_2ui(lo.get(), lo.get(), 120, MPFR_RNDD);
    mpfr_mul_2ui(hi.get(), hi.get(), 120, MPFR_RNDU);
    mpfr_floor(lo.get(), lo.get());
    mpfr_ceil(hi.get(), hi.get());
    char *a = nullptr, *b = nullptr;
    mpfr_asprintf(&a, "%.0Rf", lo.get());
    mpfr_asprintf(&b, "%.0Rf", hi.get());
    const Rational scale(BigInt(1) << 120);
    EXPECT_LE(e.lo * scale, Rational(BigInt(b))) << num << "/" << den;
    EXPECT_GE(e.hi * scale, Rational(BigInt(a))) << num << "/" << den;
    mpfr_free_str(a);
    mpfr_free_str(b);
  }
}

TEST(GaussianCdfEnclosure, SmallTableTailMass) {
  // P[t <= -6] for sigma = 4 grid steps lies strictly between 21/256 and 22/256.
  const auto e = gaussian_cdf_enclosure(Rational(-11, 2), Rational(4), 40);
  EXPECT_GT(e.lo, Rational(21, 256));
  EXPECT_LT(e.hi, Rational(22, 256));
  const auto half = gaussian_cdf_enclosure(Rational(0), Rational(3, 7), 60);
  EXPECT_TRUE(half.contains(Rational(1, 2)));
}

TEST(GaussianCdfEnclosure, FarTailIsTinyAndSound) {
  const auto e = gaussian_cdf_enclosure(Rational(-60), Rational(1), 80);
  EXPECT_EQ(e.lo, 0);
  EXPECT_LE(e.hi, Rational(1, BigInt(1) << 80));
  const auto u = gaussian_cdf_enclosure(Rational(60), Rational(1), 80);
  EXPECT_EQ(u.hi, 1);
  EXPECT_GE(u.lo, 1 - Rational(1, BigInt(1) << 80));
}

TEST(GaussianCdfEnclosure, ReflectionOverlaps) {
  for (int i = -20; i <= 20; ++i) {
    const Rational x(i, 3);
    const auto a = gaussian_cdf_enclosure(x, Rational(5, 2), 90);
    const auto b = gaussian_cdf_enclosure(-x, Rational(5, 2), 90);
    EXPECT_LE(a.lo, 1 - b.lo);
    EXPECT_GE(a.hi, 1 - b.hi);
  }
}

TEST(Crc64, XzCheckValue) {
  const char* text = "123456789";
  EXPECT_EQ(crc64(text, std::strlen(text)), 0x995DC9BBDF1939FAULL);
}

TEST(TableFile, RoundTripsForEveryWidth) {
  for (unsigned bits : {8u, 16u, 32u, 64u}) {
    GridSpec spec = small_spec();
    spec.n_bits = bits;
    const auto t = build_table(spec);
    EXPECT_EQ(deserialize_table(serialize_table(t)), t) << bits;
  }
  const auto path = std::filesystem::temp_directory_path() / "soundsmooth_table_test.tbl";
  const auto t = build_table(GridSpec{255, 1530, 1, 2, 64});
  write_table(t, path);
  EXPECT_EQ(read_table(path), t);
  std::filesystem::remove(path);
}

TEST(TableFile, HeaderLayout) {
  const auto bytes = serialize_table(build_table(small_spec()));
  EXPECT_EQ(bytes.substr(0, 8), "SNDSMOTH");
  EXPECT_EQ(bytes[8], 1);   // version, little-endian
  EXPECT_EQ(bytes[10], 8);  // n_bits
  // header 43 bytes, 13 one-byte entries, 2 bytes of flags, CRC.
  EXPECT_EQ(bytes.size(), 43u + 13u + 2u + 8u);
}

TEST(TableFile, RejectsDamagedFiles) {
  const auto good = serialize_table(build_table(small_spec()));

  auto flipped = good;
  flipped[50] ^= 0x01;
  EXPECT_EQ(kind_of([&] { deserialize_table(flipped); }), ErrorKind::Checksum);

  EXPECT_EQ(kind_of([&] { deserialize_table(good.substr(0, good.size() - 3)); }), ErrorKind::Format);
  EXPECT_EQ(kind_of([&] { deserialize_table(good + "x"); }), ErrorKind::Format);

  auto magic = good;
  magic[0] = 'X';
  EXPECT_EQ(kind_of([&] { deserialize_table(magic); }), ErrorKind::Format);

  auto version = good;
  version[8] = 9;
  reseal(version);
  EXPECT_EQ(kind_of([&] { deserialize_table(version); }), ErrorKind::Format);

  // Swap two entries so thresholds decrease.
  auto swapped = good;
  std::swap(swapped[43 + 3], swapped[43 + 4]);
  reseal(swapped);
  EXPECT_EQ(kind_of([&] { deserialize_table(swapped); }), ErrorKind::NonMonotone);

  EXPECT_EQ(kind_of([&] { read_table("/nonexistent/dir/table.tbl"); }), ErrorKind::Io);
}

TEST(GridSpec, Validation) {
  EXPECT_THROW(build_table(GridSpec{4, 2, 1, 1, 12}), Error);
  EXPECT_THROW(build_table(GridSpec{4, 2, 1, 0, 8}), Error);
  EXPECT_THROW(build_table(GridSpec{0, 2, 1, 1, 8}), Error);
  EXPECT_EQ(default_spec(255, 1, 2).k, 1530u);
  EXPECT_EQ(default_spec(255, 3, 2).k, 9u * 255u);
}

TEST(FailureBound, SpecOnlyArithmetic) {
  const GridSpec spec{255, 1912, 1, 2, 64};
  const auto b = failure_probability_bound(spec, 3 * 224 * 224, 100000);
  EXPECT_EQ(b.per_coordinate, Rational(2 * 1912 + 255, BigInt(1) << 64));
  EXPECT_LE(b.per_coordinate, Rational(1, BigInt(1) << 52));
  EXPECT_EQ(b.coordinates, 15052800000ULL);
  EXPECT_EQ(b.aggregate_failure, b.per_coordinate * 15052800000ULL);
  EXPECT_GE(b.aggregate_success, 1 - Rational(1, BigInt(1) << 18));
  EXPECT_GT(b.aggregate_success, Rational(999996, 1000000));
}

TEST(FailureBound, SmallSpecHasTwelveBreakingPoints) {
  const auto b = failure_probability_bound(build_table(small_spec()), 1, 1);
  EXPECT_EQ(b.per_draw, Rational(12, 256));
  EXPECT_EQ(failure_probability_bound(small_spec(), 1, 1).per_draw, Rational(12, 256));
}

TEST(FailureBound, ExactTableIsNoWorseThanSpecBound) {
  const auto t = build_table(GridSpec{255, 1530, 1, 2, 16});
  const auto exact = failure_probability_bound(t, 100, 1000);
  const auto loose = failure_probability_bound(t.spec(), 100, 1000);
  EXPECT_LE(exact.per_coordinate, loose.per_coordinate);
  EXPECT_GT(exact.per_coordinate, 0);
}
