// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "soundsmooth/classifiers.hpp"
#include "soundsmooth/images.hpp"
#include "soundsmooth/pipeline.hpp"
#include "soundsmooth/stats.hpp"

using namespace soundsmooth;
using namespace soundsmooth::pipeline;

namespace {

CertifyParams small_params(std::uint64_t n = 2000) {
  CertifyParams p;
  p.sigma = 0.5;
  p.n0 = 50;
  p.n = n;
  p.seed = 21;
  return p;
}

const tables::BreakingPointTable& default_table() {
  static const auto t = tables::build_table(tables::default_spec(255, 1, 2));
  return t;
}

}  // namespace

TEST(Unsound, ConstantClassifierHasClosedFormBound) {
  const auto f = make_constant(1);
  const QuantizedImage x{{10, 20, 30}, 255};
  const auto p = small_params();
  const auto o = certify_unsound(*f, x, p);
  EXPECT_EQ(o.prediction, 1);
  EXPECT_EQ(o.count1, p.n);
  EXPECT_EQ(o.count0, 0u);
  EXPECT_EQ(o.failures, 0u);
  EXPECT_EQ(o.p_lower, stats::clopper_pearson_lower({p.alpha, p.n, p.n}));
  EXPECT_DOUBLE_EQ(*o.radius, 0.5 * stats::phi_inv(o.p_lower));
}

TEST(Unsound, HoeffdingBoundIsSelectable) {
  const auto f = make_constant(0);
  auto p = small_params();
  p.bound = BoundKind::Hoeffding;
  const auto o = certify_unsound(*f, QuantizedImage{{0}, 255}, p);
  EXPECT_EQ(o.prediction, 0);
  EXPECT_EQ(o.p_lower, stats::hoeffding_lower({p.alpha, p.n, p.n}));
}

TEST(Unsound, AbstainsOnCoinFlip) {
  // The threshold sits on the image's own mean, so the vote is close to 50/50.
  const auto f = make_threshold(0.5);
  const QuantizedImage x{{0, 255}, 255};
  const auto o = certify_unsound(*f, x, small_params());
  EXPECT_TRUE(o.abstained());
  EXPECT_FALSE(o.radius.has_value());
}

TEST(Unsound, DeterministicAndPrecisionSpecific) {
  const auto f = make_threshold(0.4);
  const QuantizedImage x{{120, 90, 140, 100}, 255};
  auto p = small_params();
  EXPECT_EQ(certify_unsound(*f, x, p, 3), certify_unsound(*f, x, p, 3));
  EXPECT_NE(certify_unsound(*f, x, p, 3).count1, certify_unsound(*f, x, p, 4).count1);
  p.precision = HostPrecision::Binary32;
  EXPECT_EQ(certify_unsound(*f, x, p, 3), certify_unsound(*f, x, p, 3));
}

TEST(Sound, ConstantClassifierCountsAddUp) {
  const auto f = make_constant(1);
  const QuantizedImage x{{0, 128, 255, 40}, 255};
  const auto ctx = make_sound_context(default_table(), 4, 50, 3000, 8);
  const auto o = certify_sound(*f, x, ctx, small_params(3000));
  EXPECT_EQ(o.prediction, 1);
  EXPECT_EQ(o.count0 + o.count1 + o.failures, 3000u);
  EXPECT_EQ(o.method, Method::Sound);
  EXPECT_EQ(o.p_lower, stats::clopper_pearson_lower({0.001, 3000, o.count1}));
}

TEST(Sound, FailuresCountAgainstTheCandidate) {
  const auto f = make_constant(1);
  const QuantizedImage x{{100, 200}, 255};
  auto ctx = make_sound_context(default_table(), 2, 50, 1000, 8);
  const auto clean = certify_sound(*f, x, ctx, small_params(1000));
  ASSERT_EQ(clean.failures, 0u);
  // Breaking points at interior offsets are unresolvable for any interior pixel.
  for (std::size_t s = 0; s < 40; ++s) {
    ctx.estimation.inject_ambiguity(s, 0, ctx.estimation.offsets(s)[0] + 1);
  }
  const auto hurt = certify_sound(*f, x, ctx, small_params(1000));
  EXPECT_EQ(hurt.failures, 40u);
  EXPECT_EQ(hurt.count1, 960u);
  EXPECT_LT(hurt.p_lower, clean.p_lower);
  EXPECT_EQ(hurt.p_lower, stats::clopper_pearson_lower({0.001, 1000, 960}));
}

TEST(Sound, RejectsMismatchedInputs) {
  const auto f = make_constant(1);
  const auto ctx = make_sound_context(default_table(), 3, 10, 100, 1);
  auto p = small_params(100);
  try {
    certify_sound(*f, QuantizedImage{{1, 2}, 255}, ctx, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Dimension);
  }
  p.sigma = 0.25;
  try {
    certify_sound(*f, QuantizedImage{{1, 2, 3}, 255}, ctx, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SpecMismatch);
  }
}

TEST(Sound, AgreesWithUnsoundOnSmoothClassifier) {
  const auto f = make_threshold(0.5);
  const QuantizedImage x{{150, 160, 170, 150}, 255};
  const auto ctx = make_sound_context(default_table(), 4, 100, 20000, 2);
  auto p = small_params(20000);
  p.n0 = 100;
  const auto s = certify_sound(*f, x, ctx, p);
  const auto u = certify_unsound(*f, x, p);
  ASSERT_EQ(s.prediction, u.prediction);
  EXPECT_NEAR(static_cast<double>(s.count1) / 20000, static_cast<double>(u.count1) / 20000, 0.02);
}

TEST(Summary, CountsCorrectCertificatesAtEachRadius) {
  std::vector<CertificationOutcome> o(4);
  o[0].prediction = 1;
  o[0].radius = 0.3;
  o[1].prediction = 0;
  o[1].radius = 1.0;
  o[2].prediction = kAbstain;
  o[3].prediction = 1;
  o[3].radius = 2.0;
  const std::vector<int> ref = {1, 1, 0, 1};
  const auto rows = summarize(o, ref, {0.0, 0.5, 2.0, 3.0});
  EXPECT_EQ(rows[0].certified_accuracy, 0.5);
  EXPECT_EQ(rows[1].certified_accuracy, 0.25);
  EXPECT_EQ(rows[2].certified_accuracy, 0.25);
  EXPECT_EQ(rows[3].certified_accuracy, 0.0);
}

TEST(Csv, RoundTripsOutcomes) {
  const auto set = images::generate(images::Pattern::Graded, 12, 8, 255, 3);
  const auto f = make_threshold(0.5);
  const auto r = run_dataset(set, *f, Method::Unsound, small_params(500));
  const auto text = emit_csv(r.outcomes);
  EXPECT_EQ(text.substr(0, text.find('\n')), "index,prediction,p_lower,radius,count0,count1,failures,method,sigma,alpha");
  const auto back = parse_csv(text);
  ASSERT_EQ(back.size(), r.outcomes.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].prediction, r.outcomes[i].prediction);
    EXPECT_EQ(back[i].p_lower, r.outcomes[i].p_lower);
    EXPECT_EQ(back[i].radius, r.outcomes[i].radius);
    EXPECT_EQ(back[i].count1, r.outcomes[i].count1);
  }
  EXPECT_EQ(emit_csv(back), text);
}

TEST(Csv, AbstentionAndMalformedRows) {
  CertificationOutcome o;
  o.prediction = kAbstain;
  o.count0 = 3;
  o.count1 = 4;
  o.sigma = 0.5;
  o.alpha = 0.001;
  const auto text = emit_csv({o});
  EXPECT_NE(text.find(",abstain,"), std::string::npos);
  EXPECT_FALSE(parse_csv(text)[0].radius.has_value());
  EXPECT_THROW(parse_csv("index,prediction\n1,2\n"), Error);
}

TEST(Compare, DeterministicTable) {
  const auto set = images::generate(images::Pattern::Graded, 10, 16, 255, 5);
  const auto f = make_threshold(0.5);
  const auto ctx = make_sound_context(default_table(), 16, 50, 800, 11);
  auto p = small_params(800);
  p.seed = 11;
  const auto a = emit_comparison(compare(set, *f, p, &ctx));
  const auto b = emit_comparison(compare(set, *f, p, &ctx));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "radius,unsound,sound");
}

TEST(Images, FileRoundTripAndValidation) {
  const auto set = images::generate(images::Pattern::Graded, 5, 7, 255, 1);
  EXPECT_EQ(images::deserialize_images(images::serialize_images(set)).images.size(), 5u);
  const auto wide = images::generate(images::Pattern::Uniform, 3, 4, 1023, 1);
  const auto back = images::deserialize_images(images::serialize_images(wide));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(back.images[i].pixels, wide.images[i].pixels);
  auto bytes = images::serialize_images(set);
  bytes[0] = 'X';
  EXPECT_THROW(images::deserialize_images(bytes), Error);
  EXPECT_THROW(images::deserialize_images(images::serialize_images(set).substr(0, 30)), Error);
  EXPECT_THROW(images::parse_pattern("striped"), Error);
}

TEST(Images, GeneratorIsSeeded) {
  const auto a = images::generate(images::Pattern::Uniform, 4, 10, 255, 9);
  const auto b = images::generate(images::Pattern::Uniform, 4, 10, 255, 9);
  const auto c = images::generate(images::Pattern::Uniform, 4, 10, 255, 10);
  EXPECT_EQ(a.images[3].pixels, b.images[3].pixels);
  EXPECT_NE(a.images[3].pixels, c.images[3].pixels);
}
