// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "soundsmooth/soundsmooth.h"

namespace {

std::string temp_path(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST(CApi, StatusNamesAndLastError) {
  EXPECT_STREQ(ss_status_name(SS_OK), "ok");
  double out = 0;
  EXPECT_EQ(ss_phi_inv(1.5, &out), SS_ERR_DOMAIN);
  EXPECT_STRNE(ss_last_error(), "");
  EXPECT_EQ(ss_phi_inv(0.5, &out), SS_OK);
  EXPECT_STREQ(ss_last_error(), "");
  EXPECT_EQ(out, 0.0);
  EXPECT_EQ(ss_phi_inv(0.5, nullptr), SS_ERR_INVALID_ARGUMENT);
}

TEST(CApi, Minifloat) {
  std::uint8_t a = 0, b = 0, c = 0;
  ASSERT_EQ(ss_minifloat_parse("1 110 1010", &a), SS_OK);
  EXPECT_EQ(a, 0xEA);
  ASSERT_EQ(ss_minifloat_parse("4.75", &b), SS_OK);
  ASSERT_EQ(ss_minifloat_add(a, b, &c), SS_OK);
  char pattern[32], value[32];
  ASSERT_EQ(ss_minifloat_describe(c, pattern, sizeof pattern, value, sizeof value), SS_OK);
  EXPECT_STREQ(pattern, "1 110 0000");
  EXPECT_STREQ(value, "-8");
  EXPECT_EQ(ss_minifloat_describe(c, pattern, 3, value, sizeof value), SS_ERR_INVALID_ARGUMENT);
  ss_identity_report r{};
  ASSERT_EQ(ss_minifloat_check_identities(&r), SS_OK);
  EXPECT_EQ(r.always_violations, 0u);
}

TEST(CApi, TableLifecycle) {
  ss_grid_spec spec{4, 2, 1, 1, 8};
  ss_table* t = nullptr;
  ASSERT_EQ(ss_table_build(&spec, &t), SS_OK);
  std::size_t entries = 0, ambiguous = 0;
  ASSERT_EQ(ss_table_size(t, &entries, &ambiguous), SS_OK);
  EXPECT_EQ(entries, 13u);
  std::uint64_t v = 0;
  int amb = 0;
  ASSERT_EQ(ss_table_entry(t, 0, &v, &amb), SS_OK);
  EXPECT_EQ(v, 21u);
  EXPECT_EQ(ss_table_entry(t, 13, &v, &amb), SS_ERR_INVALID_ARGUMENT);
  std::int64_t lo = 0, hi = 0;
  ASSERT_EQ(ss_table_draw(t, 22, &lo, &hi), SS_OK);
  EXPECT_EQ(lo, -6);
  EXPECT_EQ(hi, -5);

  const auto path = temp_path("soundsmooth_capi.tbl");
  ASSERT_EQ(ss_table_write(t, path.c_str()), SS_OK);
  ss_table* back = nullptr;
  ASSERT_EQ(ss_table_read(path.c_str(), &back), SS_OK);
  ss_grid_spec got{};
  ASSERT_EQ(ss_table_spec(back, &got), SS_OK);
  EXPECT_EQ(got.levels, 4u);
  ss_table_free(back);

  // Flip one entry bit: the checksum must catch it.
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(45);
    f.put('\x7f');
  }
  EXPECT_EQ(ss_table_read(path.c_str(), &back), SS_ERR_CHECKSUM);
  EXPECT_EQ(ss_table_read("/nonexistent/x.tbl", &back), SS_ERR_IO);
  std::filesystem::remove(path);
  ss_table_free(t);
  ss_table_free(nullptr);
}

TEST(CApi, FailureBoundExactComparisons) {
  ss_grid_spec spec{255, 1912, 1, 2, 64};
  ss_failure_bound b{};
  ASSERT_EQ(ss_failure_bound_compute(&spec, nullptr, 3 * 224 * 224, 100000, &b), SS_OK);
  EXPECT_STREQ(b.per_coordinate_exact, "4079/18446744073709551616");
  int holds = 0;
  ASSERT_EQ(ss_failure_bound_at_most_pow2(&b, 0, -52, &holds), SS_OK);
  EXPECT_EQ(holds, 1);
  ASSERT_EQ(ss_failure_bound_at_most_pow2(&b, 0, -53, &holds), SS_OK);
  EXPECT_EQ(holds, 0);
  ASSERT_EQ(ss_failure_bound_at_most_pow2(&b, 1, -18, &holds), SS_OK);
  EXPECT_EQ(holds, 1);
  EXPECT_EQ(ss_failure_bound_at_most_pow2(&b, 2, -18, &holds), SS_ERR_INVALID_ARGUMENT);
}

TEST(CApi, CertifyThroughHandles) {
  ss_images* imgs = nullptr;
  ASSERT_EQ(ss_images_generate("graded", 6, 8, 255, 1, &imgs), SS_OK);
  ss_classifier* f = nullptr;
  ASSERT_EQ(ss_classifier_parse("threshold:0.5", 255, &f), SS_OK);
  ss_certify_params p{};
  ss_certify_params_default(&p);
  p.n = 500;
  p.n0 = 20;

  ss_results* r = nullptr;
  ASSERT_EQ(ss_certify(f, imgs, SS_METHOD_UNSOUND, &p, nullptr, nullptr, nullptr, 0, &r), SS_OK);
  std::size_t count = 0;
  ASSERT_EQ(ss_results_count(r, &count), SS_OK);
  EXPECT_EQ(count, 6u);
  ss_outcome o{};
  ASSERT_EQ(ss_results_outcome(r, 5, &o), SS_OK);
  EXPECT_EQ(o.index, 5u);
  EXPECT_EQ(o.count0 + o.count1, 500u);
  char* csv = nullptr;
  ASSERT_EQ(ss_results_csv(r, &csv), SS_OK);
  EXPECT_EQ(std::string(csv).rfind("index,prediction", 0), 0u);
  ss_string_free(csv);
  ss_results_free(r);

  EXPECT_EQ(ss_certify(f, imgs, SS_METHOD_SOUND, &p, nullptr, nullptr, nullptr, 0, &r), SS_ERR_INVALID_ARGUMENT);

  ss_grid_spec spec{};
  ASSERT_EQ(ss_grid_spec_default(255, 1, 2, 64, &spec), SS_OK);
  ss_table* t = nullptr;
  ASSERT_EQ(ss_table_build(&spec, &t), SS_OK);
  ss_noise* z = nullptr;
  ASSERT_EQ(ss_noise_build(t, 8, 20, 500, 3, &z), SS_OK);
  ASSERT_EQ(ss_compare(f, imgs, &p, t, z, nullptr, 0, &r), SS_OK);
  ASSERT_EQ(ss_results_count(r, &count), SS_OK);
  EXPECT_EQ(count, 12u);
  char* table = nullptr;
  ASSERT_EQ(ss_results_summary_csv(r, &table), SS_OK);
  EXPECT_EQ(std::string(table).rfind("radius,unsound,sound\n", 0), 0u);
  ss_string_free(table);
  ss_results_free(r);

  ss_noise* wrong = nullptr;
  ASSERT_EQ(ss_noise_build(t, 9, 20, 500, 3, &wrong), SS_OK);
  EXPECT_EQ(ss_compare(f, imgs, &p, t, wrong, nullptr, 0, &r), SS_ERR_DIMENSION);

  ss_noise_free(wrong);
  ss_noise_free(z);
  ss_table_free(t);
  ss_classifier_free(f);
  ss_images_free(imgs);
}
