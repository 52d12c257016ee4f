// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "soundsmooth/soundsmooth.h"

#include "soundsmooth/classifiers.hpp"
#include "soundsmooth/demos.hpp"
#include "soundsmooth/exact_tables.hpp"
#include "soundsmooth/images.hpp"
#include "soundsmooth/minifloat.hpp"
#include "soundsmooth/pipeline.hpp"
#include "soundsmooth/sampler.hpp"
#include "soundsmooth/stats.hpp"

using namespace soundsmooth;

struct ss_table {
  tables::BreakingPointTable table;
};

struct ss_noise {
  std::vector<sampler::NoiseBuffer> buffers;  // selection, estimation
};

struct ss_images {
  images::ImageSet set;
};

struct ss_classifier {
  ClassifierPtr f;
};

struct ss_results {
  std::vector<pipeline::CertificationOutcome> outcomes;
  std::string summary_csv;
};

namespace {

thread_local std::string t_last_error;

ss_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return SS_ERR_INVALID_ARGUMENT;
    case ErrorKind::Domain: return SS_ERR_DOMAIN;
    case ErrorKind::Io: return SS_ERR_IO;
    case ErrorKind::Format: return SS_ERR_FORMAT;
    case ErrorKind::Checksum: return SS_ERR_CHECKSUM;
    case ErrorKind::NonMonotone: return SS_ERR_NON_MONOTONE;
    case ErrorKind::SpecMismatch: return SS_ERR_SPEC_MISMATCH;
    case ErrorKind::Dimension: return SS_ERR_DIMENSION;
  }
  return SS_ERR_INTERNAL;
}

// Runs body, translating exceptions into status codes and the thread's error text.
template <class F>
ss_status guarded(F&& body) {
  try {
    body();
    t_last_error.clear();
    return SS_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return SS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return SS_ERR_INTERNAL;
  }
}

template <class... P>
void require(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw Error(ErrorKind::InvalidArgument, "null pointer argument");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void copy_into(char* dst, std::size_t cap, const std::string& s) {
  if (cap <= s.size()) throw Error(ErrorKind::InvalidArgument, "output buffer too small");
  std::memcpy(dst, s.c_str(), s.size() + 1);
}

tables::GridSpec from_c(const ss_grid_spec& s) {
  tables::GridSpec g;
  g.levels = s.levels;
  g.k = s.k;
  g.sigma_num = s.sigma_num;
  g.sigma_den = s.sigma_den;
  g.n_bits = s.n_bits;
  return g;
}

ss_grid_spec to_c(const tables::GridSpec& g) {
  return {g.levels, g.k, g.sigma_num, g.sigma_den, g.n_bits};
}

HostPrecision from_c(ss_precision p) { return p == SS_BINARY32 ? HostPrecision::Binary32 : HostPrecision::Binary64; }

pipeline::CertifyParams from_c(const ss_certify_params& p) {
  pipeline::CertifyParams out;
  out.sigma = p.sigma;
  out.n0 = p.n0;
  out.n = p.n;
  out.alpha = p.alpha;
  out.bound = p.bound == SS_BOUND_HOEFFDING ? pipeline::BoundKind::Hoeffding : pipeline::BoundKind::ClopperPearson;
  out.precision = from_c(p.precision);
  out.seed = p.seed;
  return out;
}

ss_outcome to_c(const pipeline::CertificationOutcome& o) {
  ss_outcome out{};
  out.index = o.index;
  out.prediction = o.prediction;
  out.p_lower = o.p_lower;
  out.radius = o.radius.value_or(0.0);
  out.count0 = o.count0;
  out.count1 = o.count1;
  out.failures = o.failures;
  return out;
}

std::string fraction_text(const tables::Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

std::vector<double> radius_grid(const double* radii, std::size_t count) {
  if (radii == nullptr) return pipeline::default_radius_grid();
  return {radii, radii + count};
}

// Context for the sound method from a table and optional pre-drawn noise.
pipeline::SoundContext sound_context(const ss_table* table, const ss_noise* noise, std::size_t dimension,
                                     const pipeline::CertifyParams& params) {
  if (table == nullptr) throw Error(ErrorKind::InvalidArgument, "the sound method needs a breaking-point table");
  if (noise == nullptr) return pipeline::make_sound_context(table->table, dimension, params.n0, params.n, params.seed);
  if (noise->buffers.size() != 2) throw Error(ErrorKind::Format, "noise file must hold a selection and an estimation buffer");
  pipeline::SoundContext ctx{table->table, noise->buffers[0], noise->buffers[1]};
  ctx.validate();
  if (ctx.estimation.dimension() != dimension) throw Error(ErrorKind::Dimension, "noise buffers and images differ in dimension");
  return ctx;
}

std::string summary_csv(const std::vector<pipeline::SummaryRow>& rows) {
  std::string out = "radius,certified_accuracy\n";
  for (const auto& r : rows) {
    out += pipeline::format_double(r.radius) + ',' + pipeline::format_double(r.certified_accuracy) + '\n';
  }
  return out;
}

bool looks_like_bits(std::string_view s) {
  if (s.starts_with("0b")) return true;
  int digits = 0;
  for (char c : s) {
    if (c == '0' || c == '1') {
      ++digits;
    } else if (c != ' ' && c != '_') {
      return false;
    }
  }
  return digits == 8;
}

}  // namespace

extern "C" {

const char* ss_version(void) { return "1.0.0"; }

const char* ss_status_name(ss_status status) {
  switch (status) {
    case SS_OK: return "ok";
    case SS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SS_ERR_DOMAIN: return "domain error";
    case SS_ERR_IO: return "i/o error";
    case SS_ERR_FORMAT: return "format error";
    case SS_ERR_CHECKSUM: return "checksum mismatch";
    case SS_ERR_NON_MONOTONE: return "non-monotone thresholds";
    case SS_ERR_SPEC_MISMATCH: return "grid spec mismatch";
    case SS_ERR_DIMENSION: return "dimension mismatch";
    case SS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ss_last_error(void) { return t_last_error.c_str(); }

void ss_string_free(char* s) { std::free(s); }

ss_status ss_parse_fraction(const char* text, uint64_t* num, uint64_t* den) {
  return guarded([&] {
    require(text, num, den);
    const auto r = minifloat::parse_rational(text);
    if (r <= 0) throw Error(ErrorKind::InvalidArgument, "fraction must be positive");
    const auto n = boost::multiprecision::numerator(r);
    const auto d = boost::multiprecision::denominator(r);
    if (n > std::numeric_limits<std::uint64_t>::max() || d > std::numeric_limits<std::uint64_t>::max()) {
      throw Error(ErrorKind::InvalidArgument, "fraction does not fit in 64-bit terms");
    }
    *num = n.convert_to<std::uint64_t>();
    *den = d.convert_to<std::uint64_t>();
  });
}

ss_status ss_minifloat_parse(const char* text, uint8_t* bits) {
  return guarded([&] {
    require(text, bits);
    std::string_view s(text);
    if (looks_like_bits(s)) {
      if (s.starts_with("0b")) s.remove_prefix(2);
      *bits = minifloat::parse_bit_string(s).bits();
      return;
    }
    if (s == "inf" || s == "+inf") {
      *bits = minifloat::kPositiveInf.bits();
    } else if (s == "-inf") {
      *bits = minifloat::kNegativeInf.bits();
    } else if (s == "nan") {
      *bits = minifloat::kQuietNaN.bits();
    } else if (s == "-0") {
      *bits = 0x80;
    } else {
      *bits = minifloat::encode(minifloat::parse_rational(s)).bits();
    }
  });
}

ss_status ss_minifloat_add(uint8_t a, uint8_t b, uint8_t* out) {
  return guarded([&] {
    require(out);
    *out = minifloat::add(minifloat::MiniFloat8::from_bits(a), minifloat::MiniFloat8::from_bits(b)).bits();
  });
}

ss_status ss_minifloat_sub(uint8_t a, uint8_t b, uint8_t* out) {
  return guarded([&] {
    require(out);
    *out = minifloat::sub(minifloat::MiniFloat8::from_bits(a), minifloat::MiniFloat8::from_bits(b)).bits();
  });
}

ss_status ss_minifloat_describe(uint8_t bits, char* pattern, size_t pattern_cap, char* value, size_t value_cap) {
  return guarded([&] {
    require(pattern, value);
    const auto m = minifloat::MiniFloat8::from_bits(bits);
    copy_into(pattern, pattern_cap, minifloat::to_bit_string(m));
    copy_into(value, value_cap, minifloat::to_decimal_string(m));
  });
}

ss_status ss_minifloat_check_identities(ss_identity_report* out) {
  return guarded([&] {
    require(out);
    const auto r = minifloat::check_identities();
    *out = {r.pairs, r.always_violations, r.near_violations, r.commutativity_violations};
  });
}

ss_status ss_normal_cdf(double x, double* out) {
  return guarded([&] {
    require(out);
    *out = stats::normal_cdf(x);
  });
}

ss_status ss_phi_inv(double p, double* out) {
  return guarded([&] {
    require(out);
    *out = stats::phi_inv(p);
  });
}

ss_status ss_hoeffding_lower(double alpha, uint64_t n, uint64_t successes, double* out) {
  return guarded([&] {
    require(out);
    *out = stats::hoeffding_lower({alpha, n, successes});
  });
}

ss_status ss_clopper_pearson_lower(double alpha, uint64_t n, uint64_t successes, double* out) {
  return guarded([&] {
    require(out);
    *out = stats::clopper_pearson_lower({alpha, n, successes});
  });
}

ss_status ss_certified_radius(double p_lower, double sigma, double* radius, int* abstain) {
  return guarded([&] {
    require(radius, abstain);
    if (!(p_lower >= 0.0 && p_lower <= 1.0)) throw Error(ErrorKind::InvalidArgument, "p_lower must lie in [0, 1]");
    if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be positive");
    const auto r = stats::certified_radius(p_lower, sigma);
    *abstain = r ? 0 : 1;
    *radius = r.value_or(0.0);
  });
}

ss_status ss_grid_spec_default(uint32_t levels, uint64_t sigma_num, uint64_t sigma_den, uint32_t n_bits,
                               ss_grid_spec* out) {
  return guarded([&] {
    require(out);
    *out = to_c(tables::default_spec(levels, sigma_num, sigma_den, n_bits));
  });
}

ss_status ss_table_build(const ss_grid_spec* spec, ss_table** out) {
  return guarded([&] {
    require(spec, out);
    *out = new ss_table{tables::build_table(from_c(*spec))};
  });
}

ss_status ss_table_read(const char* path, ss_table** out) {
  return guarded([&] {
    require(path, out);
    *out = new ss_table{tables::read_table(path)};
  });
}

ss_status ss_table_write(const ss_table* table, const char* path) {
  return guarded([&] {
    require(table, path);
    tables::write_table(table->table, path);
  });
}

void ss_table_free(ss_table* table) { delete table; }

ss_status ss_table_spec(const ss_table* table, ss_grid_spec* out) {
  return guarded([&] {
    require(table, out);
    *out = to_c(table->table.spec());
  });
}

ss_status ss_table_size(const ss_table* table, size_t* entries, size_t* ambiguous) {
  return guarded([&] {
    require(table, entries, ambiguous);
    *entries = table->table.size();
    *ambiguous = table->table.ambiguous_count();
  });
}

ss_status ss_table_entry(const ss_table* table, size_t j, uint64_t* threshold_minus_one, int* ambiguous) {
  return guarded([&] {
    require(table, threshold_minus_one, ambiguous);
    if (j >= table->table.size()) throw Error(ErrorKind::InvalidArgument, "table index out of range");
    *threshold_minus_one = static_cast<std::uint64_t>(table->table.threshold(j) - 1);
    *ambiguous = table->table.ambiguous(j) ? 1 : 0;
  });
}

ss_status ss_table_draw(const ss_table* table, uint64_t u, int64_t* lo, int64_t* hi) {
  return guarded([&] {
    require(table, lo, hi);
    const auto r = sampler::draw_offset(u, table->table);
    *lo = r.lo;
    *hi = r.hi;
  });
}

ss_status ss_failure_bound_compute(const ss_grid_spec* spec, const ss_table* table, uint64_t dimension,
                                   uint64_t samples, ss_failure_bound* out) {
  return guarded([&] {
    require(out);
    if (spec == nullptr && table == nullptr) throw Error(ErrorKind::InvalidArgument, "need a spec or a table");
    const auto b = table != nullptr ? tables::failure_probability_bound(table->table, dimension, samples)
                                    : tables::failure_probability_bound(from_c(*spec), dimension, samples);
    ss_failure_bound r{};
    r.per_draw = b.per_draw.convert_to<double>();
    r.per_coordinate = b.per_coordinate.convert_to<double>();
    r.aggregate_failure = b.aggregate_failure.convert_to<double>();
    r.aggregate_success = b.aggregate_success.convert_to<double>();
    r.coordinates = b.coordinates;
    copy_into(r.per_coordinate_exact, sizeof r.per_coordinate_exact, fraction_text(b.per_coordinate));
    copy_into(r.aggregate_success_exact, sizeof r.aggregate_success_exact, fraction_text(b.aggregate_success));
    *out = r;
  });
}

ss_status ss_failure_bound_at_most_pow2(const ss_failure_bound* bound, int which, int exponent, int* holds) {
  return guarded([&] {
    require(bound, holds);
    if (exponent > 0 || exponent < -1000) throw Error(ErrorKind::InvalidArgument, "exponent must lie in [-1000, 0]");
    tables::Rational value;
    if (which == 0) {
      value = minifloat::parse_rational(bound->per_coordinate_exact);
    } else if (which == 1) {
      value = 1 - minifloat::parse_rational(bound->aggregate_success_exact);
    } else {
      throw Error(ErrorKind::InvalidArgument, "which must be 0 (per coordinate) or 1 (aggregate failure)");
    }
    const tables::Rational limit(tables::BigInt(1), tables::BigInt(1) << -exponent);
    *holds = value <= limit ? 1 : 0;
  });
}

ss_status ss_noise_build(const ss_table* table, size_t dimension, uint64_t n0, uint64_t n, uint64_t seed,
                         ss_noise** out) {
  return guarded([&] {
    require(table, out);
    auto ctx = pipeline::make_sound_context(table->table, dimension, n0, n, seed);
    *out = new ss_noise{{std::move(ctx.selection), std::move(ctx.estimation)}};
  });
}

ss_status ss_noise_read(const char* path, ss_noise** out) {
  return guarded([&] {
    require(path, out);
    *out = new ss_noise{sampler::read_noise(path)};
  });
}

ss_status ss_noise_write(const ss_noise* noise, const char* path) {
  return guarded([&] {
    require(noise, path);
    sampler::write_noise(noise->buffers, path);
  });
}

void ss_noise_free(ss_noise* noise) { delete noise; }

ss_status ss_noise_info(const ss_noise* noise, size_t* dimension, uint64_t* n0, uint64_t* n, uint64_t* breaking_draws) {
  return guarded([&] {
    require(noise, dimension, n0, n, breaking_draws);
    if (noise->buffers.size() != 2) throw Error(ErrorKind::Format, "noise file must hold a selection and an estimation buffer");
    *dimension = noise->buffers[1].dimension();
    *n0 = noise->buffers[0].samples();
    *n = noise->buffers[1].samples();
    *breaking_draws = noise->buffers[0].ambiguous().size() + noise->buffers[1].ambiguous().size();
  });
}

ss_status ss_images_generate(const char* pattern, size_t count, size_t dimension, uint32_t levels, uint64_t seed,
                             ss_images** out) {
  return guarded([&] {
    require(pattern, out);
    *out = new ss_images{images::generate(images::parse_pattern(pattern), count, dimension, levels, seed)};
  });
}

ss_status ss_images_read(const char* path, ss_images** out) {
  return guarded([&] {
    require(path, out);
    *out = new ss_images{images::read_images(path)};
  });
}

ss_status ss_images_write(const ss_images* imgs, const char* path) {
  return guarded([&] {
    require(imgs, path);
    images::write_images(imgs->set, path);
  });
}

void ss_images_free(ss_images* imgs) { delete imgs; }

ss_status ss_images_info(const ss_images* imgs, size_t* count, size_t* dimension, uint32_t* levels) {
  return guarded([&] {
    require(imgs, count, dimension, levels);
    *count = imgs->set.images.size();
    *dimension = imgs->set.dimension;
    *levels = imgs->set.levels;
  });
}

ss_status ss_classifier_parse(const char* text, uint32_t levels, ss_classifier** out) {
  return guarded([&] {
    require(text, out);
    *out = new ss_classifier{parse_classifier(text, levels)};
  });
}

void ss_classifier_free(ss_classifier* classifier) { delete classifier; }

void ss_certify_params_default(ss_certify_params* out) {
  if (out == nullptr) return;
  const pipeline::CertifyParams d;
  *out = {d.sigma, d.n0, d.n, d.alpha, SS_BOUND_CLOPPER_PEARSON, SS_BINARY64, d.seed};
}

ss_status ss_certify(const ss_classifier* classifier, const ss_images* imgs, ss_method method,
                     const ss_certify_params* params, const ss_table* table, const ss_noise* noise, const double* radii,
                     size_t radius_count, ss_results** out) {
  return guarded([&] {
    require(classifier, imgs, params, out);
    const auto p = from_c(*params);
    const auto grid = radius_grid(radii, radius_count);
    pipeline::DatasetResult r;
    if (method == SS_METHOD_SOUND) {
      const auto ctx = sound_context(table, noise, imgs->set.dimension, p);
      r = pipeline::run_dataset(imgs->set, *classifier->f, pipeline::Method::Sound, p, &ctx, grid);
    } else {
      r = pipeline::run_dataset(imgs->set, *classifier->f, pipeline::Method::Unsound, p, nullptr, grid);
    }
    *out = new ss_results{std::move(r.outcomes), summary_csv(r.summary)};
  });
}

ss_status ss_compare(const ss_classifier* classifier, const ss_images* imgs, const ss_certify_params* params,
                     const ss_table* table, const ss_noise* noise, const double* radii, size_t radius_count,
                     ss_results** out) {
  return guarded([&] {
    require(classifier, imgs, params, out);
    const auto p = from_c(*params);
    const auto ctx = sound_context(table, noise, imgs->set.dimension, p);
    auto c = pipeline::compare(imgs->set, *classifier->f, p, &ctx, radius_grid(radii, radius_count));
    auto outcomes = std::move(c.unsound.outcomes);
    outcomes.insert(outcomes.end(), c.sound.outcomes.begin(), c.sound.outcomes.end());
    c.unsound.outcomes.clear();
    c.sound.outcomes.clear();
    *out = new ss_results{std::move(outcomes), pipeline::emit_comparison(c)};
  });
}

void ss_results_free(ss_results* results) { delete results; }

ss_status ss_results_count(const ss_results* results, size_t* count) {
  return guarded([&] {
    require(results, count);
    *count = results->outcomes.size();
  });
}

ss_status ss_results_outcome(const ss_results* results, size_t i, ss_outcome* out) {
  return guarded([&] {
    require(results, out);
    if (i >= results->outcomes.size()) throw Error(ErrorKind::InvalidArgument, "outcome index out of range");
    *out = to_c(results->outcomes[i]);
  });
}

ss_status ss_results_csv(const ss_results* results, char** out) {
  return guarded([&] {
    require(results, out);
    *out = dup_string(pipeline::emit_csv(results->outcomes));
  });
}

ss_status ss_results_summary_csv(const ss_results* results, char** out) {
  return guarded([&] {
    require(results, out);
    *out = dup_string(results->summary_csv);
  });
}

void ss_attack_demo_params_default(ss_attack_demo_params* out) {
  if (out == nullptr) return;
  const demos::AttackDemoParams d;
  *out = {d.intensity, d.levels, d.sigma, d.samples, d.alpha, d.seed, SS_BINARY64, d.sound ? 1 : 0};
}

ss_status ss_attack_demo(const ss_attack_demo_params* params, ss_attack_demo_result* out) {
  return guarded([&] {
    require(params, out);
    demos::AttackDemoParams p;
    p.intensity = params->intensity;
    p.levels = params->levels;
    p.sigma = params->sigma;
    p.samples = params->samples;
    p.alpha = params->alpha;
    p.seed = params->seed;
    p.precision = from_c(params->precision);
    p.sound = params->sound != 0;
    const auto r = demos::run_attack_demo(p);
    ss_attack_demo_result o{};
    o.p_at_zero = r.p_at_zero;
    o.p_at_anchor = r.p_at_anchor;
    o.hoeffding_p = r.hoeffding_p;
    o.hoeffding_radius = r.hoeffding_radius;
    o.clopper_pearson_p = r.clopper_pearson_p;
    o.clopper_pearson_radius = r.clopper_pearson_radius;
    o.prediction_at_zero = r.at_zero.prediction;
    o.distance = r.distance;
    o.has_sound = r.sound_at_anchor ? 1 : 0;
    if (r.sound_at_anchor) o.sound_at_anchor = to_c(*r.sound_at_anchor);
    *out = o;
  });
}

void ss_theorem_demo_params_default(ss_theorem_demo_params* out) {
  if (out == nullptr) return;
  const demos::TheoremDemoParams d;
  *out = {d.anchors, d.dimension, d.levels, d.sigma, d.n0, d.samples, d.alpha, d.seed, SS_BINARY64, d.sound ? 1 : 0};
}

ss_status ss_theorem_demo(const ss_theorem_demo_params* params, ss_theorem_demo_result* out) {
  return guarded([&] {
    require(params, out);
    demos::TheoremDemoParams p;
    p.anchors = params->anchors;
    p.dimension = params->dimension;
    p.levels = params->levels;
    p.sigma = params->sigma;
    p.n0 = params->n0;
    p.samples = params->samples;
    p.alpha = params->alpha;
    p.seed = params->seed;
    p.precision = from_c(params->precision);
    p.sound = params->sound != 0;
    const auto r = demos::run_theorem_demo(p);
    ss_theorem_demo_result o{};
    o.perturbation_norm = r.perturbation_norm;
    o.anchors = r.anchors.size();
    for (const auto& a : r.anchors) {
      o.flipped += a.flipped ? 1 : 0;
      o.unsound_at_least_2 += (a.unsound.radius.value_or(0.0) >= 2.0 && a.unsound.prediction == a.label) ? 1 : 0;
      if (a.sound) o.sound_covering += a.sound->radius.value_or(0.0) >= r.perturbation_norm ? 1 : 0;
    }
    o.min_unsound_radius = r.min_unsound_radius;
    o.max_sound_radius = r.max_sound_radius;
    o.unsound_all_at_least_2 = r.unsound_all_at_least_2 ? 1 : 0;
    o.all_flipped = r.all_flipped ? 1 : 0;
    o.sound_none_covering = r.sound_none_covering ? 1 : 0;
    *out = o;
  });
}

}  // extern "C"
