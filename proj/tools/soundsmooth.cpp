// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Everything goes through the C interface.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "soundsmooth/soundsmooth.h"

namespace {

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitFormat = 4;

int exit_code(ss_status s) {
  switch (s) {
    case SS_OK: return kExitOk;
    case SS_ERR_IO: return kExitIo;
    case SS_ERR_FORMAT:
    case SS_ERR_CHECKSUM:
    case SS_ERR_NON_MONOTONE: return kExitFormat;
    case SS_ERR_INVALID_ARGUMENT:
    case SS_ERR_DOMAIN:
    case SS_ERR_SPEC_MISMATCH:
    case SS_ERR_DIMENSION: return kExitValidation;
    case SS_ERR_INTERNAL: break;
  }
  return kExitInternal;
}

struct Failure : std::runtime_error {
  Failure(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

void check(ss_status s) {
  if (s != SS_OK) throw Failure(exit_code(s), std::string(ss_status_name(s)) + ": " + ss_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Table = std::unique_ptr<ss_table, Deleter<ss_table, ss_table_free>>;
using Noise = std::unique_ptr<ss_noise, Deleter<ss_noise, ss_noise_free>>;
using Images = std::unique_ptr<ss_images, Deleter<ss_images, ss_images_free>>;
using Classifier = std::unique_ptr<ss_classifier, Deleter<ss_classifier, ss_classifier_free>>;
using Results = std::unique_ptr<ss_results, Deleter<ss_results, ss_results_free>>;

std::string take_string(char* s) {
  std::string out(s);
  ss_string_free(s);
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Failure(kExitIo, "cannot write " + path);
}

struct Fraction {
  std::uint64_t num = 1;
  std::uint64_t den = 2;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Fraction parse_fraction(const std::string& text) {
  Fraction f;
  check(ss_parse_fraction(text.c_str(), &f.num, &f.den));
  return f;
}

const std::map<std::string, ss_precision> kPrecisions{{"binary64", SS_BINARY64}, {"binary32", SS_BINARY32}};
const std::map<std::string, ss_bound> kBounds{{"clopper-pearson", SS_BOUND_CLOPPER_PEARSON},
                                              {"cp", SS_BOUND_CLOPPER_PEARSON},
                                              {"hoeffding", SS_BOUND_HOEFFDING}};
const std::map<std::string, ss_method> kMethods{{"unsound", SS_METHOD_UNSOUND}, {"sound", SS_METHOD_SOUND}};

// ---- minifloat ---------------------------------------------------------------

std::string describe(std::uint8_t bits) {
  char pattern[32];
  char value[64];
  check(ss_minifloat_describe(bits, pattern, sizeof pattern, value, sizeof value));
  return std::string(pattern) + "  " + value;
}

std::uint8_t parse_minifloat(const std::string& text) {
  std::uint8_t bits = 0;
  check(ss_minifloat_parse(text.c_str(), &bits));
  return bits;
}

// ---- certification inputs shared by certify and compare -----------------------

struct CertifyOptions {
  std::string classifier;
  std::string images;
  std::string sigma = "1/2";
  std::optional<std::uint32_t> k;
  std::uint32_t bits = 64;
  std::uint64_t n0 = 100;
  std::uint64_t n = 100000;
  double alpha = 0.001;
  std::uint64_t seed = 0;
  std::string table;
  std::string noise;
  std::string bound = "clopper-pearson";
  std::string precision = "binary64";
  std::vector<double> radii;
  std::string out;
  std::string summary;
};

void add_certify_options(CLI::App* app, CertifyOptions& o) {
  app->add_option("--classifier", o.classifier,
                  "constant:C | fa:A | fai:I:A | ga:FILE[:INDEX] | ha:FILE | m:FILE | threshold:THETA")
      ->required();
  app->add_option("--images", o.images, "QIMGSET image file")->required();
  app->add_option("--sigma", o.sigma, "noise level, e.g. 1/2 or 0.25")->capture_default_str();
  app->add_option("--k", o.k, "clamp margin in grid steps when the table is built here (default 6 L)");
  app->add_option("--bits", o.bits, "uniform width when the table is built here")->capture_default_str();
  app->add_option("--n0", o.n0, "selection samples")->capture_default_str();
  app->add_option("--n", o.n, "estimation samples")->capture_default_str();
  app->add_option("--alpha", o.alpha, "failure probability of the confidence bound")->capture_default_str();
  app->add_option("--seed", o.seed)->capture_default_str();
  app->add_option("--table", o.table, "breaking-point table file (sound method)");
  app->add_option("--noise", o.noise, "pre-drawn noise file (sound method)");
  app->add_option("--bound", o.bound)->check(CLI::IsMember(kBounds))->capture_default_str();
  app->add_option("--precision", o.precision, "host float type of the unsound method")
      ->check(CLI::IsMember(kPrecisions))
      ->capture_default_str();
  app->add_option("--radii", o.radii, "radii of the certified-accuracy summary");
}

struct CertifyInputs {
  Classifier classifier;
  Images images;
  Table table;
  Noise noise;
  ss_certify_params params{};
};

CertifyInputs load_inputs(const CertifyOptions& o, bool need_table) {
  CertifyInputs in;
  ss_images* imgs = nullptr;
  check(ss_images_read(o.images.c_str(), &imgs));
  in.images.reset(imgs);
  std::size_t count = 0;
  std::size_t d = 0;
  std::uint32_t levels = 0;
  check(ss_images_info(imgs, &count, &d, &levels));

  ss_classifier* f = nullptr;
  check(ss_classifier_parse(o.classifier.c_str(), levels, &f));
  in.classifier.reset(f);

  const auto sigma = parse_fraction(o.sigma);
  ss_certify_params_default(&in.params);
  in.params.sigma = sigma.value();
  in.params.n0 = o.n0;
  in.params.n = o.n;
  in.params.alpha = o.alpha;
  in.params.seed = o.seed;
  in.params.bound = kBounds.at(o.bound);
  in.params.precision = kPrecisions.at(o.precision);

  if (!need_table) return in;
  ss_table* t = nullptr;
  if (!o.table.empty()) {
    check(ss_table_read(o.table.c_str(), &t));
  } else {
    ss_grid_spec spec{};
    check(ss_grid_spec_default(levels, sigma.num, sigma.den, o.bits, &spec));
    if (o.k) spec.k = *o.k;
    check(ss_table_build(&spec, &t));
  }
  in.table.reset(t);
  ss_grid_spec spec{};
  check(ss_table_spec(t, &spec));
  // The table fixes sigma for the sound method; --sigma must agree with it.
  using Wide = unsigned __int128;
  if (Wide{sigma.num} * spec.sigma_den != Wide{spec.sigma_num} * sigma.den) {
    throw Failure(kExitValidation, "--sigma " + o.sigma + " does not match the table's sigma " +
                                       std::to_string(spec.sigma_num) + "/" + std::to_string(spec.sigma_den));
  }
  in.params.sigma = static_cast<double>(spec.sigma_num) / static_cast<double>(spec.sigma_den);
  if (!o.noise.empty()) {
    ss_noise* z = nullptr;
    check(ss_noise_read(o.noise.c_str(), &z));
    in.noise.reset(z);
    std::size_t nd = 0;
    std::uint64_t nn0 = 0;
    std::uint64_t nn = 0;
    std::uint64_t breaking = 0;
    check(ss_noise_info(z, &nd, &nn0, &nn, &breaking));
    in.params.n0 = nn0;
    in.params.n = nn;
  }
  return in;
}

const double* radii_ptr(const CertifyOptions& o) { return o.radii.empty() ? nullptr : o.radii.data(); }

// ---- subcommands --------------------------------------------------------------

int run_attack_demo(const ss_attack_demo_params& p) {
  ss_attack_demo_result r{};
  check(ss_attack_demo(&p, &r));
  std::cout << "a = " << p.intensity << "/" << p.levels << ", sigma = " << fmt(p.sigma) << ", N = " << p.samples
            << ", alpha = " << fmt(p.alpha) << "\n";
  std::cout << "p1 (F_a at 0 + noise)    = " << fmt(r.p_at_zero) << "\n";
  std::cout << "p2 (F_a at a + noise)    = " << fmt(r.p_at_anchor) << "\n";
  std::cout << "Hoeffding lower bound    = " << fmt(r.hoeffding_p) << "  radius " << fmt(r.hoeffding_radius) << "\n";
  std::cout << "Clopper-Pearson bound    = " << fmt(r.clopper_pearson_p) << "  radius " << fmt(r.clopper_pearson_radius)
            << "\n";
  std::cout << "distance from a to 0     = " << fmt(r.distance) << "\n";
  std::cout << "smoothed prediction at 0 = "
            << (r.prediction_at_zero < 0 ? std::string("abstain") : std::to_string(r.prediction_at_zero)) << "\n";
  const bool broken = r.hoeffding_radius > r.distance && r.prediction_at_zero == 0;
  std::cout << "false certificate        = " << (broken ? "yes" : "no") << "\n";
  if (r.has_sound) {
    const auto& s = r.sound_at_anchor;
    std::cout << "sound at a               = prediction "
              << (s.prediction < 0 ? std::string("abstain") : std::to_string(s.prediction)) << ", p_lower "
              << fmt(s.p_lower) << ", radius " << fmt(s.radius) << ", failures " << s.failures << "\n";
  }
  return kExitOk;
}

int run_theorem_demo(const ss_theorem_demo_params& p) {
  ss_theorem_demo_result r{};
  check(ss_theorem_demo(&p, &r));
  std::cout << "anchors " << r.anchors << ", d = " << p.dimension << ", sigma = " << fmt(p.sigma) << ", n0 = " << p.n0
            << ", n = " << p.samples << "\n";
  std::cout << "perturbation norm               = " << fmt(r.perturbation_norm) << "\n";
  std::cout << "unsound radius >= 2             = " << r.unsound_at_least_2 << "/" << r.anchors
            << "  (min radius " << fmt(r.min_unsound_radius) << ")\n";
  std::cout << "smoothed prediction flipped     = " << r.flipped << "/" << r.anchors << "\n";
  if (p.sound) {
    std::cout << "sound radius covering the norm  = " << r.sound_covering << "/" << r.anchors << "  (max radius "
              << fmt(r.max_sound_radius) << ")\n";
  }
  const bool holds = r.unsound_all_at_least_2 && r.all_flipped && (!p.sound || r.sound_none_covering);
  std::cout << "result                          = " << (holds ? "reproduced" : "not reproduced") << "\n";
  return kExitOk;
}

int run_table_gen(std::uint32_t levels, std::optional<std::uint32_t> k, const std::string& sigma, std::uint32_t bits,
                  const std::string& out) {
  const auto s = parse_fraction(sigma);
  ss_grid_spec spec{};
  check(ss_grid_spec_default(levels, s.num, s.den, bits, &spec));
  if (k) spec.k = *k;
  ss_table* raw = nullptr;
  check(ss_table_build(&spec, &raw));
  Table t(raw);
  check(ss_table_write(t.get(), out.c_str()));
  std::size_t entries = 0;
  std::size_t ambiguous = 0;
  check(ss_table_size(t.get(), &entries, &ambiguous));
  std::cout << "wrote " << out << ": L = " << spec.levels << ", k = " << spec.k << ", sigma = " << spec.sigma_num << "/"
            << spec.sigma_den << ", n_bits = " << spec.n_bits << ", " << entries << " entries, " << ambiguous
            << " ambiguous\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floating-point attacks on randomized smoothing and sound certification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ss_version()));

  // attack-demo
  ss_attack_demo_params attack{};
  ss_attack_demo_params_default(&attack);
  std::string attack_precision = "binary64";
  bool attack_sound = false;
  auto* attack_cmd = app.add_subcommand("attack-demo", "one-dimensional false certificate for the reachability predicate");
  attack_cmd->add_option("--intensity", attack.intensity, "anchor a as an intensity in 0..L")->capture_default_str();
  attack_cmd->add_option("--levels", attack.levels, "L")->capture_default_str();
  attack_cmd->add_option("--sigma", attack.sigma)->capture_default_str();
  attack_cmd->add_option("--samples", attack.samples)->capture_default_str();
  attack_cmd->add_option("--alpha", attack.alpha)->capture_default_str();
  attack_cmd->add_option("--seed", attack.seed)->capture_default_str();
  attack_cmd->add_option("--precision", attack_precision)->check(CLI::IsMember(kPrecisions))->capture_default_str();
  attack_cmd->add_flag("--sound", attack_sound, "also certify a with the sound method");

  // theorem-demo
  ss_theorem_demo_params theorem{};
  ss_theorem_demo_params_default(&theorem);
  theorem.anchors = 100;
  theorem.samples = 50;
  std::string theorem_precision = "binary64";
  bool theorem_no_sound = false;
  auto* theorem_cmd = app.add_subcommand("theorem-demo", "memorizing classifier flipped by one fixed perturbation");
  theorem_cmd->add_option("--images", theorem.anchors, "number of anchors")->capture_default_str();
  theorem_cmd->add_option("--samples", theorem.samples, "estimation samples per certificate")->capture_default_str();
  theorem_cmd->add_option("--n0", theorem.n0, "selection samples")->capture_default_str();
  theorem_cmd->add_option("--dimension", theorem.dimension)->capture_default_str();
  theorem_cmd->add_option("--levels", theorem.levels)->capture_default_str();
  theorem_cmd->add_option("--sigma", theorem.sigma)->capture_default_str();
  theorem_cmd->add_option("--alpha", theorem.alpha)->capture_default_str();
  theorem_cmd->add_option("--seed", theorem.seed)->capture_default_str();
  theorem_cmd->add_option("--precision", theorem_precision)->check(CLI::IsMember(kPrecisions))->capture_default_str();
  theorem_cmd->add_flag("--no-sound", theorem_no_sound, "skip the sound comparison");

  // minifloat
  auto* mf_cmd = app.add_subcommand("minifloat", "8-bit minifloat (1 sign, 3 exponent, 4 mantissa bits)");
  mf_cmd->require_subcommand(1);
  std::string mf_x;
  std::string mf_y;
  auto* mf_decode = mf_cmd->add_subcommand("decode", "show the pattern and exact value of a bit pattern or number");
  mf_decode->add_option("x", mf_x, "e.g. \"1 110 1010\" or 6.5")->required();
  auto* mf_add = mf_cmd->add_subcommand("add", "x + y, rounded to nearest even");
  mf_add->add_option("x", mf_x)->required();
  mf_add->add_option("y", mf_y)->required();
  auto* mf_sub = mf_cmd->add_subcommand("sub", "x - y, rounded to nearest even");
  mf_sub->add_option("x", mf_x)->required();
  mf_sub->add_option("y", mf_y)->required();
  auto* mf_check = mf_cmd->add_subcommand("check", "exhaustive check of the cancellation identities");

  // table-gen
  std::uint32_t tg_levels = 255;
  std::optional<std::uint32_t> tg_k;
  std::string tg_sigma = "1/2";
  std::uint32_t tg_bits = 64;
  std::string tg_out;
  auto* table_cmd = app.add_subcommand("table-gen", "build an exact breaking-point table");
  table_cmd->add_option("--L", tg_levels, "number of intensity levels")->capture_default_str();
  table_cmd->add_option("--k", tg_k, "clamp margin in grid steps (default 6 L)");
  table_cmd->add_option("--sigma", tg_sigma, "NUM/DEN")->capture_default_str();
  table_cmd->add_option("--bits", tg_bits, "uniform width: 8, 16, 32 or 64")->capture_default_str();
  table_cmd->add_option("--out", tg_out)->required();

  // noise-gen
  std::string ng_table;
  std::size_t ng_dimension = 0;
  std::uint64_t ng_n0 = 100;
  std::uint64_t ng_n = 100000;
  std::uint64_t ng_seed = 0;
  std::string ng_out;
  auto* noise_cmd = app.add_subcommand("noise-gen", "draw selection and estimation noise buffers from a table");
  noise_cmd->add_option("--table", ng_table)->required();
  noise_cmd->add_option("--dimension", ng_dimension)->required();
  noise_cmd->add_option("--n0", ng_n0)->capture_default_str();
  noise_cmd->add_option("--n", ng_n)->capture_default_str();
  noise_cmd->add_option("--seed", ng_seed)->capture_default_str();
  noise_cmd->add_option("--out", ng_out)->required();

  // images-gen
  std::string ig_pattern = "graded";
  std::size_t ig_count = 100;
  std::size_t ig_dimension = 64;
  std::uint32_t ig_levels = 255;
  std::uint64_t ig_seed = 0;
  std::string ig_out;
  auto* images_cmd = app.add_subcommand("images-gen", "write a synthetic QIMGSET image set");
  images_cmd->add_option("--pattern", ig_pattern)->check(CLI::IsMember({"uniform", "graded"}))->capture_default_str();
  images_cmd->add_option("--count", ig_count)->capture_default_str();
  images_cmd->add_option("--dimension", ig_dimension)->capture_default_str();
  images_cmd->add_option("--levels", ig_levels)->capture_default_str();
  images_cmd->add_option("--seed", ig_seed)->capture_default_str();
  images_cmd->add_option("--out", ig_out)->required();

  // certify
  CertifyOptions co;
  std::string co_method = "unsound";
  auto* certify_cmd = app.add_subcommand("certify", "certify every image of a set");
  certify_cmd->add_option("--method", co_method)->check(CLI::IsMember(kMethods))->capture_default_str();
  add_certify_options(certify_cmd, co);
  certify_cmd->add_option("--out", co.out, "per-image CSV (default stdout)");
  certify_cmd->add_option("--summary", co.summary, "certified-accuracy CSV");

  // compare
  CertifyOptions cmp;
  auto* compare_cmd = app.add_subcommand("compare", "run both methods and print certified accuracy per radius");
  add_certify_options(compare_cmd, cmp);
  compare_cmd->add_option("--out", cmp.out, "per-radius table (default stdout)");
  compare_cmd->add_option("--details", cmp.summary, "per-image CSV of both methods");

  // failure-bound
  std::uint32_t fb_levels = 255;
  std::optional<std::uint32_t> fb_k;
  std::string fb_sigma = "1/2";
  std::uint32_t fb_bits = 64;
  std::string fb_table;
  std::uint64_t fb_dimension = 3072;
  std::uint64_t fb_samples = 100000;
  std::optional<int> fb_exponent;
  auto* bound_cmd = app.add_subcommand("failure-bound", "probability that a sound run meets an unresolvable draw");
  bound_cmd->add_option("--L", fb_levels)->capture_default_str();
  bound_cmd->add_option("--k", fb_k, "clamp margin in grid steps (default 6 L)");
  bound_cmd->add_option("--sigma", fb_sigma)->capture_default_str();
  bound_cmd->add_option("--bits", fb_bits)->capture_default_str();
  bound_cmd->add_option("--table", fb_table, "use the exact breaking points of this table");
  bound_cmd->add_option("--dimension", fb_dimension)->capture_default_str();
  bound_cmd->add_option("--samples", fb_samples, "certifications x noise samples")->capture_default_str();
  bound_cmd->add_option("--at-most", fb_exponent, "also test per-coordinate bound <= 2^E");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*attack_cmd) {
      attack.precision = kPrecisions.at(attack_precision);
      attack.sound = attack_sound ? 1 : 0;
      return run_attack_demo(attack);
    }
    if (*theorem_cmd) {
      theorem.precision = kPrecisions.at(theorem_precision);
      theorem.sound = theorem_no_sound ? 0 : 1;
      return run_theorem_demo(theorem);
    }
    if (*mf_cmd) {
      if (*mf_check) {
        ss_identity_report r{};
        check(ss_minifloat_check_identities(&r));
        std::cout << "finite pairs                            " << r.pairs << "\n";
        std::cout << "(((x+y)-y)+y)-y != (x+y)-y              " << r.always_violations << "\n";
        std::cout << "((x+y)-y)+y != x+y                      " << r.near_violations << "\n";
        std::cout << "x+y != y+x                              " << r.commutativity_violations << "\n";
        return kExitOk;
      }
      const auto x = parse_minifloat(mf_x);
      if (*mf_decode) {
        std::cout << describe(x) << "\n";
        return kExitOk;
      }
      const auto y = parse_minifloat(mf_y);
      std::uint8_t z = 0;
      check(*mf_add ? ss_minifloat_add(x, y, &z) : ss_minifloat_sub(x, y, &z));
      std::cout << describe(x) << "\n" << (*mf_add ? "+ " : "- ") << describe(y) << "\n= " << describe(z) << "\n";
      return kExitOk;
    }
    if (*table_cmd) return run_table_gen(tg_levels, tg_k, tg_sigma, tg_bits, tg_out);
    if (*noise_cmd) {
      ss_table* t = nullptr;
      check(ss_table_read(ng_table.c_str(), &t));
      Table table(t);
      ss_noise* z = nullptr;
      check(ss_noise_build(t, ng_dimension, ng_n0, ng_n, ng_seed, &z));
      Noise noise(z);
      check(ss_noise_write(z, ng_out.c_str()));
      std::size_t d = 0;
      std::uint64_t n0 = 0;
      std::uint64_t n = 0;
      std::uint64_t breaking = 0;
      check(ss_noise_info(z, &d, &n0, &n, &breaking));
      std::cout << "wrote " << ng_out << ": d = " << d << ", n0 = " << n0 << ", n = " << n << ", " << breaking
                << " draws on a breaking point\n";
      return kExitOk;
    }
    if (*images_cmd) {
      ss_images* raw = nullptr;
      check(ss_images_generate(ig_pattern.c_str(), ig_count, ig_dimension, ig_levels, ig_seed, &raw));
      Images imgs(raw);
      check(ss_images_write(raw, ig_out.c_str()));
      std::cout << "wrote " << ig_out << ": " << ig_count << " " << ig_pattern << " images, d = " << ig_dimension
                << ", L = " << ig_levels << "\n";
      return kExitOk;
    }
    if (*certify_cmd) {
      const auto method = kMethods.at(co_method);
      auto in = load_inputs(co, method == SS_METHOD_SOUND);
      ss_results* raw = nullptr;
      check(ss_certify(in.classifier.get(), in.images.get(), method, &in.params, in.table.get(), in.noise.get(),
                       radii_ptr(co), co.radii.size(), &raw));
      Results res(raw);
      char* csv = nullptr;
      check(ss_results_csv(raw, &csv));
      emit(take_string(csv), co.out);
      if (!co.summary.empty()) {
        char* summary = nullptr;
        check(ss_results_summary_csv(raw, &summary));
        emit(take_string(summary), co.summary);
      }
      return kExitOk;
    }
    if (*compare_cmd) {
      auto in = load_inputs(cmp, true);
      ss_results* raw = nullptr;
      check(ss_compare(in.classifier.get(), in.images.get(), &in.params, in.table.get(), in.noise.get(),
                       radii_ptr(cmp), cmp.radii.size(), &raw));
      Results res(raw);
      char* table = nullptr;
      check(ss_results_summary_csv(raw, &table));
      emit(take_string(table), cmp.out);
      if (!cmp.summary.empty()) {
        char* csv = nullptr;
        check(ss_results_csv(raw, &csv));
        emit(take_string(csv), cmp.summary);
      }
      return kExitOk;
    }
    if (*bound_cmd) {
      const auto s = parse_fraction(fb_sigma);
      ss_grid_spec spec{};
      Table table;
      if (!fb_table.empty()) {
        ss_table* t = nullptr;
        check(ss_table_read(fb_table.c_str(), &t));
        table.reset(t);
        check(ss_table_spec(t, &spec));
      } else {
        check(ss_grid_spec_default(fb_levels, s.num, s.den, fb_bits, &spec));
        if (fb_k) spec.k = *fb_k;
      }
      ss_failure_bound b{};
      check(ss_failure_bound_compute(&spec, table.get(), fb_dimension, fb_samples, &b));
      std::cout << "grid: L = " << spec.levels << ", k = " << spec.k << ", sigma = " << spec.sigma_num << "/"
                << spec.sigma_den << ", n_bits = " << spec.n_bits << (table ? " (exact breaking points)" : "") << "\n";
      std::cout << "per coordinate     " << b.per_coordinate_exact << " ~ " << fmt(b.per_coordinate) << "\n";
      std::cout << "coordinates        " << b.coordinates << "\n";
      std::cout << "aggregate failure  " << fmt(b.aggregate_failure) << "\n";
      std::cout << "aggregate success  >= " << fmt(b.aggregate_success) << "\n";
      if (fb_exponent) {
        int holds = 0;
        check(ss_failure_bound_at_most_pow2(&b, 0, *fb_exponent, &holds));
        std::cout << "per coordinate <= 2^" << *fb_exponent << "  " << (holds ? "yes" : "no") << "\n";
      }
      return kExitOk;
    }
  } catch (const Failure& f) {
    std::cerr << "soundsmooth: " << f.what() << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "soundsmooth: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
