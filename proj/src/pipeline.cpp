// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include "soundsmooth/pipeline.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "soundsmooth/stats.hpp"

namespace soundsmooth::pipeline {
namespace {

using Counts = std::array<std::uint64_t, 2>;

int checked_class(int c) {
  if (c != 0 && c != 1) throw Error(ErrorKind::Domain, "classifier returned a class other than 0 or 1");
  return c;
}

// Candidate selection: the majority class, ties to class 0.
int select_candidate(const Counts& c) { return c[1] > c[0] ? 1 : 0; }

CertificationOutcome finish(int candidate, const Counts& counts, std::uint64_t failures, std::uint64_t n,
                            double sigma, const CertifyParams& params) {
  CertificationOutcome out;
  out.count0 = counts[0];
  out.count1 = counts[1];
  out.failures = failures;
  out.sigma = sigma;
  out.alpha = params.alpha;
  out.n = n;
  stats::ConfidenceSpec spec{params.alpha, n, counts[static_cast<std::size_t>(candidate)]};
  out.p_lower = params.bound == BoundKind::Hoeffding ? stats::hoeffding_lower(spec) : stats::clopper_pearson_lower(spec);
  out.radius = stats::certified_radius(out.p_lower, sigma);
  out.prediction = out.radius ? candidate : kAbstain;
  return out;
}

template <class T>
Counts unsound_counts(const Classifier& f, std::span<const T> x, T sigma, std::uint64_t samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<T> noise(T(0), sigma);
  std::vector<T> y(x.size());
  Counts counts{};
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + noise(gen);
    ++counts[static_cast<std::size_t>(checked_class(f.classify(std::span<const T>(y))))];
  }
  return counts;
}

template <class T>
std::vector<T> grid_values(const tables::GridSpec& spec) {
  std::vector<T> out(static_cast<std::size_t>(spec.clamp_high() - spec.clamp_low() + 1));
  const T levels = static_cast<T>(spec.levels);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<T>(spec.clamp_low() + static_cast<std::int64_t>(i)) / levels;
  }
  return out;
}

struct SoundCounts {
  Counts counts{};
  std::uint64_t failures = 0;
};

template <class T>
SoundCounts sound_counts(const Classifier& f, const QuantizedImage& x, const sampler::NoiseBuffer& buffer) {
  const auto& spec = buffer.spec();
  const std::vector<T> grid = grid_values<T>(spec);
  std::vector<std::int64_t> g(x.dimension());
  std::vector<T> y(x.dimension());
  SoundCounts out;
  for (std::size_t s = 0; s < buffer.samples(); ++s) {
    if (!buffer.apply(s, x.pixels, g)) {
      ++out.failures;
      continue;
    }
    for (std::size_t i = 0; i < g.size(); ++i) y[i] = grid[static_cast<std::size_t>(g[i] - spec.clamp_low())];
    ++out.counts[static_cast<std::size_t>(checked_class(f.classify(std::span<const T>(y))))];
  }
  return out;
}

template <class T>
int reference_label(const Classifier& f, const QuantizedImage& x) {
  const auto host = to_host<T>(x);
  return checked_class(f.classify(std::span<const T>(host)));
}

void check_dimension(const Classifier& f, std::size_t d) {
  if (f.dimension() != 0 && f.dimension() != d) throw Error(ErrorKind::Dimension, "classifier expects a different dimension");
}

}  // namespace

std::string_view to_string(Method m) noexcept { return m == Method::Sound ? "sound" : "unsound"; }

Method parse_method(std::string_view text) {
  if (text == "sound") return Method::Sound;
  if (text == "unsound") return Method::Unsound;
  throw Error(ErrorKind::InvalidArgument, "unknown method '" + std::string(text) + "'");
}

std::string_view to_string(BoundKind b) noexcept { return b == BoundKind::Hoeffding ? "hoeffding" : "clopper-pearson"; }

BoundKind parse_bound(std::string_view text) {
  if (text == "clopper-pearson" || text == "cp") return BoundKind::ClopperPearson;
  if (text == "hoeffding") return BoundKind::Hoeffding;
  throw Error(ErrorKind::InvalidArgument, "unknown bound '" + std::string(text) + "'");
}

void CertifyParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::InvalidArgument, "sigma must be positive");
  if (n0 == 0 || n == 0) throw Error(ErrorKind::InvalidArgument, "n0 and n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
}

template <class T>
CertificationOutcome certify_unsound(const Classifier& f, std::span<const T> x, const CertifyParams& params,
                                     std::uint64_t stream_seed) {
  params.validate();
  check_dimension(f, x.size());
  const T sigma = static_cast<T>(params.sigma);
  const Counts selection = unsound_counts<T>(f, x, sigma, params.n0, mix_seed(stream_seed, 0));
  const int candidate = select_candidate(selection);
  const Counts estimation = unsound_counts<T>(f, x, sigma, params.n, mix_seed(stream_seed, 1));
  CertificationOutcome out = finish(candidate, estimation, 0, params.n, params.sigma, params);
  out.method = Method::Unsound;
  out.n0 = params.n0;
  return out;
}

template CertificationOutcome certify_unsound<float>(const Classifier&, std::span<const float>, const CertifyParams&,
                                                     std::uint64_t);
template CertificationOutcome certify_unsound<double>(const Classifier&, std::span<const double>, const CertifyParams&,
                                                      std::uint64_t);

CertificationOutcome certify_unsound(const Classifier& f, const QuantizedImage& x, const CertifyParams& params,
                                     std::size_t index) {
  x.validate();
  const std::uint64_t stream = mix_seed(params.seed, index);
  CertificationOutcome out;
  if (params.precision == HostPrecision::Binary32) {
    const auto host = to_host<float>(x);
    out = certify_unsound<float>(f, std::span<const float>(host), params, stream);
  } else {
    const auto host = to_host<double>(x);
    out = certify_unsound<double>(f, std::span<const double>(host), params, stream);
  }
  out.index = index;
  return out;
}

void SoundContext::validate() const {
  table.validate();
  if (!(selection.spec() == table.spec()) || !(estimation.spec() == table.spec())) {
    throw Error(ErrorKind::SpecMismatch, "noise buffers were drawn from a different grid spec");
  }
  if (selection.dimension() != estimation.dimension()) {
    throw Error(ErrorKind::Dimension, "selection and estimation buffers differ in dimension");
  }
}

SoundContext make_sound_context(tables::BreakingPointTable table, std::size_t dimension, std::uint64_t n0,
                                std::uint64_t n, std::uint64_t seed) {
  SoundContext ctx;
  ctx.selection = sampler::build_noise_buffer(table, dimension, n0, seed, 0);
  ctx.estimation = sampler::build_noise_buffer(table, dimension, n, seed, 1);
  ctx.table = std::move(table);
  return ctx;
}

CertificationOutcome certify_sound(const Classifier& f, const QuantizedImage& x, const SoundContext& context,
                                   const CertifyParams& params, std::size_t index) {
  params.validate();
  context.validate();
  x.validate();
  const auto& spec = context.table.spec();
  if (x.levels != spec.levels) throw Error(ErrorKind::SpecMismatch, "image grid differs from the table's L");
  if (x.dimension() != context.estimation.dimension()) throw Error(ErrorKind::Dimension, "image and noise buffers differ in dimension");
  check_dimension(f, x.dimension());
  const double sigma = spec.sigma().convert_to<double>();
  if (std::fabs(sigma - params.sigma) > 1e-12 * sigma) {
    throw Error(ErrorKind::SpecMismatch, "sigma differs from the table's sigma");
  }
  const bool single = params.precision == HostPrecision::Binary32;
  const SoundCounts selection =
      single ? sound_counts<float>(f, x, context.selection) : sound_counts<double>(f, x, context.selection);
  const int candidate = select_candidate(selection.counts);
  const SoundCounts estimation =
      single ? sound_counts<float>(f, x, context.estimation) : sound_counts<double>(f, x, context.estimation);
  // Unresolved samples never vote for the candidate: successes stay
  // counts[candidate] out of the full n.
  CertificationOutcome out =
      finish(candidate, estimation.counts, estimation.failures, context.estimation.samples(), sigma, params);
  out.method = Method::Sound;
  out.n0 = context.selection.samples();
  out.index = index;
  return out;
}

const std::vector<double>& default_radius_grid() {
  static const std::vector<double> grid{0.0, 0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0};
  return grid;
}

std::vector<SummaryRow> summarize(const std::vector<CertificationOutcome>& outcomes, const std::vector<int>& reference,
                                  const std::vector<double>& radii) {
  if (reference.size() != outcomes.size()) throw Error(ErrorKind::InvalidArgument, "summary: one reference label per outcome");
  std::vector<SummaryRow> rows;
  for (double r : radii) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      if (!o.abstained() && o.prediction == reference[i] && *o.radius >= r) ++hits;
    }
    rows.push_back({r, outcomes.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(outcomes.size())});
  }
  return rows;
}

DatasetResult run_dataset(const images::ImageSet& set, const Classifier& f, Method method, const CertifyParams& params,
                          const SoundContext* context, const std::vector<double>& radii) {
  set.validate();
  params.validate();
  DatasetResult result;
  if (set.images.empty()) {
    result.summary = summarize({}, {}, radii);
    return result;
  }
  check_dimension(f, set.dimension);
  std::optional<SoundContext> own;
  if (method == Method::Sound && context == nullptr) {
    const auto ratio = tables::Rational(params.sigma);  // exact binary value of sigma
    const auto num = boost::multiprecision::numerator(ratio);
    const auto den = boost::multiprecision::denominator(ratio);
    if (num > std::numeric_limits<std::uint64_t>::max() || den > std::numeric_limits<std::uint64_t>::max()) {
      throw Error(ErrorKind::InvalidArgument, "sigma is not representable as a 64-bit fraction");
    }
    const auto spec = tables::default_spec(set.levels, num.convert_to<std::uint64_t>(), den.convert_to<std::uint64_t>());
    own = make_sound_context(tables::build_table(spec), set.dimension, params.n0, params.n, params.seed);
    context = &*own;
  }
  for (std::size_t i = 0; i < set.images.size(); ++i) {
    const auto& img = set.images[i];
    result.reference.push_back(params.precision == HostPrecision::Binary32 ? reference_label<float>(f, img)
                                                                           : reference_label<double>(f, img));
    result.outcomes.push_back(method == Method::Sound ? certify_sound(f, img, *context, params, i)
                                                      : certify_unsound(f, img, params, i));
  }
  result.summary = summarize(result.outcomes, result.reference, radii);
  return result;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string emit_csv(const std::vector<CertificationOutcome>& outcomes) {
  std::string out = "index,prediction,p_lower,radius,count0,count1,failures,method,sigma,alpha\n";
  for (const auto& o : outcomes) {
    out += std::to_string(o.index);
    out += ',';
    out += o.abstained() ? std::string("abstain") : std::to_string(o.prediction);
    out += ',' + format_double(o.p_lower) + ',';
    if (o.radius) out += format_double(*o.radius);
    out += ',' + std::to_string(o.count0) + ',' + std::to_string(o.count1) + ',' + std::to_string(o.failures);
    out += ',' + std::string(to_string(o.method));
    out += ',' + format_double(o.sigma) + ',' + format_double(o.alpha) + '\n';
  }
  return out;
}

namespace {

template <class N>
N csv_number(std::string_view s, std::size_t line) {
  N v{};
  if (s == "inf" && std::is_floating_point_v<N>) return std::numeric_limits<N>::infinity();
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Format, "csv line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<CertificationOutcome> parse_csv(std::string_view text) {
  std::vector<CertificationOutcome> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != "index,prediction,p_lower,radius,count0,count1,failures,method,sigma,alpha") {
        throw Error(ErrorKind::Format, "csv: unexpected header");
      }
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 10) throw Error(ErrorKind::Format, "csv line " + std::to_string(line_no) + ": expected 10 fields");
    CertificationOutcome o;
    o.index = csv_number<std::size_t>(f[0], line_no);
    o.prediction = f[1] == "abstain" ? kAbstain : csv_number<int>(f[1], line_no);
    o.p_lower = csv_number<double>(f[2], line_no);
    if (!f[3].empty()) o.radius = csv_number<double>(f[3], line_no);
    if (o.abstained() == o.radius.has_value()) {
      throw Error(ErrorKind::Format, "csv line " + std::to_string(line_no) + ": radius must be empty exactly for abstentions");
    }
    o.count0 = csv_number<std::uint64_t>(f[4], line_no);
    o.count1 = csv_number<std::uint64_t>(f[5], line_no);
    o.failures = csv_number<std::uint64_t>(f[6], line_no);
    o.method = parse_method(f[7]);
    o.sigma = csv_number<double>(f[8], line_no);
    o.alpha = csv_number<double>(f[9], line_no);
    o.n = o.count0 + o.count1 + o.failures;
    out.push_back(o);
  }
  return out;
}

Comparison compare(const images::ImageSet& set, const Classifier& f, const CertifyParams& params,
                   const SoundContext* context, const std::vector<double>& radii) {
  Comparison c;
  c.unsound = run_dataset(set, f, Method::Unsound, params, nullptr, radii);
  c.sound = run_dataset(set, f, Method::Sound, params, context, radii);
  return c;
}

std::string emit_comparison(const Comparison& c) {
  std::string out = "radius,unsound,sound\n";
  for (std::size_t i = 0; i < c.unsound.summary.size(); ++i) {
    out += format_double(c.unsound.summary[i].radius) + ',' + format_double(c.unsound.summary[i].certified_accuracy) +
           ',' + format_double(c.sound.summary[i].certified_accuracy) + '\n';
  }
  return out;
}

}  // namespace soundsmooth::pipeline
