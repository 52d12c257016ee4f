// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include "soundsmooth/demos.hpp"

#include <algorithm>
#include <limits>

#include "soundsmooth/attacks.hpp"
#include "soundsmooth/classifiers.hpp"
#include "soundsmooth/images.hpp"
#include "soundsmooth/stats.hpp"

namespace soundsmooth::demos {
namespace {

tables::GridSpec spec_for_sigma(std::uint32_t levels, double sigma) {
  const tables::Rational exact(sigma);
  return tables::default_spec(levels, boost::multiprecision::numerator(exact).convert_to<std::uint64_t>(),
                              boost::multiprecision::denominator(exact).convert_to<std::uint64_t>());
}

template <class T>
void run_anchors(const TheoremDemoParams& params, const images::ImageSet& set, const std::vector<int>& labels,
                 const Classifier& m, const pipeline::SoundContext* sound, TheoremDemoResult& result) {
  pipeline::CertifyParams cp;
  cp.sigma = params.sigma;
  cp.n0 = params.n0;
  cp.n = params.samples;
  cp.alpha = params.alpha;
  cp.precision = params.precision;
  cp.seed = params.seed;

  const auto up = attacks::universal_perturbation<T>(params.dimension, +1, params.levels);
  const auto down = attacks::universal_perturbation<T>(params.dimension, -1, params.levels);
  result.perturbation_norm = attacks::l2_norm<T>(std::span<const T>(up));

  for (std::size_t i = 0; i < set.images.size(); ++i) {
    AnchorReport r;
    r.label = labels[i];
    const auto a = to_host<T>(set.images[i]);
    // Class-0 anchors are pushed up past the threshold, class-1 anchors down.
    const auto& p = r.label == 0 ? up : down;
    const auto moved = attacks::perturb<T>(std::span<const T>(a), std::span<const T>(p));
    r.base_prediction = m.classify(std::span<const T>(a));
    r.unsound = pipeline::certify_unsound<T>(m, std::span<const T>(a), cp, mix_seed(params.seed, 2 * i));
    r.unsound.index = i;
    r.perturbed = pipeline::certify_unsound<T>(m, std::span<const T>(moved), cp, mix_seed(params.seed, 2 * i + 1));
    r.perturbed.index = i;
    r.flipped = !r.unsound.abstained() && !r.perturbed.abstained() && r.unsound.prediction != r.perturbed.prediction;
    if (sound != nullptr) r.sound = pipeline::certify_sound(m, set.images[i], *sound, cp, i);
    result.anchors.push_back(std::move(r));
  }
}

}  // namespace

AttackDemoResult run_attack_demo(const AttackDemoParams& params) {
  if (params.intensity > params.levels) throw Error(ErrorKind::InvalidArgument, "attack demo: intensity exceeds L");
  const auto f = make_fa(params.intensity, params.levels);
  pipeline::CertifyParams cp;
  cp.sigma = params.sigma;
  cp.n0 = std::min<std::uint64_t>(params.samples, 100);
  cp.n = params.samples;
  cp.alpha = params.alpha;
  cp.precision = params.precision;
  cp.seed = params.seed;
  cp.bound = pipeline::BoundKind::Hoeffding;

  const QuantizedImage anchor{{params.intensity}, params.levels};
  const QuantizedImage zero{{0}, params.levels};

  AttackDemoResult r;
  const auto at_anchor = pipeline::certify_unsound(*f, anchor, cp, 0);
  r.p_at_anchor = static_cast<double>(at_anchor.count1) / static_cast<double>(params.samples);
  r.hoeffding_p = stats::hoeffding_lower({params.alpha, params.samples, at_anchor.count1});
  r.clopper_pearson_p = stats::clopper_pearson_lower({params.alpha, params.samples, at_anchor.count1});
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  r.hoeffding_radius = stats::certified_radius(r.hoeffding_p, params.sigma).value_or(nan);
  r.clopper_pearson_radius = stats::certified_radius(r.clopper_pearson_p, params.sigma).value_or(nan);

  cp.bound = pipeline::BoundKind::ClopperPearson;
  r.at_zero = pipeline::certify_unsound(*f, zero, cp, 1);
  r.p_at_zero = static_cast<double>(r.at_zero.count1) / static_cast<double>(params.samples);
  r.distance = static_cast<double>(params.intensity) / params.levels;

  if (params.sound) {
    const auto table = tables::build_table(spec_for_sigma(params.levels, params.sigma));
    const auto ctx = pipeline::make_sound_context(table, 1, cp.n0, cp.n, params.seed);
    r.sound_at_anchor = pipeline::certify_sound(*f, anchor, ctx, cp, 0);
  }
  return r;
}

TheoremDemoResult run_theorem_demo(const TheoremDemoParams& params) {
  if (params.anchors == 0 || params.dimension == 0) throw Error(ErrorKind::InvalidArgument, "theorem demo: need anchors and d >= 1");
  const auto set = images::generate(images::Pattern::Uniform, params.anchors, params.dimension, params.levels, params.seed);
  std::vector<int> labels(set.images.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 2);
  const attacks::AnchorSet all(set.images, labels);
  const auto m = make_m(all.with_label(0), all.with_label(1), params.levels);

  std::optional<pipeline::SoundContext> sound;
  if (params.sound) {
    sound = pipeline::make_sound_context(tables::build_table(spec_for_sigma(params.levels, params.sigma)),
                                         params.dimension, params.n0, params.samples, params.seed);
  }

  TheoremDemoResult result;
  if (params.precision == HostPrecision::Binary32) {
    run_anchors<float>(params, set, labels, *m, sound ? &*sound : nullptr, result);
  } else {
    run_anchors<double>(params, set, labels, *m, sound ? &*sound : nullptr, result);
  }

  result.unsound_all_at_least_2 = true;
  result.all_flipped = true;
  result.sound_none_covering = true;
  result.min_unsound_radius = std::numeric_limits<double>::infinity();
  for (const auto& a : result.anchors) {
    const double ru = a.unsound.radius.value_or(0.0);
    result.min_unsound_radius = std::min(result.min_unsound_radius, ru);
    result.unsound_all_at_least_2 = result.unsound_all_at_least_2 && ru >= 2.0 && a.unsound.prediction == a.label;
    result.all_flipped = result.all_flipped && a.flipped;
    if (a.sound) {
      const double rs = a.sound->radius.value_or(0.0);
      result.max_sound_radius = std::max(result.max_sound_radius, rs);
      result.sound_none_covering = result.sound_none_covering && rs < result.perturbation_norm;
    }
  }
  return result;
}

}  // namespace soundsmooth::demos
