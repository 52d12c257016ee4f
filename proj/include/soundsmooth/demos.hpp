// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

// End-to-end reproductions: the one-dimensional false certificate for the
// reachability predicate, and the memorizing classifier M whose smoothed
// prediction flips under one fixed perturbation while the unsound pipeline
// certifies every anchor far beyond it.

#ifndef SOUNDSMOOTH_DEMOS_HPP
#define SOUNDSMOOTH_DEMOS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "soundsmooth/common.hpp"
#include "soundsmooth/pipeline.hpp"

namespace soundsmooth::demos {

struct AttackDemoParams {
  std::uint32_t intensity = 210;  // a = intensity / L
  std::uint32_t levels = 255;
  double sigma = 0.5;
  std::uint64_t samples = 100000;
  double alpha = 0.001;
  std::uint64_t seed = 0;
  HostPrecision precision = HostPrecision::Binary64;
  /// Also run the sound pipeline at a (table with k = 6 L).
  bool sound = false;
};

struct AttackDemoResult {
  double p_at_zero = 0.0;           // mean of F_a(0 + e)
  double p_at_anchor = 0.0;         // mean of F_a(a + e)
  double hoeffding_p = 0.0;
  double hoeffding_radius = 0.0;
  double clopper_pearson_p = 0.0;
  double clopper_pearson_radius = 0.0;
  pipeline::CertificationOutcome at_zero;    // full two-phase run at x = 0
  double distance = 0.0;                     // |a - 0|
  std::optional<pipeline::CertificationOutcome> sound_at_anchor;
};

AttackDemoResult run_attack_demo(const AttackDemoParams& params);

struct TheoremDemoParams {
  std::size_t anchors = 100;
  std::size_t dimension = 3072;
  std::uint32_t levels = 255;
  double sigma = 1.0;
  std::uint64_t n0 = 100;
  std::uint64_t samples = 1000;
  double alpha = 0.001;
  std::uint64_t seed = 0;
  HostPrecision precision = HostPrecision::Binary64;
  bool sound = true;
};

struct AnchorReport {
  int label = 0;
  int base_prediction = 0;                   // M(a)
  pipeline::CertificationOutcome unsound;    // at a
  pipeline::CertificationOutcome perturbed;  // unsound, at a + p
  std::optional<pipeline::CertificationOutcome> sound;  // at a
  bool flipped = false;                      // smoothed prediction at a + p differs from the one at a
};

struct TheoremDemoResult {
  double perturbation_norm = 0.0;
  std::vector<AnchorReport> anchors;
  bool unsound_all_at_least_2 = false;  // every anchor certified with radius >= 2
  bool all_flipped = false;
  bool sound_none_covering = false;     // no sound radius reaches perturbation_norm
  double min_unsound_radius = 0.0;
  double max_sound_radius = 0.0;        // 0 when every sound run abstains
};

TheoremDemoResult run_theorem_demo(const TheoremDemoParams& params);

}  // namespace soundsmooth::demos

#endif  // SOUNDSMOOTH_DEMOS_HPP
