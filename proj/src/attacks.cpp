// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include "soundsmooth/attacks.hpp"

#include <random>

namespace soundsmooth::attacks {

AnchorSet::AnchorSet(std::vector<QuantizedImage> images, std::vector<int> labels)
    : images_(std::move(images)), labels_(std::move(labels)) {
  if (labels_.size() != images_.size()) throw Error(ErrorKind::InvalidArgument, "AnchorSet: one label per image required");
  if (!images_.empty()) dimension_ = images_.front().dimension();
  host32_.reserve(images_.size());
  host64_.reserve(images_.size());
  for (const auto& img : images_) {
    img.validate();
    if (img.dimension() != dimension_) throw Error(ErrorKind::Dimension, "AnchorSet: images differ in dimension");
    host32_.push_back(to_host<float>(img));
    host64_.push_back(to_host<double>(img));
  }
  for (int l : labels_) {
    if (l != 0 && l != 1) throw Error(ErrorKind::InvalidArgument, "AnchorSet: labels must be 0 or 1");
  }
}

AnchorSet AnchorSet::with_label(int label) const {
  std::vector<QuantizedImage> imgs;
  std::vector<int> labels;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (labels_[i] == label) {
      imgs.push_back(images_[i]);
      labels.push_back(label);
    }
  }
  AnchorSet out(std::move(imgs), std::move(labels));
  if (out.empty()) out.dimension_ = dimension_;
  return out;
}

template <class T>
double overlap_probability(T a, T b, double sigma, std::uint64_t trials, std::uint64_t seed) {
  if (!(sigma > 0)) throw Error(ErrorKind::InvalidArgument, "overlap_probability: sigma must be positive");
  if (trials == 0) throw Error(ErrorKind::InvalidArgument, "overlap_probability: trials must be >= 1");
  std::mt19937_64 gen(seed);
  std::normal_distribution<T> noise(T(0), static_cast<T>(sigma));
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const T t = a + noise(gen);
    hits += static_cast<std::uint64_t>(predicate_fa<T>(t, b));
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

template <class T>
OverlapMinimum minimize_overlap(std::uint32_t intensity, std::uint32_t levels, double sigma,
                                std::uint64_t trials, std::uint64_t seed) {
  const T a = static_cast<T>(intensity) / static_cast<T>(levels);
  OverlapMinimum best;
  for (int j : {-2, -1, 1, 2}) {
    const T b = a + static_cast<T>(j) / static_cast<T>(levels);
    // Same noise stream for every candidate b.
    const double p = overlap_probability<T>(a, b, sigma, trials, seed);
    if (p < best.probability) {
      best.probability = p;
      best.best_shift = j;
    }
  }
  return best;
}

template double overlap_probability<float>(float, float, double, std::uint64_t, std::uint64_t);
template double overlap_probability<double>(double, double, double, std::uint64_t, std::uint64_t);
template OverlapMinimum minimize_overlap<float>(std::uint32_t, std::uint32_t, double, std::uint64_t, std::uint64_t);
template OverlapMinimum minimize_overlap<double>(std::uint32_t, std::uint32_t, double, std::uint64_t, std::uint64_t);

}  // namespace soundsmooth::attacks
