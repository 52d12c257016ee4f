// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include "soundsmooth/classifiers.hpp"

#include <charconv>
#include <cmath>
#include <type_traits>
#include <vector>

#include "soundsmooth/images.hpp"

namespace soundsmooth {
namespace {

// Routes both precisions to one templated eval<T>.
template <class Derived>
class Dispatch : public Classifier {
 public:
  int classify(std::span<const float> x) const override { return self().template eval<float>(x); }
  int classify(std::span<const double> x) const override { return self().template eval<double>(x); }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

class Constant final : public Dispatch<Constant> {
 public:
  explicit Constant(int c) : c_(c) {}
  template <class T>
  int eval(std::span<const T>) const {
    return c_;
  }
  std::string describe() const override { return "constant:" + std::to_string(c_); }

 private:
  int c_;
};

class Fa final : public Dispatch<Fa> {
 public:
  Fa(std::uint32_t intensity, std::uint32_t levels, std::size_t coordinate)
      : intensity_(intensity),
        coordinate_(coordinate),
        a32_(static_cast<float>(intensity) / static_cast<float>(levels)),
        a64_(static_cast<double>(intensity) / static_cast<double>(levels)) {}

  template <class T>
  int eval(std::span<const T> x) const {
    if (coordinate_ >= x.size()) throw Error(ErrorKind::Dimension, "fa: coordinate outside input");
    if constexpr (std::is_same_v<T, float>) {
      return attacks::predicate_fa<float>(x[coordinate_], a32_);
    } else {
      return attacks::predicate_fa<double>(x[coordinate_], a64_);
    }
  }
  std::string describe() const override {
    return "fai:" + std::to_string(coordinate_) + ":" + std::to_string(intensity_);
  }

 private:
  std::uint32_t intensity_;
  std::size_t coordinate_;
  float a32_;
  double a64_;
};

class Ga final : public Dispatch<Ga> {
 public:
  explicit Ga(const QuantizedImage& anchor) : a32_(to_host<float>(anchor)), a64_(to_host<double>(anchor)) {
    anchor.validate();
  }
  template <class T>
  int eval(std::span<const T> x) const {
    if constexpr (std::is_same_v<T, float>) {
      return attacks::predicate_ga<float>(x, a32_);
    } else {
      return attacks::predicate_ga<double>(x, a64_);
    }
  }
  std::size_t dimension() const override { return a64_.size(); }
  std::string describe() const override { return "ga"; }

 private:
  std::vector<float> a32_;
  std::vector<double> a64_;
};

class Ha final : public Dispatch<Ha> {
 public:
  explicit Ha(attacks::AnchorSet anchors) : anchors_(std::move(anchors)) {}
  template <class T>
  int eval(std::span<const T> x) const {
    return attacks::classifier_ha<T>(x, anchors_);
  }
  std::size_t dimension() const override { return anchors_.dimension(); }
  std::string describe() const override { return "ha(" + std::to_string(anchors_.size()) + " anchors)"; }

 private:
  attacks::AnchorSet anchors_;
};

class M final : public Dispatch<M> {
 public:
  M(attacks::AnchorSet class0, attacks::AnchorSet class1, std::uint32_t levels)
      : class0_(std::move(class0)), class1_(std::move(class1)), levels_(levels) {
    if (!class0_.empty() && !class1_.empty() && class0_.dimension() != class1_.dimension()) {
      throw Error(ErrorKind::Dimension, "m: anchor sets differ in dimension");
    }
  }
  template <class T>
  int eval(std::span<const T> x) const {
    return attacks::classifier_m<T>(x, class0_, class1_, levels_);
  }
  std::size_t dimension() const override {
    return class1_.empty() ? class0_.dimension() : class1_.dimension();
  }
  std::string describe() const override {
    return "m(" + std::to_string(class0_.size()) + "+" + std::to_string(class1_.size()) + " anchors)";
  }

 private:
  attacks::AnchorSet class0_;
  attacks::AnchorSet class1_;
  std::uint32_t levels_;
};

class Threshold final : public Dispatch<Threshold> {
 public:
  explicit Threshold(double theta) : theta_(theta) {}
  template <class T>
  int eval(std::span<const T> x) const {
    if (x.empty()) throw Error(ErrorKind::Dimension, "threshold: empty input");
    T sum = 0;
    for (T v : x) sum += v;
    return sum / static_cast<T>(x.size()) > static_cast<T>(theta_) ? 1 : 0;
  }
  std::string describe() const override {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, theta_);
    return "threshold:" + std::string(buf, r.ptr);
  }

 private:
  double theta_;
};

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <class N>
N parse_number(std::string_view s, std::string_view what) {
  N value{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), value);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::InvalidArgument, "classifier: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return value;
}

std::uint32_t parse_intensity(std::string_view s, std::uint32_t levels) {
  const auto v = parse_number<std::uint32_t>(s, "intensity");
  if (v > levels) throw Error(ErrorKind::InvalidArgument, "classifier: intensity exceeds L");
  return v;
}

}  // namespace

ClassifierPtr make_constant(int c) {
  if (c != 0 && c != 1) throw Error(ErrorKind::InvalidArgument, "constant classifier: class must be 0 or 1");
  return std::make_shared<Constant>(c);
}

ClassifierPtr make_fa(std::uint32_t intensity, std::uint32_t levels, std::size_t coordinate) {
  if (levels == 0 || intensity > levels) throw Error(ErrorKind::InvalidArgument, "fa: intensity outside 0..L");
  return std::make_shared<Fa>(intensity, levels, coordinate);
}

ClassifierPtr make_ga(const QuantizedImage& anchor) { return std::make_shared<Ga>(anchor); }

ClassifierPtr make_ha(attacks::AnchorSet anchors) { return std::make_shared<Ha>(std::move(anchors)); }

ClassifierPtr make_m(attacks::AnchorSet class0, attacks::AnchorSet class1, std::uint32_t levels) {
  return std::make_shared<M>(std::move(class0), std::move(class1), levels);
}

ClassifierPtr make_threshold(double theta) {
  if (!std::isfinite(theta)) throw Error(ErrorKind::InvalidArgument, "threshold: theta must be finite");
  return std::make_shared<Threshold>(theta);
}

ClassifierPtr parse_classifier(std::string_view text, std::uint32_t levels) {
  const auto parts = split(text, ':');
  const std::string_view kind = parts[0];
  auto want = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) {
      throw Error(ErrorKind::InvalidArgument, "classifier: wrong number of fields in '" + std::string(text) + "'");
    }
  };
  if (kind == "constant") {
    want(2, 2);
    return make_constant(parse_number<int>(parts[1], "class"));
  }
  if (kind == "fa") {
    want(2, 2);
    return make_fa(parse_intensity(parts[1], levels), levels, 0);
  }
  if (kind == "fai") {
    want(3, 3);
    return make_fa(parse_intensity(parts[2], levels), levels, parse_number<std::size_t>(parts[1], "coordinate"));
  }
  if (kind == "threshold") {
    want(2, 2);
    return make_threshold(parse_number<double>(parts[1], "threshold"));
  }
  if (kind == "ga" || kind == "ha" || kind == "m") {
    want(2, kind == "ga" ? 3 : 2);
    const auto set = images::read_images(std::string(parts[1]));
    if (set.levels != levels) throw Error(ErrorKind::InvalidArgument, "classifier: anchor file uses a different L");
    if (kind == "ga") {
      const std::size_t index = parts.size() == 3 ? parse_number<std::size_t>(parts[2], "index") : 0;
      if (index >= set.images.size()) throw Error(ErrorKind::InvalidArgument, "classifier: anchor index out of range");
      return make_ga(set.images[index]);
    }
    std::vector<int> labels(set.images.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 2);
    attacks::AnchorSet anchors(set.images, labels);
    if (kind == "ha") return make_ha(std::move(anchors));
    return make_m(anchors.with_label(0), anchors.with_label(1), levels);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown classifier '" + std::string(text) + "'");
}

}  // namespace soundsmooth
