#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scdtns/error.hpp"

namespace scdtns {

/// Uniformly sampled real 1D signal on [t_min, t_max]. Sample i sits at
/// t_min + i * (t_max - t_min) / (n - 1).
class Signal {
 public:
  Signal(std::vector<double> samples, double t_min, double t_max)
      : samples_(std::move(samples)), t_min_(t_min), t_max_(t_max) {
    if (samples_.size() < 2)
      throw Error(ErrorCode::invalid_argument, "signal needs at least 2 samples");
    if (!std::isfinite(t_min_) || !std::isfinite(t_max_) || !(t_min_ < t_max_))
      throw Error(ErrorCode::invalid_argument, "signal domain requires t_min < t_max");
    for (double v : samples_)
      if (!std::isfinite(v))
        throw Error(ErrorCode::invalid_argument, "signal samples must be finite");
  }

  /// Samples `fn` on the uniform grid of n points over [t_min, t_max].
  template <typename Fn>
  static Signal sampled(Fn&& fn, double t_min, double t_max, std::size_t n) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "signal needs at least 2 samples");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = fn(grid_point(t_min, t_max, n, i));
    return Signal(std::move(v), t_min, t_max);
  }

  static double grid_point(double t_min, double t_max, std::size_t n, std::size_t i) {
    if (i + 1 == n) return t_max;
    return t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(n - 1);
  }

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }
  double t_min() const noexcept { return t_min_; }
  double t_max() const noexcept { return t_max_; }
  double step() const noexcept {
    return (t_max_ - t_min_) / static_cast<double>(samples_.size() - 1);
  }
  double time(std::size_t i) const { return grid_point(t_min_, t_max_, samples_.size(), i); }

  /// Linear interpolation; zero outside the domain.
  double at(double t) const {
    if (t < t_min_ || t > t_max_) return 0.0;
    const double pos = (t - t_min_) / step();
    auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= samples_.size()) return samples_.back();
    const double frac = pos - static_cast<double>(i);
    return samples_[i] + frac * (samples_[i + 1] - samples_[i]);
  }

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
  double t_min_;
  double t_max_;
};

/// Uniform reference grid y_k = k / (m - 1) on [0, 1].
class TransformGrid {
 public:
  explicit TransformGrid(std::size_t m) : m_(m) {
    if (m_ < 2) throw Error(ErrorCode::invalid_argument, "transform grid needs m >= 2");
  }

  std::size_t m() const noexcept { return m_; }
  double y(std::size_t k) const {
    if (k + 1 == m_) return 1.0;
    return static_cast<double>(k) / static_cast<double>(m_ - 1);
  }

  friend bool operator==(const TransformGrid&, const TransformGrid&) = default;

 private:
  std::size_t m_;
};

/// Splits s into (s+, s-) with s = s+ - s-, both nonnegative.
inline std::pair<Signal, Signal> decompose(const Signal& s) {
  std::vector<double> pos(s.size()), neg(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    pos[i] = std::max(s[i], 0.0);
    neg[i] = std::max(-s[i], 0.0);
  }
  return {Signal(std::move(pos), s.t_min(), s.t_max()),
          Signal(std::move(neg), s.t_min(), s.t_max())};
}

inline Signal remove_mean(const Signal& s) {
  const auto v = s.samples();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x -= mean;
  return Signal(std::move(out), s.t_min(), s.t_max());
}

/// Trapezoidal integral of a nonnegative signal.
inline double l1_mass(const Signal& s) {
  const auto v = s.samples();
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0)
      throw Error(ErrorCode::negative_sample,
                  "l1_mass: negative sample at index " + std::to_string(i) +
                      "; decompose the signal first");
    const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
    acc += w * v[i];
  }
  return acc * s.step();
}

inline Signal scaled(const Signal& s, double alpha) {
  std::vector<double> out(s.samples().begin(), s.samples().end());
  for (double& x : out) x *= alpha;
  return Signal(std::move(out), s.t_min(), s.t_max());
}

/// Linear resampling onto n uniform points over the same domain.
inline Signal resample(const Signal& s, std::size_t n) {
  if (n == s.size()) return s;
  return Signal::sampled([&](double t) { return s.at(t); }, s.t_min(), s.t_max(), n);
}

}  // namespace scdtns
