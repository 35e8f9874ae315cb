#pragma once

// Cumulative distribution transform against the uniform reference on [0, 1],
// its signed extension, and the mass-dropped feature vector used by the
// nearest-subspace classifier.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "scdtns/error.hpp"
#include "scdtns/signal.hpp"
#include "scdtns/warp.hpp"

namespace scdtns {

/// Quantile curve s*(y_k) sampled on a TransformGrid, in units of the source
/// signal's time axis.
struct CdtCurve {
  std::vector<double> values;
  TransformGrid grid;

  static CdtCurve zeros(TransformGrid grid) {
    return CdtCurve{std::vector<double>(grid.m(), 0.0), grid};
  }
};

struct SignedTransform {
  CdtCurve pos;
  CdtCurve neg;
  double pos_mass = 0.0;
  double neg_mass = 0.0;
  bool zero_pos = false;
  bool zero_neg = false;
};

/// [pos.values | neg.values], length 2m.
struct FeatureVector {
  std::vector<double> values;
  TransformGrid grid;

  std::size_t size() const noexcept { return values.size(); }
};

/// Normalized trapezoidal CDF of a nonnegative signal; front() == 0 and
/// back() == 1 exactly.
inline std::vector<double> normalized_cdf(const Signal& s) {
  const auto v = s.samples();
  std::vector<double> cdf(v.size());
  cdf[0] = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < 0.0 || v[i - 1] < 0.0)
      throw Error(ErrorCode::negative_sample, "cdt_forward: negative sample");
    cdf[i] = cdf[i - 1] + 0.5 * (v[i - 1] + v[i]);
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw Error(ErrorCode::empty_part, "cdt_forward: empty part (zero mass)");
  for (double& c : cdf) c /= total;
  cdf.back() = 1.0;
  return cdf;
}

/// s*(y) = S^{-1}(y) for the unit-mass normalization of a nonnegative signal.
///
/// S is piecewise linear between samples, so the inverse is interpolated
/// linearly inside the bracketing cell. On flat runs the leftmost t attaining
/// the level is returned. Level 0 is taken as the right limit, which pins
/// s*(0) to the left edge of the support rather than to t_min.
inline CdtCurve cdt_forward(const Signal& s, TransformGrid grid) {
  const std::vector<double> cdf = normalized_cdf(s);
  const std::size_t n = cdf.size();
  CdtCurve out{std::vector<double>(grid.m()), grid};

  std::size_t first = 1;
  while (first < n && cdf[first] <= 0.0) ++first;
  out.values[0] = s.time(first - 1);

  std::size_t i = 1;
  for (std::size_t k = 1; k < grid.m(); ++k) {
    const double y = grid.y(k);
    while (cdf[i] < y) ++i;  // terminates: cdf.back() == 1 >= y
    const double lo = s.time(i - 1);
    const double hi = s.time(i);
    const double frac = (y - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
    out.values[k] = std::clamp(lo + frac * (hi - lo), lo, hi);
  }
  return out;
}

/// Recovers the unit-mass density whose transform is `c`, on n uniform points
/// over [t_min, t_max]. Validation helper only; not used by the classifier.
inline Signal cdt_inverse(const CdtCurve& c, double t_min, double t_max, std::size_t n) {
  const auto& v = c.values;
  if (v.size() != c.grid.m())
    throw Error(ErrorCode::dimension_mismatch, "cdt_inverse: curve length does not match grid");
  std::vector<double> xs, ys;
  xs.reserve(v.size());
  ys.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k > 0 && v[k] < v[k - 1])
      throw Error(ErrorCode::non_monotone, "cdt_inverse: curve is not nondecreasing");
    if (!xs.empty() && v[k] == xs.back()) continue;
    xs.push_back(v[k]);
    ys.push_back(c.grid.y(k));
  }
  if (xs.size() < 2) throw Error(ErrorCode::degenerate, "cdt_inverse: constant curve");

  const double tol = 1e-9 * (xs.back() - xs.front());
  if (t_min < xs.front() - tol || t_max > xs.back() + tol || !(t_min < t_max) || n < 2)
    throw Error(ErrorCode::invalid_argument,
                "cdt_inverse: target grid outside the curve's range");

  auto level_at = [&](double t) {
    if (t <= xs.front()) return ys.front();
    if (t >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), t);
    const auto j = static_cast<std::size_t>(it - xs.begin());
    const double frac = (t - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + frac * (ys[j] - ys[j - 1]);
  };

  std::vector<double> level(n);
  for (std::size_t i = 0; i < n; ++i) level[i] = level_at(Signal::grid_point(t_min, t_max, n, i));

  const double h = (t_max - t_min) / static_cast<double>(n - 1);
  std::vector<double> density(n);
  density[0] = (level[1] - level[0]) / h;
  density[n - 1] = (level[n - 1] - level[n - 2]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) density[i] = (level[i + 1] - level[i - 1]) / (2.0 * h);
  return Signal(std::move(density), t_min, t_max);
}

inline SignedTransform scdt_forward(const Signal& s, TransformGrid grid) {
  const auto [plus, minus] = decompose(s);
  SignedTransform st{CdtCurve::zeros(grid), CdtCurve::zeros(grid)};

  st.pos_mass = l1_mass(plus);
  if (st.pos_mass > 0.0)
    st.pos = cdt_forward(plus, grid);
  else
    st.zero_pos = true, st.pos_mass = 0.0;

  st.neg_mass = l1_mass(minus);
  if (st.neg_mass > 0.0)
    st.neg = cdt_forward(minus, grid);
  else
    st.zero_neg = true, st.neg_mass = 0.0;
  return st;
}

inline FeatureVector feature_vector(const SignedTransform& st) {
  const std::size_t m = st.pos.grid.m();
  if (st.neg.grid.m() != m)
    throw Error(ErrorCode::dimension_mismatch, "feature_vector: part grids differ");
  FeatureVector f{std::vector<double>(2 * m, 0.0), st.pos.grid};
  if (!st.zero_pos) std::copy(st.pos.values.begin(), st.pos.values.end(), f.values.begin());
  if (!st.zero_neg)
    std::copy(st.neg.values.begin(), st.neg.values.end(), f.values.begin() + static_cast<std::ptrdiff_t>(m));
  return f;
}

/// Mass-preserving warp s_g(t) = g'(t) * s(g(t)); s reads as zero outside its
/// domain.
inline Signal apply_warp(const Signal& s, const WarpPolynomial& g) {
  if (!g.increasing_on(s.t_min(), s.t_max()))
    throw Error(ErrorCode::non_increasing_warp, "apply_warp: warp is not strictly increasing");
  if (g.coeffs == WarpPolynomial::identity().coeffs) return s;
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double t = s.time(i);
    out[i] = g.derivative(t) * s.at(g(t));
  }
  return Signal(std::move(out), s.t_min(), s.t_max());
}

}  // namespace scdtns
