#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "scdtns/error.hpp"

namespace scdtns {

/// Quartic time warp g(t) = sum_k coeffs[k] * t^k on [t_min, t_max].
struct WarpPolynomial {
  static constexpr std::size_t kDegree = 4;
  static constexpr std::size_t kCheckPoints = 1000;

  std::array<double, kDegree + 1> coeffs{0.0, 1.0, 0.0, 0.0, 0.0};
  double t_min = 0.0;
  double t_max = 1.0;

  static WarpPolynomial identity(double t_min = 0.0, double t_max = 1.0) {
    return WarpPolynomial{{0.0, 1.0, 0.0, 0.0, 0.0}, t_min, t_max};
  }

  /// g(t) = scale * t - shift
  static WarpPolynomial affine(double scale, double shift, double t_min = 0.0,
                               double t_max = 1.0) {
    return WarpPolynomial{{-shift, scale, 0.0, 0.0, 0.0}, t_min, t_max};
  }

  double operator()(double t) const {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
    return acc;
  }

  double derivative(double t) const {
    double acc = 0.0;
    for (std::size_t k = coeffs.size() - 1; k >= 1; --k)
      acc = acc * t + static_cast<double>(k) * coeffs[k];
    return acc;
  }

  /// g' > 0 on a kCheckPoints uniform grid over [lo, hi].
  bool increasing_on(double lo, double hi) const {
    for (std::size_t i = 0; i < kCheckPoints; ++i) {
      const double t = i + 1 == kCheckPoints
                           ? hi
                           : lo + (hi - lo) * static_cast<double>(i) /
                                      static_cast<double>(kCheckPoints - 1);
      if (!(derivative(t) > 0.0)) return false;
    }
    return true;
  }

  bool increasing() const { return increasing_on(t_min, t_max); }

  /// Largest |g(t) - t| over the check grid.
  double max_displacement() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < kCheckPoints; ++i) {
      const double t = t_min + (t_max - t_min) * static_cast<double>(i) /
                                   static_cast<double>(kCheckPoints - 1);
      worst = std::max(worst, std::abs((*this)(t) - t));
    }
    return worst;
  }

  friend bool operator==(const WarpPolynomial&, const WarpPolynomial&) = default;
};

}  // namespace scdtns
