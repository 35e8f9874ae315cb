#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "scdtns/error.hpp"
#include "scdtns/transform.hpp"

namespace scdtns {

/// Singular values at or below cutoff * sigma_max are discarded; max_rank
/// optionally caps the number of retained leading directions.
struct RankPolicy {
  double cutoff = 1e-8;
  std::optional<std::size_t> max_rank;
};

/// Orthonormal basis (dim x rank) of the span of one class's features.
class ClassSubspace {
 public:
  ClassSubspace(Eigen::MatrixXd basis, int label) : basis_(std::move(basis)), label_(label) {
    if (basis_.cols() < 1 || basis_.rows() < 1)
      throw Error(ErrorCode::degenerate, "class subspace must have rank >= 1");
  }

  const Eigen::MatrixXd& basis() const noexcept { return basis_; }
  int label() const noexcept { return label_; }
  std::size_t rank() const noexcept { return static_cast<std::size_t>(basis_.cols()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(basis_.rows()); }

 private:
  Eigen::MatrixXd basis_;
  int label_;
};

inline ClassSubspace build_basis(std::span<const FeatureVector> features,
                                 const RankPolicy& policy = {}, int label = 0) {
  if (features.empty()) throw Error(ErrorCode::invalid_argument, "build_basis: no features");
  const std::size_t dim = features.front().size();
  if (dim == 0) throw Error(ErrorCode::invalid_argument, "build_basis: empty feature vector");

  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(features.size()));
  for (std::size_t j = 0; j < features.size(); ++j) {
    if (features[j].size() != dim)
      throw Error(ErrorCode::dimension_mismatch, "build_basis: feature lengths differ");
    stacked.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(features[j].values.data(), static_cast<Eigen::Index>(dim));
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinU);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma.size() == 0 || !(sigma(0) > 0.0))
    throw Error(ErrorCode::degenerate,
                "degenerate class " + std::to_string(label) + ": all features are zero");

  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > policy.cutoff * sigma(0)) ++rank;
  if (policy.max_rank && *policy.max_rank > 0)
    rank = std::min<Eigen::Index>(rank, static_cast<Eigen::Index>(*policy.max_rank));

  Eigen::MatrixXd basis = svd.matrixU().leftCols(rank);
  // Sign convention: largest-magnitude entry of each column is positive.
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    Eigen::Index at = 0;
    basis.col(c).cwiseAbs().maxCoeff(&at);
    if (basis(at, c) < 0.0) basis.col(c) *= -1.0;
  }
  return ClassSubspace(std::move(basis), label);
}

/// ||x - B(B^T x)||^2 without forming the projector.
inline double projection_distance_sq(std::span<const double> x, const ClassSubspace& sub) {
  if (x.size() != sub.dim())
    throw Error(ErrorCode::dimension_mismatch,
                "projection_distance_sq: feature length " + std::to_string(x.size()) +
                    " does not match subspace dimension " + std::to_string(sub.dim()));
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd coeffs = sub.basis().transpose() * v;
  return (v - sub.basis() * coeffs).squaredNorm();
}

inline double projection_distance_sq(const FeatureVector& x, const ClassSubspace& sub) {
  return projection_distance_sq(std::span<const double>(x.values), sub);
}

}  // namespace scdtns
