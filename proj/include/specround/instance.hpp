#pragma once

#include <optional>
#include <vector>

#include "specround/linalg.hpp"

namespace specround {

/// Nonnegative linear rows (packing A z <= a or covering B z >= b).
struct LinearRows {
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
};

/// m vectors in R^n (stored as the columns of `vectors`) with fractional
/// weights x in [0,1]^m and nonnegative costs c.
struct VectorInstance {
  linalg::Matrix vectors;
  std::vector<double> x;
  std::vector<double> c;
  std::optional<LinearRows> packing;
  std::optional<LinearRows> covering;

  Eigen::Index n() const noexcept { return vectors.rows(); }
  Eigen::Index m() const noexcept { return vectors.cols(); }
  linalg::Vector vector(Eigen::Index i) const { return vectors.col(i); }

  /// Throws InvalidArgument on size mismatch, x outside [0,1], negative or
  /// non-finite costs, or malformed linear rows.
  void validate() const;

  /// sum_i x_i v_i v_i^T
  linalg::SymMatrix moment() const;
  /// sum_{i in S} v_i v_i^T
  linalg::SymMatrix selection_moment(const std::vector<int>& selected) const;
  /// ||sum x_i v_i v_i^T - I||_op
  double isotropy_error() const;
  bool is_isotropic(double tol = 1e-8) const { return isotropy_error() <= tol; }

  double fractional_cost() const;
  double selection_cost(const std::vector<int>& selected) const;
  double max_cost() const;

  /// Sub-instance on the given indices (rows of linear constraints are
  /// restricted to the same columns).
  VectorInstance restrict_to(const std::vector<int>& indices) const;
};

/// Indicator of a sorted index set as a zero-one vector of length m.
std::vector<int> indicator(const std::vector<int>& selected, Eigen::Index m);

}  // namespace specround
