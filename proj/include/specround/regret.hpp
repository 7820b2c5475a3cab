#pragma once

#include <span>
#include <vector>

#include "specround/linalg.hpp"

namespace specround::regret {

/// Density matrix A = (alpha Z - l I)^{-2} of the l_{1/2}-regularized
/// follow-the-regularized-leader player, kept in Z's eigenbasis.
/// Invariants: A > 0, tr(A) = 1, alpha Z - l I > 0.
class ActionMatrix {
 public:
  ActionMatrix(linalg::Spectrum z_spectrum, double alpha, double l);

  double alpha() const noexcept { return alpha_; }
  double l() const noexcept { return l_; }
  /// alpha * lambda_min(Z) - l > 0, the smallest eigenvalue of alpha Z - l I.
  double shift() const noexcept { return shift_; }
  Eigen::Index dim() const noexcept { return weights_.size(); }

  const linalg::Spectrum& z_spectrum() const noexcept { return z_; }
  /// Eigenvalues of A in the order of z_spectrum().
  const linalg::Vector& weights() const noexcept { return weights_; }
  /// Eigenvalues of A^{1/2}, i.e. (alpha lambda_i - l)^{-1}.
  const linalg::Vector& half_weights() const noexcept { return half_weights_; }

  linalg::SymMatrix matrix() const;
  const linalg::SymMatrix& half() const;
  linalg::SymMatrix quarter() const;
  double trace() const { return weights_.sum(); }

  /// (v^T A v, v^T A^{1/2} v)
  struct Leverage {
    double a = 0.0;
    double ah = 0.0;
  };
  Leverage leverage(const linalg::Vector& v) const;

 private:
  linalg::Spectrum z_;
  double alpha_;
  double l_;
  double shift_;
  linalg::Vector weights_;
  linalg::Vector half_weights_;
  linalg::SymMatrix half_;
};

/// Root of g(d) = sum_i (alpha (lambda_i - lambda_min) + d)^{-2} = 1 with
/// d = alpha lambda_min - l in [1, sqrt(n)]. Returns l.
double solve_normalizer(std::span<const double> z_eigenvalues, double alpha);

ActionMatrix compute_action_matrix(const linalg::SymMatrix& z, double alpha);
ActionMatrix compute_action_matrix(linalg::Spectrum z_spectrum, double alpha);

/// Action matrix of a block-diagonal Z given its blocks: one shared l, one
/// ActionMatrix per block (each has trace < 1; the traces sum to 1).
std::vector<ActionMatrix> compute_block_action_matrix(std::vector<linalg::Spectrum> blocks, double alpha);

struct CospectralInner {
  double inner1 = 0.0;  ///< <Z, A>
  double inner2 = 0.0;  ///< alpha <Z, A^{1/2}>
};

/// Throws DimensionError if Z and the action matrix differ in size.
CospectralInner cospectral_bounds(const linalg::SymMatrix& z, const ActionMatrix& am);

ActionMatrix::Leverage leverage(const linalg::Vector& v, const ActionMatrix& am);

}  // namespace specround::regret
