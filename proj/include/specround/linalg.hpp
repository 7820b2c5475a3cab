#pragma once

#include <Eigen/Dense>

#include <span>

namespace specround {
struct VectorInstance;
}

namespace specround::linalg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Relative eigenvalue floor used for every rank decision.
inline constexpr double kRankFloor = 1e-10;

/// Dense real symmetric matrix. Construction stores (M + M^T)/2 and rejects
/// non-finite entries, so the stored entries are exactly symmetric.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix zero(Eigen::Index n);
  static SymMatrix identity(Eigen::Index n);
  static SymMatrix diagonal(std::span<const double> d);
  /// Sum of w_i v_i v_i^T over the columns of `vectors`.
  static SymMatrix weighted_gram(const Matrix& vectors, std::span<const double> weights);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;

  /// Rank-one update M += w * v v^T, kept exactly symmetric.
  void add_outer(const Vector& v, double w);

 private:
  Matrix m_;
};

/// Ascending eigenvalues with an orthonormal eigenbasis (columns).
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;

  double min() const { return eigenvalues(0); }
  double max() const { return eigenvalues(eigenvalues.size() - 1); }
  Eigen::Index dim() const { return eigenvalues.size(); }
  /// Threshold below which an eigenvalue is treated as zero.
  double floor() const;
  Eigen::Index rank() const;
};

Spectrum sym_eig(const SymMatrix& m);

enum class PsdFunction { Sqrt, Pinv, PinvSqrt };

/// Applies f eigenvalue-wise. Eigenvalues under the floor are clamped to zero
/// (sqrt) or mapped to zero (pinv variants). Throws NotPSD when an eigenvalue
/// is below -floor.
SymMatrix psd_fn(const SymMatrix& m, PsdFunction f);

double lambda_min(const SymMatrix& m);
double lambda_max(const SymMatrix& m);
/// Spectral norm max |lambda_i|.
double op_norm(const SymMatrix& m);
double frobenius_inner(const SymMatrix& a, const SymMatrix& b);

/// Orthonormal basis (columns) of the range of a PSD matrix.
Matrix range_basis(const Spectrum& s);

/// Maps the vectors to M^{+/2} v_i expressed in an orthonormal basis of the
/// range of M = sum x_i v_i v_i^T, so the output is isotropic in dimension
/// rank(M). Weights, costs and linear rows are unchanged.
VectorInstance whiten(const VectorInstance& inst);

/// The r x n map used by whiten (Lambda^{-1/2} U^T on the range).
Matrix whitening_map(const SymMatrix& moment);

}  // namespace specround::linalg
