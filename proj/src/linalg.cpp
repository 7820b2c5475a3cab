#include "specround/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "specround/error.hpp"
#include "specround/instance.hpp"

namespace specround::linalg {

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionError, "symmetric matrix must be square");
  }
  if (!m.allFinite()) {
    throw Error(ErrorKind::InvalidMatrix, "matrix has non-finite entries");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::zero(Eigen::Index n) { return SymMatrix(Matrix::Zero(n, n)); }

SymMatrix SymMatrix::identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return SymMatrix(m);
}

SymMatrix SymMatrix::weighted_gram(const Matrix& vectors, std::span<const double> weights) {
  if (static_cast<std::size_t>(vectors.cols()) != weights.size()) {
    throw Error(ErrorKind::DimensionError, "weight count does not match vector count");
  }
  Matrix scaled = vectors;
  for (Eigen::Index i = 0; i < vectors.cols(); ++i) scaled.col(i) *= weights[static_cast<std::size_t>(i)];
  return SymMatrix(scaled * vectors.transpose());
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  if (dim() != o.dim()) throw Error(ErrorKind::DimensionError, "dimension mismatch in sum");
  return SymMatrix(m_ + o.m_);
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  if (dim() != o.dim()) throw Error(ErrorKind::DimensionError, "dimension mismatch in difference");
  return SymMatrix(m_ - o.m_);
}

SymMatrix SymMatrix::operator*(double s) const { return SymMatrix(m_ * s); }

void SymMatrix::add_outer(const Vector& v, double w) {
  if (v.size() != dim()) throw Error(ErrorKind::DimensionError, "rank-one update dimension mismatch");
  for (Eigen::Index j = 0; j < dim(); ++j) {
    for (Eigen::Index i = j; i < dim(); ++i) {
      const double val = w * v(i) * v(j);
      m_(i, j) += val;
      if (i != j) m_(j, i) = m_(i, j);
    }
  }
}

double Spectrum::floor() const {
  if (eigenvalues.size() == 0) return kRankFloor;
  return kRankFloor * std::max(1.0, max());
}

Eigen::Index Spectrum::rank() const {
  const double f = floor();
  return (eigenvalues.array() > f).count();
}

Spectrum sym_eig(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "symmetric eigensolver did not converge");
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

SymMatrix psd_fn(const SymMatrix& m, PsdFunction f) {
  const Spectrum s = sym_eig(m);
  const double scale = std::max(1.0, std::abs(s.eigenvalues.size() ? s.max() : 0.0));
  const double tol = kRankFloor * std::max(scale, s.eigenvalues.size() ? std::abs(s.min()) : 0.0);
  Vector mapped(s.dim());
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    const double lam = s.eigenvalues(i);
    if (lam < -tol) {
      throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(lam) + " below tolerance");
    }
    const bool zero = lam <= s.floor();
    switch (f) {
      case PsdFunction::Sqrt: mapped(i) = zero ? 0.0 : std::sqrt(lam); break;
      case PsdFunction::Pinv: mapped(i) = zero ? 0.0 : 1.0 / lam; break;
      case PsdFunction::PinvSqrt: mapped(i) = zero ? 0.0 : 1.0 / std::sqrt(lam); break;
    }
  }
  return SymMatrix(s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.transpose());
}

double lambda_min(const SymMatrix& m) { return sym_eig(m).min(); }

double lambda_max(const SymMatrix& m) { return sym_eig(m).max(); }

double op_norm(const SymMatrix& m) {
  if (m.dim() == 0) return 0.0;
  const Spectrum s = sym_eig(m);
  return std::max(std::abs(s.min()), std::abs(s.max()));
}

double frobenius_inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionError, "dimension mismatch in inner product");
  return (a.matrix().array() * b.matrix().array()).sum();
}

Matrix range_basis(const Spectrum& s) {
  const double f = s.floor();
  const Eigen::Index r = s.rank();
  Matrix basis(s.dim(), r);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    if (s.eigenvalues(i) > f) basis.col(col++) = s.eigenvectors.col(i);
  }
  return basis;
}

Matrix whitening_map(const SymMatrix& moment) {
  const Spectrum s = sym_eig(moment);
  const double f = s.floor();
  Matrix map(s.rank(), s.dim());
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    const double lam = s.eigenvalues(i);
    if (lam > f) map.row(row++) = s.eigenvectors.col(i).transpose() / std::sqrt(lam);
  }
  return map;
}

VectorInstance whiten(const VectorInstance& inst) {
  const SymMatrix moment = inst.moment();
  const Matrix map = whitening_map(moment);
  if (map.rows() == 0) {
    throw Error(ErrorKind::DegenerateInstance, "weighted moment matrix is zero");
  }
  VectorInstance out = inst;
  out.vectors = map * inst.vectors;
  return out;
}

}  // namespace specround::linalg
