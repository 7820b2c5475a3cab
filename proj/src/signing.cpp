#include "specround/signing.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "specround/error.hpp"

namespace specround::signing {

using linalg::Matrix;
using linalg::Vector;

SignedAugmentation derandomized_signing(const VectorInstance& inst, double lambda) {
  inst.validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
  const double cx = inst.fractional_cost();
  if (!(cx > 0.0)) throw Error(ErrorKind::DegenerateCosts, "<c,x> = 0, the cost coordinate is undefined");

  const Eigen::Index n = inst.n();
  const Eigen::Index m = inst.m();
  SignedAugmentation out;
  out.lambda = lambda;
  out.signs.assign(static_cast<std::size_t>(m), 1);
  out.augmented = Matrix::Zero(n + 1, m);

  std::vector<double> coord(static_cast<std::size_t>(m));
  Matrix w(n, m);
  std::vector<double> wsq(static_cast<std::size_t>(m));
  double rest = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    coord[k] = std::sqrt(inst.c[k] * lambda / cx);
    w.col(i) = inst.x[k] * coord[k] * inst.vectors.col(i);
    wsq[k] = w.col(i).squaredNorm();
    rest += wsq[k];
    out.l = std::max(out.l, inst.vectors.col(i).norm());
  }
  out.expected_sq_norm = rest;

  Vector p = Vector::Zero(n);
  out.conditional.reserve(static_cast<std::size_t>(m) + 1);
  out.conditional.push_back(rest);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const double inner = p.dot(w.col(j));
    const int s = inner > 0.0 ? -1 : 1;
    out.signs[k] = s;
    p += s * w.col(j);
    rest -= wsq[k];
    const double cond = p.squaredNorm() + std::max(0.0, rest);
    const double prev = out.conditional.back();
    if (cond > prev + 1e-12 * std::max(1.0, prev)) {
      std::ostringstream os;
      os << "conditional expectation increased at sign " << j << ": " << prev << " -> " << cond;
      throw Error(ErrorKind::NumericalFailure, os.str());
    }
    out.conditional.push_back(cond);
  }
  out.achieved_norm = p.norm();

  for (Eigen::Index i = 0; i < m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out.augmented.col(i).head(n) = inst.vectors.col(i);
    out.augmented(n, i) = out.signs[k] * coord[k];
  }
  return out;
}

double augmented_moment_norm(const VectorInstance& inst, const SignedAugmentation& aug) {
  return linalg::op_norm(linalg::SymMatrix::weighted_gram(aug.augmented, inst.x));
}

TwoSidedReport verify_two_sided(const VectorInstance& inst, const std::vector<int>& z, double eps, double factor) {
  inst.validate();
  if (static_cast<Eigen::Index>(z.size()) != inst.m())
    throw Error(ErrorKind::DimensionError, "selection length differs from m");
  std::vector<int> selected;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] != 0 && z[i] != 1) throw Error(ErrorKind::InvalidArgument, "selection must be zero-one");
    if (z[i]) selected.push_back(static_cast<int>(i));
  }
  TwoSidedReport r;
  r.band = factor * eps;
  const linalg::Spectrum s = linalg::sym_eig(inst.selection_moment(selected));
  r.lambda_min = s.min();
  r.lambda_max = s.max();
  r.cost = inst.selection_cost(selected);
  r.fractional_cost = inst.fractional_cost();
  if (r.fractional_cost > 0.0) {
    r.cost_ratio = r.cost / r.fractional_cost;
  } else {
    r.cost_ratio = r.cost == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  // 1e-9 absorbs eigensolver rounding so an exactly isotropic z passes at any band.
  constexpr double kTol = 1e-9;
  r.spectral_pass = r.lambda_min >= 1.0 - r.band - kTol && r.lambda_max <= 1.0 + r.band + kTol;
  r.cost_pass = std::abs(r.cost - r.fractional_cost) <= r.band * r.fractional_cost + kTol * std::max(1.0, r.fractional_cost);
  r.pass = r.spectral_pass && r.cost_pass;
  return r;
}

}  // namespace specround::signing
