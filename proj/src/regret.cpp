#include "specround/regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specround/error.hpp"

namespace specround::regret {

using linalg::Matrix;
using linalg::Spectrum;
using linalg::SymMatrix;
using linalg::Vector;

namespace {

constexpr int kMaxBisection = 200;
constexpr double kRootTol = 1e-12;

double shifted_sum(std::span<const double> gaps, double d, double power) {
  double s = 0.0;
  for (double g : gaps) s += std::pow(g + d, -power);
  return s;
}

// Solves g(d) = 1 for the shift d = alpha*lambda_min - l. Each term lies in
// (0, d^-2], so g(1) >= 1 >= g(sqrt(n)) and g is strictly decreasing in d.
double solve_shift(std::span<const double> gaps) {
  const double n = static_cast<double>(gaps.size());
  double lo = 1.0;
  double hi = std::max(1.0, std::sqrt(n));
  if (shifted_sum(gaps, hi, 2.0) > 1.0 || shifted_sum(gaps, lo, 2.0) < 1.0) {
    lo *= 0.5;
    hi *= 2.0;
  }
  double d = 0.5 * (lo + hi);
  bool converged = false;
  for (int it = 0; it < kMaxBisection; ++it) {
    d = 0.5 * (lo + hi);
    const double g = shifted_sum(gaps, d, 2.0);
    if (std::abs(g - 1.0) <= kRootTol) {
      converged = true;
      break;
    }
    if (g > 1.0) lo = d; else hi = d;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorKind::NumericalFailure, "normalizer bisection did not converge");
  // Newton polish on g(d) - 1; kept only if it improves the residual.
  const double g = shifted_sum(gaps, d, 2.0);
  const double dg = -2.0 * shifted_sum(gaps, d, 3.0);
  const double polished = d - (g - 1.0) / dg;
  if (polished > 0.0 && std::abs(shifted_sum(gaps, polished, 2.0) - 1.0) < std::abs(g - 1.0)) return polished;
  return d;
}

std::vector<double> gaps_of(std::span<const double> eigenvalues, double lambda_min, double alpha) {
  std::vector<double> gaps;
  gaps.reserve(eigenvalues.size());
  for (double lam : eigenvalues) gaps.push_back(alpha * (lam - lambda_min));
  return gaps;
}

}  // namespace

ActionMatrix::ActionMatrix(Spectrum z_spectrum, double alpha, double l)
    : z_(std::move(z_spectrum)), alpha_(alpha), l_(l) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorKind::InvalidArgument, "learning rate must be positive");
  shift_ = alpha * z_.min() - l;
  if (!(shift_ > 0.0)) throw Error(ErrorKind::NumericalFailure, "alpha Z - l I is not positive definite");
  weights_.resize(z_.dim());
  half_weights_.resize(z_.dim());
  for (Eigen::Index i = 0; i < z_.dim(); ++i) {
    const double eig = alpha * (z_.eigenvalues(i) - z_.min()) + shift_;
    half_weights_(i) = 1.0 / eig;
    weights_(i) = half_weights_(i) * half_weights_(i);
  }
  half_ = SymMatrix(z_.eigenvectors * half_weights_.asDiagonal() * z_.eigenvectors.transpose());
}

SymMatrix ActionMatrix::matrix() const {
  return SymMatrix(z_.eigenvectors * weights_.asDiagonal() * z_.eigenvectors.transpose());
}

const SymMatrix& ActionMatrix::half() const { return half_; }

SymMatrix ActionMatrix::quarter() const {
  const Vector q = half_weights_.array().sqrt();
  return SymMatrix(z_.eigenvectors * q.asDiagonal() * z_.eigenvectors.transpose());
}

ActionMatrix::Leverage ActionMatrix::leverage(const Vector& v) const {
  if (v.size() != dim()) throw Error(ErrorKind::DimensionError, "leverage vector dimension mismatch");
  const Vector p = z_.eigenvectors.transpose() * v;
  const Vector p2 = p.array().square();
  return {p2.dot(weights_), p2.dot(half_weights_)};
}

double solve_normalizer(std::span<const double> z_eigenvalues, double alpha) {
  if (z_eigenvalues.empty()) throw Error(ErrorKind::DimensionError, "empty spectrum");
  const double lmin = *std::min_element(z_eigenvalues.begin(), z_eigenvalues.end());
  const auto gaps = gaps_of(z_eigenvalues, lmin, alpha);
  return alpha * lmin - solve_shift(gaps);
}

ActionMatrix compute_action_matrix(Spectrum z_spectrum, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "learning rate must be positive");
  const std::span<const double> eig(z_spectrum.eigenvalues.data(), static_cast<std::size_t>(z_spectrum.dim()));
  const double l = solve_normalizer(eig, alpha);
  return ActionMatrix(std::move(z_spectrum), alpha, l);
}

ActionMatrix compute_action_matrix(const SymMatrix& z, double alpha) {
  return compute_action_matrix(linalg::sym_eig(z), alpha);
}

std::vector<ActionMatrix> compute_block_action_matrix(std::vector<Spectrum> blocks, double alpha) {
  std::vector<double> all;
  for (const auto& b : blocks) all.insert(all.end(), b.eigenvalues.data(), b.eigenvalues.data() + b.dim());
  const double l = solve_normalizer(all, alpha);
  std::vector<ActionMatrix> out;
  out.reserve(blocks.size());
  for (auto& b : blocks) out.emplace_back(std::move(b), alpha, l);
  return out;
}

CospectralInner cospectral_bounds(const SymMatrix& z, const ActionMatrix& am) {
  if (z.dim() != am.dim()) throw Error(ErrorKind::DimensionError, "Z and action matrix dimensions differ");
  const Matrix& basis = am.z_spectrum().eigenvectors;
  const Vector diag = (basis.transpose() * z.matrix() * basis).diagonal();
  return {diag.dot(am.weights()), am.alpha() * diag.dot(am.half_weights())};
}

ActionMatrix::Leverage leverage(const Vector& v, const ActionMatrix& am) { return am.leverage(v); }

}  // namespace specround::regret
