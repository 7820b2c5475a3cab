#include "specround/expdesign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "specround/error.hpp"

namespace specround::expdesign {

using linalg::Matrix;
using linalg::SymMatrix;
using linalg::Vector;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegenerate = 1e-8;
constexpr int kMaxRetries = 5;

bool singular(const linalg::Spectrum& s) { return s.min() <= s.floor(); }

Matrix inverse(const linalg::Spectrum& s) {
  return s.eigenvectors * s.eigenvalues.cwiseInverse().asDiagonal() * s.eigenvectors.transpose();
}

Matrix v_or_identity(const std::optional<Matrix>& v, Eigen::Index n) {
  if (v) {
    if (v->cols() != n) throw Error(ErrorKind::DimensionError, "V rows must have n columns");
    return *v;
  }
  return Matrix::Identity(n, n);
}

double golden_section(const auto& phi, double lo, double hi, int iters) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int i = 0; i < iters; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = phi(d);
    }
  }
  return fc <= fd ? c : d;
}

// Fractional knapsack: minimize <g, s> over [0,1]^m with <c, s> <= budget.
std::vector<double> linear_step(const std::vector<double>& g, const std::vector<double>& c, double budget) {
  const std::size_t m = g.size();
  std::vector<double> s(m, 0.0);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < m; ++i) {
    if (g[i] >= 0.0) continue;
    if (c[i] <= 0.0) {
      s[i] = 1.0;
    } else {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return g[a] / c[a] < g[b] / c[b]; });
  double left = budget;
  for (std::size_t i : order) {
    if (left <= 0.0) break;
    const double take = std::min(1.0, left / c[i]);
    s[i] = take;
    left -= take * c[i];
  }
  return s;
}

SymMatrix moment_of(const Matrix& vectors, const std::vector<double>& x) {
  return SymMatrix::weighted_gram(vectors, x);
}

Matrix complement_basis(int n) {
  Matrix centering = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
  return linalg::range_basis(linalg::sym_eig(SymMatrix(centering)));
}

DesignProblem graph_problem(const graph::Graph& g, double budget, Objective tag) {
  const int n = g.num_vertices();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "graph needs at least two vertices");
  const Matrix q = complement_basis(n);
  DesignProblem p;
  p.instance.vectors.resize(q.cols(), g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) p.instance.vectors.col(e) = q.transpose() * g.incidence(e);
  p.instance.x = g.weights();
  p.instance.c = g.costs();
  p.budget = budget;
  p.tag = tag;
  return p;
}

}  // namespace

Objective parse_objective(std::string_view tag) {
  if (tag == "A") return Objective::A;
  if (tag == "D") return Objective::D;
  if (tag == "E") return Objective::E;
  if (tag == "V") return Objective::V;
  if (tag == "G") return Objective::G;
  throw Error(ErrorKind::InvalidArgument, "objective tag must be one of A, D, E, V, G (got '" + std::string(tag) + "')");
}

std::string_view to_string(Objective tag) {
  switch (tag) {
    case Objective::A: return "A";
    case Objective::D: return "D";
    case Objective::E: return "E";
    case Objective::V: return "V";
    case Objective::G: return "G";
  }
  return "?";
}

void DesignProblem::validate() const {
  const auto m = static_cast<std::size_t>(instance.m());
  if (instance.c.size() != m) throw Error(ErrorKind::InvalidArgument, "cost vector length differs from m");
  for (double c : instance.c)
    if (!(c >= 0.0) || !std::isfinite(c)) throw Error(ErrorKind::InvalidArgument, "costs must be finite and nonnegative");
  if (!(budget > 0.0) || !std::isfinite(budget)) throw Error(ErrorKind::InvalidArgument, "budget must be positive");
  if (v_rows && v_rows->cols() != instance.n()) throw Error(ErrorKind::DimensionError, "V rows must have n columns");
}

double objective(Objective tag, const SymMatrix& sigma, const std::optional<Matrix>& v_rows) {
  const linalg::Spectrum s = linalg::sym_eig(sigma);
  if (s.min() < -s.floor()) throw Error(ErrorKind::NotPSD, "design matrix is not PSD");
  if (singular(s)) return kInf;
  const double n = static_cast<double>(s.dim());
  switch (tag) {
    case Objective::A: return s.eigenvalues.cwiseInverse().sum() / n;
    case Objective::D: return std::exp(-s.eigenvalues.array().log().sum() / n);
    case Objective::E: return 1.0 / s.min();
    case Objective::V:
    case Objective::G: {
      const Matrix v = v_or_identity(v_rows, s.dim());
      const Matrix w = v * inverse(s) * v.transpose();
      return tag == Objective::V ? w.trace() : w.diagonal().maxCoeff();
    }
  }
  return kInf;
}

SymMatrix objective_gradient(Objective tag, const SymMatrix& sigma, const std::optional<Matrix>& v_rows) {
  const linalg::Spectrum s = linalg::sym_eig(sigma);
  if (singular(s)) throw Error(ErrorKind::InvalidArgument, "gradient undefined at a singular design");
  const double n = static_cast<double>(s.dim());
  const Matrix inv = inverse(s);
  switch (tag) {
    case Objective::A: return SymMatrix(-(inv * inv) / n);
    case Objective::D: {
      const double f = std::exp(-s.eigenvalues.array().log().sum() / n);
      return SymMatrix(-(f / n) * inv);
    }
    case Objective::E: {
      const double lam = s.min();
      Eigen::Index k = 0;
      while (k < s.dim() && s.eigenvalues(k) - lam <= kDegenerate * std::max(1.0, lam)) ++k;
      const Matrix u = s.eigenvectors.leftCols(k);
      return SymMatrix(-(u * u.transpose()) / (static_cast<double>(k) * lam * lam));
    }
    case Objective::V: {
      const Matrix v = v_or_identity(v_rows, s.dim());
      return SymMatrix(-(inv * v.transpose() * v * inv));
    }
    case Objective::G: {
      const Matrix v = v_or_identity(v_rows, s.dim());
      const Matrix w = v * inv * v.transpose();
      Eigen::Index r = 0;
      w.diagonal().maxCoeff(&r);
      const Vector a = inv * v.row(r).transpose();
      return SymMatrix(-(a * a.transpose()));
    }
  }
  return SymMatrix::zero(s.dim());
}

RelaxationResult solve_relaxation(const DesignProblem& p, const RelaxationParams& params) {
  p.validate();
  const VectorInstance& inst = p.instance;
  const auto m = static_cast<std::size_t>(inst.m());
  const double total = std::accumulate(inst.c.begin(), inst.c.end(), 0.0);
  const double start = total > 0.0 ? std::min(1.0, p.budget / total) : 1.0;

  RelaxationResult res;
  res.x.assign(m, start);
  auto eval = [&](const std::vector<double>& x) { return objective(p.tag, moment_of(inst.vectors, x), p.v_rows); };
  res.objective = eval(res.x);
  if (!std::isfinite(res.objective))
    throw Error(ErrorKind::Infeasible, "uniform budget-feasible point has singular moment matrix");

  std::vector<double> g(m);
  std::vector<double> trial(m);
  for (int it = 0; it < params.iters; ++it) {
    const SymMatrix grad = objective_gradient(p.tag, moment_of(inst.vectors, res.x), p.v_rows);
    for (std::size_t i = 0; i < m; ++i) {
      const auto col = inst.vectors.col(static_cast<Eigen::Index>(i));
      g[i] = col.dot(grad.matrix() * col);
    }
    const std::vector<double> s = linear_step(g, inst.c, p.budget);
    double gap = 0.0;
    for (std::size_t i = 0; i < m; ++i) gap += g[i] * (res.x[i] - s[i]);
    res.gap = gap;
    res.iterations = it;
    if (gap <= params.tol * std::max(1.0, std::abs(res.objective))) {
      res.converged = true;
      break;
    }
    auto phi = [&](double gamma) {
      for (std::size_t i = 0; i < m; ++i) trial[i] = res.x[i] + gamma * (s[i] - res.x[i]);
      return eval(trial);
    };
    const double gamma = golden_section(phi, 0.0, 1.0, 60);
    double best_gamma = gamma;
    double best = phi(gamma);
    const double at_one = phi(1.0);
    if (at_one < best) {
      best = at_one;
      best_gamma = 1.0;
    }
    if (best < res.objective) {
      for (std::size_t i = 0; i < m; ++i)
        res.x[i] = std::clamp(res.x[i] + best_gamma * (s[i] - res.x[i]), 0.0, 1.0);
      res.objective = eval(res.x);
    }
    res.trace.push_back(res.objective);
    res.iterations = it + 1;
  }
  // Clamping can only move x toward the box; re-enforce the budget exactly.
  double spend = 0.0;
  for (std::size_t i = 0; i < m; ++i) spend += inst.c[i] * res.x[i];
  if (spend > p.budget) {
    const double shrink = p.budget / spend;
    for (double& xi : res.x) xi *= shrink;
    res.objective = eval(res.x);
  }
  return res;
}

DesignRounding round_design(const DesignProblem& p, const std::vector<double>& x, const rounding::SwapParams& params) {
  p.validate();
  const double eps = params.eps;
  if (!(eps > 0.0 && eps <= 0.5)) throw Error(ErrorKind::InvalidArgument, "round_design needs eps in (0, 1/2]");
  VectorInstance inst = p.instance;
  inst.x = x;
  inst.validate();

  DesignRounding out;
  out.budget = p.budget;
  out.fractional_cost = inst.fractional_cost();
  if (out.fractional_cost > p.budget * (1.0 + 1e-12))
    throw Error(ErrorKind::InvalidArgument, "fractional solution exceeds the budget");

  const SymMatrix mx = inst.moment();
  const Matrix map = linalg::whitening_map(mx);
  out.objective_x = objective(p.tag, mx, p.v_rows);
  auto finish = [&](std::vector<int> selected) {
    std::sort(selected.begin(), selected.end());
    out.selected = std::move(selected);
    out.cost = inst.selection_cost(out.selected);
    const SymMatrix mz = inst.selection_moment(out.selected);
    out.lambda_ratio = map.rows() > 0 ? linalg::lambda_min(SymMatrix(map * mz.matrix() * map.transpose())) : 1.0;
    out.objective_z = objective(p.tag, mz, p.v_rows);
    return out;
  };

  const bool integral = std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0 || v == 1.0; });
  if (integral) {
    out.integral_input = true;
    out.seed_used = params.seed;
    std::vector<int> support;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] == 1.0) support.push_back(static_cast<int>(i));
    return finish(std::move(support));
  }

  const double n = static_cast<double>(inst.n());
  const double needed = 15.0 * n * inst.max_cost() / (eps * eps);
  if (p.budget < needed) {
    std::ostringstream os;
    os << "budget " << p.budget << " below 15 n c_inf / eps^2 = " << needed;
    throw Error(ErrorKind::BudgetTooSmall, os.str());
  }
  if (eps == 0.5 || map.rows() == 0) {
    out.seed_used = params.seed;
    return finish({});
  }

  VectorInstance scaled = inst;
  const double shrink = 1.0 - 2.0 * eps;
  scaled.vectors = (map * inst.vectors) / std::sqrt(shrink);
  for (double& xi : scaled.x) xi *= shrink;

  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    rounding::SwapParams run = params;
    run.seed = params.seed + static_cast<std::uint64_t>(attempt);
    rounding::RoundingCertificate cert = rounding::randomized_swap(scaled, run);
    if (inst.selection_cost(cert.selected) <= p.budget) {
      out.seed_used = run.seed;
      out.retries = attempt;
      std::vector<int> sel = cert.selected;
      out.certificate = std::move(cert);
      return finish(std::move(sel));
    }
  }
  std::ostringstream os;
  os << "budget exceeded on " << kMaxRetries + 1 << " consecutive seeds starting at " << params.seed;
  throw Error(ErrorKind::UnluckyRun, os.str());
}

DesignProblem lambda2_problem(const graph::Graph& g, double budget) { return graph_problem(g, budget, Objective::E); }

DesignProblem total_reff_problem(const graph::Graph& g, double budget) {
  return graph_problem(g, budget, Objective::A);
}

double total_effective_resistance(const graph::Graph& g) {
  const SymMatrix lap = graph::laplacian(g);
  double total = 0.0;
  for (int u = 0; u < g.num_vertices(); ++u)
    for (int v = u + 1; v < g.num_vertices(); ++v) total += graph::effective_resistance(lap, u, v);
  return total;
}

double total_effective_resistance_trace(const graph::Graph& g) {
  const SymMatrix pinv = linalg::psd_fn(graph::laplacian(g), linalg::PsdFunction::Pinv);
  return g.num_vertices() * pinv.matrix().trace();
}

}  // namespace specround::expdesign
