#include "specround/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "specround/error.hpp"
#include "specround/kernels.hpp"
#include "specround/regret.hpp"

namespace specround::sparsify {

using graph::Graph;
using linalg::Matrix;
using linalg::SymMatrix;

namespace {

constexpr double kBoundTol = 1e-9;

Matrix edge_laplacian(int n, const graph::Edge& e, double sign) {
  Matrix l = Matrix::Zero(n, n);
  l(e.u, e.u) += 1.0;
  l(e.v, e.v) += 1.0;
  l(e.u, e.v) += sign;
  l(e.v, e.u) += sign;
  return l;
}

struct Residuals {
  double add_max = 0.0;
  double add_min = 0.0;
  double signless_min = 0.0;
};

Residuals residuals(const Graph& g, const std::vector<int>& f, double scale) {
  std::vector<double> z(static_cast<std::size_t>(g.num_edges()), 0.0);
  for (int e : f) z[static_cast<std::size_t>(e)] = 1.0;
  const Graph sub = g.with_weights(z);
  const Graph unit = g.with_weights(std::vector<double>(z.size(), 1.0));
  const SymMatrix diff = graph::laplacian(sub) * scale - graph::laplacian(unit);
  const SymMatrix sdiff = graph::signless_laplacian(unit) - graph::signless_laplacian(sub) * scale;
  const linalg::Spectrum s = linalg::sym_eig(diff);
  return {s.max(), s.min(), linalg::lambda_min(sdiff)};
}

}  // namespace

SparsifierCertificate greedy_additive_sparsify(const Graph& g, const SparsifyParams& params) {
  if (!(params.eps > 0.0 && params.eps <= 1.0)) throw Error(ErrorKind::InvalidArgument, "sparsify needs eps in (0,1]");
  if (!(params.q > 0.0)) throw Error(ErrorKind::InvalidArgument, "q must be positive");
  const int n = g.num_vertices();
  const int m = g.num_edges();
  if (n < 1 || m < 1) throw Error(ErrorKind::InvalidArgument, "graph has no edges");
  const double eps = params.eps;

  SparsifierCertificate cert;
  cert.m = m;
  cert.eps = eps;
  cert.q = params.q;
  cert.max_degree = g.max_degree();
  const double d = cert.max_degree;

  if (static_cast<double>(m) < 2.0 * n / (eps * eps)) {
    cert.returned_input = true;
    for (int e = 0; e < m; ++e) cert.edges.push_back(e);
  } else {
    const int tau = static_cast<int>(std::ceil(n / (eps * eps) - 1e-12));
    const double md = m;
    const double alpha = params.q * eps / std::sqrt(d * md);
    cert.alpha = alpha;
    const Graph unit = g.with_weights(std::vector<double>(static_cast<std::size_t>(m), 1.0));
    const Matrix lg = graph::laplacian(unit).matrix();
    const Matrix pg = graph::signless_laplacian(unit).matrix();
    const Matrix shift = 2.0 * d * Matrix::Identity(n, n);
    Matrix z_lap = Matrix::Zero(n, n);
    Matrix z_sig = Matrix::Zero(n, n);
    std::vector<char> used(static_cast<std::size_t>(m), 0);
    std::vector<double> scores(static_cast<std::size_t>(m));
    const double bound = -2.0 * std::sqrt(2.0 * n) / (alpha * md);
    const double bound_sqrt_n = -2.0 * std::sqrt(static_cast<double>(n)) / (alpha * md);

    for (int t = 1; t <= tau; ++t) {
      std::vector<linalg::Spectrum> blocks;
      blocks.push_back(linalg::sym_eig(SymMatrix(z_lap)));
      blocks.push_back(linalg::sym_eig(SymMatrix(z_sig)));
      const auto am = regret::compute_block_action_matrix(std::move(blocks), alpha);
      const Matrix b = am[0].matrix().matrix();
      const Matrix c = am[1].matrix().matrix();
      const double base = (b.cwiseProduct(lg)).sum() + (c.cwiseProduct(pg)).sum();
      kernels::edge_scores(b, c, base, md, g.edges(), scores);

      double best = -std::numeric_limits<double>::infinity();
      for (int e = 0; e < m; ++e)
        if (!used[static_cast<std::size_t>(e)]) best = std::max(best, scores[static_cast<std::size_t>(e)]);
      const double tie = 1e-12 * (1.0 + std::abs(best));
      int chosen = -1;
      for (int e = 0; e < m && chosen < 0; ++e)
        if (!used[static_cast<std::size_t>(e)] && scores[static_cast<std::size_t>(e)] >= best - tie) chosen = e;
      if (chosen < 0) throw Error(ErrorKind::NumericalFailure, "no unselected edge left");

      SelectionRecord rec;
      rec.t = t;
      rec.edge = chosen;
      rec.score = scores[static_cast<std::size_t>(chosen)];
      rec.bound = bound;
      rec.bound_sqrt_n = bound_sqrt_n;
      rec.trace_b = am[0].trace();
      if (rec.score < bound - kBoundTol) {
        std::ostringstream os;
        os << "iteration " << t << ": best edge score " << rec.score << " below selection bound " << bound;
        throw Error(ErrorKind::CertificateViolation, os.str());
      }

      const graph::Edge& e = g.edge(chosen);
      const Matrix f_lap = lg - md * edge_laplacian(n, e, -1.0) - shift;
      const Matrix f_sig = pg - md * edge_laplacian(n, e, 1.0) - shift;
      const Matrix q_lap = am[0].quarter().matrix();
      const Matrix q_sig = am[1].quarter().matrix();
      const double w_lap = linalg::op_norm(SymMatrix(q_lap * f_lap * q_lap));
      const double w_sig = linalg::op_norm(SymMatrix(q_sig * f_sig * q_sig));
      rec.width = alpha * std::max(w_lap, w_sig);
      cert.width_constant = std::max(cert.width_constant, rec.width / eps);
      cert.log.push_back(rec);
      if (params.check_width && rec.width > 0.25 + kBoundTol) {
        std::ostringstream os;
        os << "iteration " << t << ": width " << rec.width << " exceeds 1/4 (decrease q)";
        throw Error(ErrorKind::CertificateViolation, os.str());
      }

      used[static_cast<std::size_t>(chosen)] = 1;
      cert.edges.push_back(chosen);
      z_lap += f_lap;
      z_sig += f_sig;
    }
    cert.iterations = tau;
  }

  cert.m_tilde = static_cast<int>(cert.edges.size());
  cert.scale = static_cast<double>(m) / cert.m_tilde;
  const Residuals r = residuals(g, cert.edges, cert.scale);
  cert.upper_residual = d > 0 ? r.add_max / d : 0.0;
  cert.lower_residual = d > 0 ? r.signless_min / d : 0.0;
  return cert;
}

AdditiveReport verify_additive(const Graph& g, const std::vector<int>& f, double eps_claimed) {
  if (f.empty()) throw Error(ErrorKind::EmptySparsifier, "sparsifier has no edges");
  std::vector<char> seen(static_cast<std::size_t>(g.num_edges()), 0);
  for (int e : f) {
    if (e < 0 || e >= g.num_edges()) throw Error(ErrorKind::InvalidArgument, "edge index out of range");
    if (seen[static_cast<std::size_t>(e)]) throw Error(ErrorKind::InvalidArgument, "repeated edge index in sparsifier");
    seen[static_cast<std::size_t>(e)] = 1;
  }
  AdditiveReport rep;
  rep.m = g.num_edges();
  rep.m_tilde = static_cast<int>(f.size());
  rep.scale = static_cast<double>(rep.m) / rep.m_tilde;
  rep.max_degree = g.max_degree();
  rep.eps_claimed = eps_claimed;
  const double d = rep.max_degree;
  const Residuals r = residuals(g, f, rep.scale);
  rep.additive_max = r.add_max / d;
  rep.additive_min = r.add_min / d;
  rep.signless_min = r.signless_min / d;
  rep.eps_additive = std::max({0.0, rep.additive_max, -rep.additive_min});
  rep.eps_degree = std::max({0.0, rep.additive_max, -rep.signless_min});
  constexpr double kTol = 1e-9;
  rep.pass_additive = rep.eps_additive <= eps_claimed + kTol;
  rep.pass_degree = rep.eps_degree <= eps_claimed + kTol;
  return rep;
}

}  // namespace specround::sparsify
