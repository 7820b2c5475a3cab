#include "specround/netdesign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "specround/error.hpp"

namespace specround::netdesign {

using graph::Graph;
using linalg::Matrix;
using linalg::SymMatrix;

namespace {

constexpr int kExhaustiveCutLimit = 12;

void check_vertex(int v, int n, const char* what) {
  if (v < 0 || v >= n) {
    std::ostringstream os;
    os << what << " vertex " << v << " out of range";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

bool connected(const Graph& g) {
  const auto labels = graph::component_labels(g);
  return std::all_of(labels.begin(), labels.end(), [&](int l) { return l == labels.front(); });
}

double reff_or_inf(const Graph& g, const SymMatrix& lap, int u, int v) {
  const auto labels = graph::component_labels(g);
  if (labels[static_cast<std::size_t>(u)] != labels[static_cast<std::size_t>(v)])
    return std::numeric_limits<double>::infinity();
  return graph::effective_resistance(lap, u, v);
}

// Matrix tolerance for PSD comparisons of Laplacian-scale quantities.
double psd_tol(const SymMatrix& a) { return 1e-9 * std::max(1.0, linalg::op_norm(a)); }

}  // namespace

void NetworkDesignInstance::validate() const {
  const int n = g.num_vertices();
  for (const auto& e : g.edges())
    if (e.weight > 1.0) throw Error(ErrorKind::InvalidArgument, "fractional edge value exceeds 1");
  for (const auto& r : requirements) {
    check_vertex(r.u, n, "requirement");
    check_vertex(r.v, n, "requirement");
    if (!(r.f >= 0.0) || !std::isfinite(r.f)) throw Error(ErrorKind::InvalidArgument, "requirement must be nonnegative");
  }
  if (degree_bounds) {
    if (static_cast<int>(degree_bounds->size()) != n) throw Error(ErrorKind::InvalidArgument, "degree_bounds needs n entries");
    for (double b : *degree_bounds)
      if (!(b >= 0.0) || !std::isfinite(b)) throw Error(ErrorKind::InvalidArgument, "degree bound must be nonnegative");
  }
  for (const auto& r : reff_bounds) {
    check_vertex(r.u, n, "reff bound");
    check_vertex(r.v, n, "reff bound");
    if (!(r.r >= 0.0) || !std::isfinite(r.r)) throw Error(ErrorKind::InvalidArgument, "reff bound must be nonnegative");
  }
  if (spectral_lower && spectral_lower->dim() != n) throw Error(ErrorKind::DimensionError, "spectral_lower must be n x n");
  if (algebraic_connectivity && !(*algebraic_connectivity >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "algebraic connectivity bound must be nonnegative");
  auto check_rows = [&](const std::optional<LinearRows>& rows, const char* what) {
    if (!rows) return;
    if (rows->rows.size() != rows->rhs.size()) throw Error(ErrorKind::InvalidArgument, std::string(what) + " rows/rhs size mismatch");
    for (const auto& row : rows->rows) {
      if (static_cast<int>(row.size()) != g.num_edges())
        throw Error(ErrorKind::InvalidArgument, std::string(what) + " row length differs from m");
      for (double a : row)
        if (!(a >= 0.0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " rows must be nonnegative");
    }
  };
  check_rows(packing, "packing");
  check_rows(covering, "covering");
}

std::vector<Requirement> uniform_requirements(int n, double f) {
  std::vector<Requirement> out;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) out.push_back({u, v, f});
  return out;
}

VectorInstance graph_to_vectors(const NetworkDesignInstance& nd) {
  nd.validate();
  if (nd.g.num_vertices() < 2) throw Error(ErrorKind::InvalidArgument, "network needs at least two vertices");
  if (!connected(nd.g)) throw Error(ErrorKind::DisconnectedSupport, "support of x is not connected");
  const Matrix map = linalg::whitening_map(graph::laplacian(nd.g));
  const int m = nd.g.num_edges();
  VectorInstance inst;
  inst.vectors.resize(map.rows(), m);
  for (int e = 0; e < m; ++e) inst.vectors.col(e) = map * nd.g.incidence(e);
  inst.x = nd.g.weights();
  inst.c = nd.g.costs();
  inst.packing = nd.packing;
  inst.covering = nd.covering;
  const double err = inst.isotropy_error();
  if (!(err <= 1e-8)) {
    std::ostringstream os;
    os << "reduced instance not isotropic (error " << err << ")";
    throw Error(ErrorKind::NumericalFailure, os.str());
  }
  return inst;
}

ImplicationReport verify_spectral_implications(const NetworkDesignInstance& nd, const std::vector<double>& z,
                                               double eps_band) {
  const Graph& g = nd.g;
  const int n = g.num_vertices();
  if (static_cast<int>(z.size()) != g.num_edges()) throw Error(ErrorKind::DimensionError, "z length differs from m");
  ImplicationReport rep;
  rep.eps_band = eps_band;
  const Graph gz = g.with_weights(z);
  const SymMatrix lx = graph::laplacian(g);
  const SymMatrix lz = graph::laplacian(gz);

  // (i) L_z >= (1 - eps) L_x, measured on the range of L_x
  {
    FamilyCheck fc{"spectral", true, true, 0.0, ""};
    const Matrix map = linalg::whitening_map(lx);
    if (map.rows() > 0) {
      const linalg::Spectrum s = linalg::sym_eig(SymMatrix(map * lz.matrix() * map.transpose()));
      rep.spectral_min = s.min();
      rep.spectral_max = s.max();
      fc.residual = rep.spectral_min - (1.0 - eps_band);
      fc.pass = fc.residual >= -1e-9;
      fc.detail = "lambda_min(L_x^{+/2} L_z L_x^{+/2})";
    }
    rep.families.push_back(fc);
  }
  // (ii) effective resistances
  {
    FamilyCheck fc{"reff", !nd.reff_bounds.empty(), true, std::numeric_limits<double>::infinity(), ""};
    for (const auto& rb : nd.reff_bounds) {
      const double rz = reff_or_inf(gz, lz, rb.u, rb.v);
      const double res = (1.0 + 2.0 * eps_band) * rb.r - rz;
      fc.residual = std::min(fc.residual, res);
      if (res < -1e-9 * std::max(1.0, rb.r)) fc.pass = false;
    }
    if (!fc.applicable) fc.residual = 0.0;
    rep.families.push_back(fc);
  }
  // (iii) L_z >= (1 - eps) M
  {
    FamilyCheck fc{"spectral_lower", nd.spectral_lower.has_value(), true, 0.0, ""};
    if (nd.spectral_lower) {
      const SymMatrix diff = lz - *nd.spectral_lower * (1.0 - eps_band);
      fc.residual = linalg::lambda_min(diff);
      fc.pass = fc.residual >= -psd_tol(lz);
    }
    rep.families.push_back(fc);
  }
  // (iv) lambda_2(L_z) >= (1 - eps) lambda
  {
    FamilyCheck fc{"algebraic_connectivity", nd.algebraic_connectivity.has_value(), true, 0.0, ""};
    if (nd.algebraic_connectivity && n >= 2) {
      fc.residual = graph::algebraic_connectivity(gz) - (1.0 - eps_band) * *nd.algebraic_connectivity;
      fc.pass = fc.residual >= -psd_tol(lz);
    }
    rep.families.push_back(fc);
  }
  // (v) connectivity cuts
  {
    FamilyCheck fc{"connectivity", !nd.requirements.empty(), true, std::numeric_limits<double>::infinity(), ""};
    auto check_cut = [&](const std::vector<bool>& side) {
      double f = 0.0;
      for (const auto& r : nd.requirements)
        if (side[static_cast<std::size_t>(r.u)] != side[static_cast<std::size_t>(r.v)]) f = std::max(f, r.f);
      if (f <= 0.0) return;
      const double res = graph::cut_weight(gz, side) - (1.0 - eps_band) * f;
      fc.residual = std::min(fc.residual, res);
      if (res < -1e-9 * std::max(1.0, f)) fc.pass = false;
      ++rep.cuts_checked;
    };
    if (fc.applicable && n >= 2) {
      if (n <= kExhaustiveCutLimit) {
        rep.exhaustive_cuts = true;
        // every S not containing vertex n-1 and nonempty
        const std::uint32_t count = 1u << (n - 1);
        for (std::uint32_t mask = 1; mask < count; ++mask) {
          std::vector<bool> side(static_cast<std::size_t>(n), false);
          for (int v = 0; v < n - 1; ++v) side[static_cast<std::size_t>(v)] = (mask >> v) & 1u;
          check_cut(side);
        }
        fc.detail = "exhaustive";
      } else {
        for (int v = 0; v < n; ++v) {
          std::vector<bool> side(static_cast<std::size_t>(n), false);
          side[static_cast<std::size_t>(v)] = true;
          check_cut(side);
        }
        fc.detail = "singleton cuts only; general cuts implied by the spectral check";
      }
    }
    if (!std::isfinite(fc.residual)) fc.residual = 0.0;
    rep.families.push_back(fc);
  }
  // (vi) degree bounds, implied only under the upper spectral bound
  {
    FamilyCheck fc{"degree", false, true, std::numeric_limits<double>::infinity(), ""};
    if (nd.degree_bounds) {
      const bool implied = rep.spectral_max <= 1.0 + eps_band + 1e-9;
      fc.applicable = implied;
      const SymMatrix dz = graph::degree_matrix(gz);
      bool direct = true;
      for (int v = 0; v < n; ++v) {
        const double bound = (1.0 + eps_band) * (*nd.degree_bounds)[static_cast<std::size_t>(v)];
        const double res = bound - dz(v, v);
        fc.residual = std::min(fc.residual, res);
        if (res < -1e-9 * std::max(1.0, bound)) direct = false;
      }
      fc.pass = direct;
      fc.detail = implied ? "implied by L_z <= (1+eps) L_x" : "not implied (L_z exceeds (1+eps) L_x); reported only";
    }
    if (!std::isfinite(fc.residual)) fc.residual = 0.0;
    rep.families.push_back(fc);
  }
  rep.pass = std::all_of(rep.families.begin(), rep.families.end(),
                         [](const FamilyCheck& f) { return !f.applicable || f.pass; });
  return rep;
}

NetworkSolution round_network(const NetworkDesignInstance& nd, const rounding::SwapParams& params) {
  const VectorInstance inst = graph_to_vectors(nd);
  NetworkSolution sol;
  sol.certificate = rounding::exact_round(inst, params);
  sol.z = indicator(sol.certificate.selected, inst.m());
  std::vector<double> zd(sol.z.begin(), sol.z.end());
  sol.report = verify_spectral_implications(nd, zd, 1e-7);
  sol.cost = sol.certificate.cost;
  const double n = static_cast<double>(inst.n());
  sol.cost_bound = (1.0 + 6.0 * params.eps) * inst.fractional_cost() + 15.0 * n * inst.max_cost() / params.eps;
  sol.cost_within_bound = sol.cost <= sol.cost_bound;
  return sol;
}

}  // namespace specround::netdesign
