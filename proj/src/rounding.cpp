#include "specround/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specround/kernels.hpp"

namespace specround::rounding {

using linalg::SymMatrix;
using linalg::Vector;

namespace {

constexpr double kMassTol = 1e-12;
constexpr double kDriftTol = 1e-8;
constexpr double kRegretTol = 1e-7;
constexpr double kExactTol = 1e-7;

void check_eps(double eps, double upper, const char* what) {
  if (!(eps > 0.0 && eps < upper)) {
    std::ostringstream os;
    os << what << " needs eps in (0, " << upper << "), got " << eps;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

void require_isotropic(const VectorInstance& inst) {
  const double err = inst.isotropy_error();
  if (!(err <= 1e-8)) {
    std::ostringstream os;
    os << "||sum x v v^T - I||_op = " << err << " exceeds 1e-8";
    throw Error(ErrorKind::NotIsotropic, os.str());
  }
}

void check_mass(double p, const char* what) {
  if (!(p >= -kMassTol && p <= 1.0 + kMassTol)) {
    std::ostringstream os;
    os << what << " probability mass " << p << " outside [0,1]";
    throw Error(ErrorKind::NumericalFailure, os.str());
  }
}

}  // namespace

std::vector<int> SwapState::selected() const {
  std::vector<int> s;
  for (std::size_t i = 0; i < in_set.size(); ++i)
    if (in_set[i]) s.push_back(static_cast<int>(i));
  return s;
}

SwapDistributions swap_step_distributions(const SwapState& state, const VectorInstance& inst,
                                          const regret::ActionMatrix& am, double alpha, double k) {
  const auto m = static_cast<std::size_t>(inst.m());
  if (state.in_set.size() != m) throw Error(ErrorKind::DimensionError, "state does not match instance");
  SwapDistributions d;
  d.a.resize(m);
  d.ah.resize(m);
  kernels::leverage_scan(am, inst.vectors, d.a, d.ah);
  d.removal.assign(m, 0.0);
  d.addition.assign(m, 0.0);
  double removal_total = 0.0;
  double addition_total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lev = 2.0 * alpha * d.ah[i];
    const double add = inst.x[i] * (1.0 + lev) / k;
    d.full_addition_mass += add;
    if (state.in_set[i]) {
      if (lev < 0.5) {
        d.removal[i] = (1.0 - inst.x[i]) * (1.0 - lev) / k;
        check_mass(d.removal[i], "removal");
        removal_total += d.removal[i];
      }
    } else {
      d.addition[i] = add;
      check_mass(d.addition[i], "addition");
      addition_total += d.addition[i];
    }
  }
  check_mass(removal_total, "total removal");
  check_mass(addition_total, "total addition");
  if (d.full_addition_mass > 1.0 + kMassTol) {
    std::ostringstream os;
    os << "addition law ill-defined: sum_j x_j(1+2 alpha ah_j)/k = " << d.full_addition_mass;
    throw Error(ErrorKind::NumericalFailure, os.str());
  }
  d.removal_empty = std::max(0.0, 1.0 - removal_total);
  d.addition_empty = std::max(0.0, 1.0 - addition_total);
  return d;
}

int sample_index(const std::vector<double>& probs, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return kEmpty;
}

std::vector<RowResidual> row_residuals(const std::optional<LinearRows>& rows, const std::vector<int>& selected,
                                       const std::vector<double>& x) {
  std::vector<RowResidual> out;
  if (!rows) return out;
  for (std::size_t r = 0; r < rows->rows.size(); ++r) {
    const auto& row = rows->rows[r];
    RowResidual res;
    res.rhs = rows->rhs[r];
    for (int i : selected) res.z_value += row[static_cast<std::size_t>(i)];
    for (std::size_t i = 0; i < row.size(); ++i) res.x_value += row[i] * x[i];
    out.push_back(res);
  }
  return out;
}

RoundingCertificate randomized_swap(const VectorInstance& inst, const SwapParams& params) {
  inst.validate();
  check_eps(params.eps, 0.5, "randomized swap");
  if (!(params.q_cap >= 2.0)) throw Error(ErrorKind::InvalidArgument, "q_cap must be at least 2");
  require_isotropic(inst);

  const double eps = params.eps;
  const auto n = static_cast<double>(inst.n());
  const auto m = static_cast<std::size_t>(inst.m());
  const double alpha = std::sqrt(n) / eps;
  const double k = static_cast<double>(m) + 2.0 * n / eps;
  const double target = 1.0 - 2.0 * eps;

  RoundingCertificate cert;
  cert.run = {static_cast<int>(inst.n()), static_cast<int>(m), eps, alpha, k, inst.fractional_cost(), inst.max_cost(),
              params.max_iterations > 0 ? params.max_iterations
                                        : static_cast<long>(std::ceil(params.q_cap * k / eps))};
  cert.regret_offset = 2.0 * std::sqrt(n) / alpha;

  SwapState state;
  state.rng = CounterRng(params.seed);
  state.in_set.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) state.in_set[i] = state.rng.uniform() < inst.x[i] ? 1 : 0;
  state.z = inst.selection_moment(state.selected());
  double cost = inst.selection_cost(state.selected());

  auto finish = [&](RoundingCertificate& c) {
    c.selected = state.selected();
    c.iterations = state.t;
    c.cost = inst.selection_cost(c.selected);
    c.lambda_min = linalg::lambda_min(inst.selection_moment(c.selected));
    c.regret_slack = c.lambda_min - (c.sum_delta - c.regret_offset);
    c.packing = row_residuals(inst.packing, c.selected, inst.x);
    c.covering = row_residuals(inst.covering, c.selected, inst.x);
    c.history = std::move(state.history);
  };

  while (true) {
    linalg::Spectrum spec = linalg::sym_eig(state.z);
    const double lam = spec.min();
    if (lam >= target) break;
    if (state.t >= cert.run.iteration_cap) {
      finish(cert);
      std::ostringstream os;
      os << "no certificate after " << state.t << " iterations (cap q k/eps = " << cert.run.iteration_cap
         << "), lambda_min = " << lam;
      throw IterationCapExceeded(os.str(), std::move(cert));
    }
    const regret::ActionMatrix am = regret::compute_action_matrix(std::move(spec), alpha);
    const SwapDistributions dist = swap_step_distributions(state, inst, am, alpha, k);

    IterationRecord rec;
    rec.t = state.t + 1;
    rec.lambda_min = lam;
    rec.cost = cost;
    rec.removal_mass = 1.0 - dist.removal_empty;
    rec.addition_mass = 1.0 - dist.addition_empty;
    for (std::size_t i = 0; i < m; ++i) {
      rec.expected_cost_change += dist.addition[i] * inst.c[i] - dist.removal[i] * inst.c[i];
      // i_t and j_t are independent; the cross term enters through c_j c_i.
      rec.expected_sq_cost_change += (dist.addition[i] + dist.removal[i]) * inst.c[i] * inst.c[i];
    }
    double e_add = 0.0, e_rem = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      e_add += dist.addition[i] * inst.c[i];
      e_rem += dist.removal[i] * inst.c[i];
    }
    rec.expected_sq_cost_change -= 2.0 * e_add * e_rem;

    const int i_t = sample_index(dist.removal, state.rng.uniform());
    const int j_t = sample_index(dist.addition, state.rng.uniform());
    rec.removed = i_t;
    rec.added = j_t;
    if (j_t != kEmpty) {
      const auto j = static_cast<std::size_t>(j_t);
      rec.delta_plus = dist.a[j] / (1.0 + 2.0 * alpha * dist.ah[j]);
      state.in_set[j] = 1;
      state.z.add_outer(inst.vectors.col(j_t), 1.0);
      cost += inst.c[j];
    }
    if (i_t != kEmpty) {
      const auto i = static_cast<std::size_t>(i_t);
      rec.removed_leverage = 2.0 * alpha * dist.ah[i];
      rec.delta_minus = dist.a[i] / (1.0 - rec.removed_leverage);
      state.in_set[i] = 0;
      state.z.add_outer(inst.vectors.col(i_t), -1.0);
      cost -= inst.c[i];
    }
    cert.sum_delta += rec.delta_plus - rec.delta_minus;
    ++state.t;
    if (params.record_history) state.history.push_back(rec);

    if (state.t % kRebuildInterval == 0) {
      SymMatrix fresh = inst.selection_moment(state.selected());
      const double drift = (fresh.matrix() - state.z.matrix()).norm();
      if (drift > kDriftTol) {
        std::ostringstream os;
        os << "accumulated Z drifted " << drift << " from its rebuild at t = " << state.t;
        throw Error(ErrorKind::NumericalFailure, os.str());
      }
      state.z = std::move(fresh);
      cost = inst.selection_cost(state.selected());
    }
  }

  finish(cert);
  if (cert.regret_slack < -kRegretTol) {
    std::ostringstream os;
    os << "regret certificate violated: slack " << cert.regret_slack;
    throw Error(ErrorKind::CertificateViolation, os.str());
  }
  if (cert.lambda_min < target - 1e-9) {
    std::ostringstream os;
    os << "returned set has lambda_min " << cert.lambda_min << " < 1 - 2 eps";
    throw Error(ErrorKind::CertificateViolation, os.str());
  }
  return cert;
}

RoundingCertificate exact_round(const VectorInstance& inst, const SwapParams& params) {
  inst.validate();
  check_eps(params.eps, 0.25, "exact rounding");
  require_isotropic(inst);

  const double scale = 1.0 - 2.0 * params.eps;
  const auto m = static_cast<std::size_t>(inst.m());
  std::vector<int> big;
  std::vector<int> small;
  for (std::size_t i = 0; i < m; ++i) {
    (inst.x[i] / scale > 1.0 ? big : small).push_back(static_cast<int>(i));
  }

  // Reduced instance: y = x/(1-2eps), u = sqrt(1-2eps) v on the small indices,
  // whitened against its own moment sum_small y u u^T = I - Z_big.
  VectorInstance reduced = inst.restrict_to(small);
  for (std::size_t k = 0; k < small.size(); ++k) reduced.x[k] = std::min(1.0, reduced.x[k] / scale);
  reduced.vectors *= std::sqrt(scale);
  const SymMatrix residual_moment = reduced.moment();
  const linalg::Matrix map = linalg::whitening_map(residual_moment);

  RoundingCertificate cert;
  std::vector<int> selected = big;
  if (small.empty() || map.rows() == 0) {
    cert.range_collapse = false;
    for (int i : small)
      if (inst.x[static_cast<std::size_t>(i)] > 0.0) cert.range_collapse = map.rows() == 0;
    cert.run.n = 0;
  } else {
    reduced.vectors = map * reduced.vectors;
    RoundingCertificate inner;
    try {
      inner = randomized_swap(reduced, params);
    } catch (const IterationCapExceeded& e) {
      RoundingCertificate partial = e.partial();
      partial.big = big;
      for (int& i : partial.selected) i = small[static_cast<std::size_t>(i)];
      partial.selected.insert(partial.selected.end(), big.begin(), big.end());
      std::sort(partial.selected.begin(), partial.selected.end());
      throw IterationCapExceeded(e.what(), std::move(partial));
    }
    for (int i : inner.selected) selected.push_back(small[static_cast<std::size_t>(i)]);
    cert.iterations = inner.iterations;
    cert.regret_slack = inner.regret_slack;
    cert.sum_delta = inner.sum_delta;
    cert.regret_offset = inner.regret_offset;
    cert.run = inner.run;
    cert.history = std::move(inner.history);
  }
  std::sort(selected.begin(), selected.end());
  cert.selected = std::move(selected);
  cert.big = std::move(big);
  cert.cost = inst.selection_cost(cert.selected);
  cert.lambda_min = linalg::lambda_min(inst.selection_moment(cert.selected));
  cert.packing = row_residuals(inst.packing, cert.selected, inst.x);
  cert.covering = row_residuals(inst.covering, cert.selected, inst.x);
  if (cert.lambda_min < 1.0 - kExactTol) {
    std::ostringstream os;
    os << "exact rounding produced lambda_min " << cert.lambda_min << " < 1 - 1e-7";
    throw Error(ErrorKind::CertificateViolation, os.str());
  }
  return cert;
}

}  // namespace specround::rounding
