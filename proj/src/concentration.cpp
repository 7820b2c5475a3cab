#include "specround/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "specround/error.hpp"
#include "specround/kernels.hpp"
#include "specround/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specround::concentration {

namespace {

constexpr double kHypTol = 1e-12;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void violation(const std::string& what) { throw Error(ErrorKind::HypothesisViolation, what); }

int max_items(const BirthDeathChain& c) {
  if (c.boost == 0.0) return c.items;
  return static_cast<int>(std::lround(c.items + c.boost / c.p));
}

double run_chain(const BirthDeathChain& c, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  int n = 0;
  for (int i = 0; i < c.items; ++i) n += rng.uniform() < c.p ? 1 : 0;
  for (int t = 0; t < c.horizon; ++t) {
    const double add = ((c.items - n) * c.p + c.boost) / c.k;
    const double rem = n * (1.0 - c.p) / c.k;
    const double u = rng.uniform();
    if (u < add) {
      ++n;
    } else if (u < add + rem) {
      --n;
    }
  }
  return n - c.items * c.p;
}

}  // namespace

void SelfAdjustingParams::validate() const {
  std::ostringstream os;
  if (!(gamma > 0.0 && gamma <= 0.5)) os << "gamma must lie in (0, 1/2]; ";
  if (!(beta_u >= 0.0) || !std::isfinite(beta_u)) os << "beta_u must be >= 0; ";
  if (!(beta_l >= 0.0) || !std::isfinite(beta_l)) os << "beta_l must be >= 0; ";
  if (!(sigma > 0.0) || !std::isfinite(sigma)) os << "sigma must be > 0; ";
  if (!(eta > 0.0) || !std::isfinite(eta)) os << "eta must be > 0; ";
  if (!os.str().empty()) throw Error(ErrorKind::InvalidParams, os.str());
}

double self_adjusting_upper_bound(const SelfAdjustingParams& p) {
  p.validate();
  return clamp01(std::exp(-p.eta * p.eta / (4.0 * (p.sigma + p.beta_u) / p.gamma + 2.0 * p.eta)));
}

double self_adjusting_lower_bound(const SelfAdjustingParams& p) {
  p.validate();
  return clamp01(std::exp(-p.eta * p.eta / (4.0 * p.sigma / p.gamma + p.eta)));
}

double freedman_bound(double delta, double sigma_sq, double r) {
  if (!(delta >= 0.0) || !(sigma_sq >= 0.0) || !(r >= 0.0))
    throw Error(ErrorKind::InvalidParams, "Freedman bound needs delta, sigma^2, R >= 0");
  if (delta == 0.0) return 1.0;
  const double denom = sigma_sq + r * delta / 3.0;
  if (denom == 0.0) return 0.0;
  return clamp01(std::exp(-(delta * delta / 2.0) / denom));
}

SelfAdjustingParams BirthDeathChain::params(double eta) const {
  SelfAdjustingParams sp;
  sp.gamma = 1.0 / k;
  sp.beta_u = boost / k;
  sp.beta_l = 0.0;
  const double derived = (2.0 * items * p + boost) / k;
  sp.sigma = sigma_override > 0.0 ? sigma_override : derived;
  sp.eta = eta;
  return sp;
}

void BirthDeathChain::check_hypotheses() const {
  if (items < 0 || !(p >= 0.0 && p <= 1.0) || !(boost >= 0.0) || horizon < 0)
    violation("chain parameters out of range");
  if (!(k >= 2.0)) violation("k must be >= 2 so that gamma <= 1/2");
  if (boost > 0.0) {
    if (!(p > 0.0)) violation("boost needs p > 0");
    const double top = items + boost / p;
    if (std::abs(top - std::round(top)) > 1e-9) violation("M + B/p must be an integer so the chain stays in range");
  }
  const SelfAdjustingParams sp = params(1.0);
  const double derived = (2.0 * items * p + boost) / k;
  if (sigma_override > 0.0 && sigma_override < derived) violation("sigma override below the derived variance bound");
  sp.validate();
  const double mean = items * p;
  for (int n = 0; n <= max_items(*this); ++n) {
    const double add = ((items - n) * p + boost) / k;
    const double rem = n * (1.0 - p) / k;
    if (add < -kHypTol || rem < -kHypTol || add + rem > 1.0 + kHypTol) {
      std::ostringstream os;
      os << "step probabilities invalid at N = " << n;
      violation(os.str());
    }
    const double y = n - mean;
    const double drift = add - rem;
    if (drift > -sp.gamma * y + sp.beta_u + kHypTol || drift < -sp.gamma * y - sp.beta_l - kHypTol) {
      std::ostringstream os;
      os << "self-adjusting drift fails at N = " << n;
      violation(os.str());
    }
    if (add + rem > sp.gamma * y + sp.sigma + kHypTol) {
      std::ostringstream os;
      os << "variance bound fails at N = " << n;
      violation(os.str());
    }
  }
  // E[exp(a Y_0)] = (1 - p + p e^a)^M e^{-a M p} <= exp(a^2 sigma / gamma) on [-1, 1]
  for (int i = -200; i <= 200; ++i) {
    const double a = i / 200.0;
    const double log_mgf = items * std::log1p(p * std::expm1(a)) - a * mean;
    if (log_mgf > a * a * sp.sigma / sp.gamma + kHypTol) {
      std::ostringstream os;
      os << "initial MGF condition fails at a = " << a;
      violation(os.str());
    }
  }
}

std::vector<double> simulate_serial(const BirthDeathChain& chain, long trials, std::uint64_t seed) {
  std::vector<double> out(static_cast<std::size_t>(trials));
  for (long i = 0; i < trials; ++i) out[static_cast<std::size_t>(i)] = run_chain(chain, seed, static_cast<std::uint64_t>(i) + 1);
  return out;
}

std::vector<double> simulate_parallel(const BirthDeathChain& chain, long trials, std::uint64_t seed) {
  std::vector<double> out(static_cast<std::size_t>(trials));
#ifdef _OPENMP
  const int threads = kernels::thread_limit();
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (long i = 0; i < trials; ++i) out[static_cast<std::size_t>(i)] = run_chain(chain, seed, static_cast<std::uint64_t>(i) + 1);
  return out;
}

SimulationReport simulate_and_check(const BirthDeathChain& chain, const std::vector<double>& etas, long trials,
                                    std::uint64_t seed) {
  if (trials <= 0) throw Error(ErrorKind::InvalidArgument, "trials must be positive");
  chain.check_hypotheses();
  SimulationReport rep;
  rep.chain = chain;
  rep.trials = trials;
  rep.seed = seed;
  const std::vector<double> finals = simulate_parallel(chain, trials, seed);
  const double nt = static_cast<double>(trials);
  rep.pass = true;
  for (double eta : etas) {
    const SelfAdjustingParams sp = chain.params(eta);
    TailRow row;
    row.eta = eta;
    row.bound_upper = self_adjusting_upper_bound(sp);
    row.bound_lower = self_adjusting_lower_bound(sp);
    const double hi = sp.beta_u / sp.gamma + eta;
    const double lo = -sp.beta_l / sp.gamma - eta;
    long up = 0, down = 0;
    for (double y : finals) {
      if (y >= hi) ++up;
      if (y <= lo) ++down;
    }
    row.empirical_upper = up / nt;
    row.empirical_lower = down / nt;
    const double se_u = std::sqrt(row.empirical_upper * (1.0 - row.empirical_upper) / nt);
    const double se_l = std::sqrt(row.empirical_lower * (1.0 - row.empirical_lower) / nt);
    row.pass = row.empirical_upper <= row.bound_upper + 3.0 * se_u && row.empirical_lower <= row.bound_lower + 3.0 * se_l;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

void write_report_csv(std::ostream& out, const SimulationReport& report) {
  out << "eta,empirical_upper,bound_upper,empirical_lower,bound_lower\n";
  char buf[256];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.eta, r.empirical_upper, r.bound_upper,
                  r.empirical_lower, r.bound_lower);
    out << buf;
  }
}

DriftReport check_rounding_drift(const rounding::RoundingCertificate& cert) {
  const auto& run = cert.run;
  if (!(run.max_cost > 0.0)) throw Error(ErrorKind::DegenerateCosts, "c_inf = 0, cost process is constant");
  if (!(run.k > 0.0) || !(run.eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "certificate lacks run parameters");
  DriftReport rep;
  const double cinf = run.max_cost;
  rep.gamma = 1.0 / run.k;
  rep.beta_u = 14.0 * run.n / (run.k * run.eps);
  rep.beta_l = 0.0;
  rep.sigma = 2.0 * (run.fractional_cost + run.n * cinf / run.eps) / (run.k * cinf);
  rep.iterations = static_cast<long>(cert.history.size());
  rep.worst_lower = rep.worst_upper = rep.worst_variance = std::numeric_limits<double>::infinity();
  for (const auto& rec : cert.history) {
    const double y = (rec.cost - run.fractional_cost) / cinf;
    const double ex = rec.expected_cost_change / cinf;
    const double ex2 = rec.expected_sq_cost_change / (cinf * cinf);
    rep.worst_lower = std::min(rep.worst_lower, ex - (-rep.gamma * y - rep.beta_l));
    rep.worst_upper = std::min(rep.worst_upper, (-rep.gamma * y + rep.beta_u) - ex);
    rep.worst_variance = std::min(rep.worst_variance, (rep.gamma * y + rep.sigma) - ex2);
  }
  if (cert.history.empty()) rep.worst_lower = rep.worst_upper = rep.worst_variance = 0.0;
  constexpr double kTol = 1e-9;
  rep.pass = rep.worst_lower >= -kTol && rep.worst_upper >= -kTol && rep.worst_variance >= -kTol;
  return rep;
}

}  // namespace specround::concentration
