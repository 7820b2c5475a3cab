#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "specround/instance.hpp"
#include "specround/rounding.hpp"

namespace specround::concentration {

struct SelfAdjustingParams {
  double gamma = 0.5;
  double beta_u = 0.0;
  double beta_l = 0.0;
  double sigma = 1.0;
  double eta = 1.0;

  /// Throws InvalidParams unless gamma in (0,1/2], betas >= 0, sigma > 0, eta > 0.
  void validate() const;
};

/// Pr[Y_t >= beta_u/gamma + eta] <= exp(-eta^2 / (4(sigma + beta_u)/gamma + 2 eta))
double self_adjusting_upper_bound(const SelfAdjustingParams& p);
/// Pr[Y_t <= -beta_l/gamma - eta] <= exp(-eta^2 / (4 sigma/gamma + eta))
double self_adjusting_lower_bound(const SelfAdjustingParams& p);
/// exp(-(delta^2/2) / (sigma_sq + R delta / 3))
double freedman_bound(double delta, double sigma_sq, double r);

/// Birth-death chain on N in {0..M}: each step adds one item with
/// probability ((M - N) p + B)/k and otherwise removes one with probability
/// N (1 - p)/k. Y = N - M p, N_0 ~ Binomial(M, p). The exact step laws give
/// gamma = 1/k, beta_u = B/k, beta_l = 0, sigma = (2 M p + B)/k.
struct BirthDeathChain {
  int items = 40;       ///< M
  double p = 0.5;
  double k = 80.0;
  double boost = 0.0;   ///< B
  int horizon = 200;
  double sigma_override = 0.0;  ///< used when > 0; must dominate the derived sigma

  SelfAdjustingParams params(double eta) const;
  /// Checks step probabilities, bounded difference, drift, variance and the
  /// initial MGF condition exactly. Throws HypothesisViolation.
  void check_hypotheses() const;
};

struct TailRow {
  double eta = 0.0;
  double empirical_upper = 0.0;
  double bound_upper = 0.0;
  double empirical_lower = 0.0;
  double bound_lower = 0.0;
  bool pass = false;
};

struct SimulationReport {
  BirthDeathChain chain;
  long trials = 0;
  std::uint64_t seed = 0;
  std::vector<TailRow> rows;
  bool pass = false;
};

/// Final value Y_T of `trials` independent chains; trial i uses the stream
/// (seed, i + 1) so results do not depend on the thread count.
std::vector<double> simulate_serial(const BirthDeathChain& chain, long trials, std::uint64_t seed);
std::vector<double> simulate_parallel(const BirthDeathChain& chain, long trials, std::uint64_t seed);

/// Pass per row iff empirical <= bound + 3 sqrt(p_hat (1 - p_hat) / trials)
/// on both tails.
SimulationReport simulate_and_check(const BirthDeathChain& chain, const std::vector<double>& etas, long trials,
                                    std::uint64_t seed);

void write_report_csv(std::ostream& out, const SimulationReport& report);

/// Per-iteration check of the rounding cost process Y_t = (c(S_t) - <c,x>)/c_inf
/// against the self-adjusting hypotheses, using the exact expectations logged
/// in the history.
struct DriftReport {
  double gamma = 0.0;
  double beta_u = 0.0;
  double beta_l = 0.0;
  double sigma = 0.0;
  long iterations = 0;
  double worst_lower = 0.0;     ///< min over t of E[X] - (-gamma Y - beta_l)
  double worst_upper = 0.0;     ///< min over t of (-gamma Y + beta_u) - E[X]
  double worst_variance = 0.0;  ///< min over t of (gamma Y + sigma) - E[X^2]
  bool pass = false;
};

DriftReport check_rounding_drift(const rounding::RoundingCertificate& cert);

}  // namespace specround::concentration
