#pragma once

#include <cstdint>
#include <vector>

#include "specround/error.hpp"
#include "specround/instance.hpp"
#include "specround/regret.hpp"
#include "specround/rng.hpp"

namespace specround::rounding {

inline constexpr int kEmpty = -1;
inline constexpr double kDefaultQCap = 4.0;
inline constexpr long kRebuildInterval = 100;

/// One swap iteration. Probabilities and expectations are taken from the
/// exact sampling distributions of that iteration.
struct IterationRecord {
  long t = 0;
  int removed = kEmpty;
  int added = kEmpty;
  double delta_plus = 0.0;
  double delta_minus = 0.0;
  double lambda_min = 0.0;  ///< lambda_min(Z_{t-1})
  double cost = 0.0;        ///< c(S_{t-1})
  double expected_cost_change = 0.0;
  double expected_sq_cost_change = 0.0;
  double removal_mass = 0.0;
  double addition_mass = 0.0;
  double removed_leverage = 0.0;  ///< 2 alpha <v v^T, A^{1/2}> of the removed vector
};

/// Parameters of the swap run the history belongs to (for exact rounding
/// this is the inner run on the reduced instance).
struct SwapRunInfo {
  int n = 0;
  int m = 0;
  double eps = 0.0;
  double alpha = 0.0;
  double k = 0.0;
  double fractional_cost = 0.0;
  double max_cost = 0.0;
  long iteration_cap = 0;
};

struct RowResidual {
  double z_value = 0.0;
  double x_value = 0.0;
  double rhs = 0.0;
};

struct RoundingCertificate {
  std::vector<int> selected;
  double lambda_min = 0.0;
  double cost = 0.0;
  long iterations = 0;
  /// lambda_min(Z_tau) - (sum_t Delta_t - 2 sqrt(n)/alpha)
  double regret_slack = 0.0;
  double sum_delta = 0.0;
  double regret_offset = 0.0;
  std::vector<RowResidual> packing;
  std::vector<RowResidual> covering;
  SwapRunInfo run;
  /// Exact rounding only: indices forced in because x_i/(1-2 eps) > 1.
  std::vector<int> big;
  bool range_collapse = false;
  std::vector<IterationRecord> history;
};

class IterationCapExceeded : public Error {
 public:
  IterationCapExceeded(const std::string& what, RoundingCertificate partial)
      : Error(ErrorKind::IterationCapExceeded, what), partial_(std::move(partial)) {}
  const RoundingCertificate& partial() const noexcept { return partial_; }

 private:
  RoundingCertificate partial_;
};

struct SwapParams {
  double eps = 0.2;
  std::uint64_t seed = 0;
  double q_cap = kDefaultQCap;
  bool record_history = true;
  /// Hard iteration limit overriding q_cap k / eps when positive.
  long max_iterations = 0;
};

/// Algorithm state: current set S (membership mask), Z = sum_{i in S} v v^T.
struct SwapState {
  std::vector<char> in_set;
  linalg::SymMatrix z;
  long t = 0;
  CounterRng rng{0};
  std::vector<IterationRecord> history;

  std::vector<int> selected() const;
};

/// Removal and addition laws of one iteration; the empty outcome absorbs the
/// remaining mass. removal[i] is zero outside S' and addition[j] is zero on S.
struct SwapDistributions {
  std::vector<double> removal;
  std::vector<double> addition;
  double removal_empty = 1.0;
  double addition_empty = 1.0;
  std::vector<double> a;   ///< v_i^T A v_i
  std::vector<double> ah;  ///< v_i^T A^{1/2} v_i
  /// sum over all j in [m] of x_j (1 + 2 alpha ah_j)/k (well-definedness)
  double full_addition_mass = 0.0;
};

SwapDistributions swap_step_distributions(const SwapState& state, const VectorInstance& inst,
                                          const regret::ActionMatrix& am, double alpha, double k);

/// Samples an index by inverse CDF over index order; kEmpty when u falls in
/// the remainder.
int sample_index(const std::vector<double>& probs, double u);

/// Iterative randomized swapping: returns S with lambda_min(sum_S v v^T) >=
/// 1 - 2 eps. Requires an isotropic instance and eps in (0, 1/2).
RoundingCertificate randomized_swap(const VectorInstance& inst, const SwapParams& params);

/// Exact one-sided rounding: lambda_min(sum_S v v^T) >= 1 (up to 1e-7).
/// Requires an isotropic instance and eps in (0, 1/4).
RoundingCertificate exact_round(const VectorInstance& inst, const SwapParams& params);

/// Packing/covering row values of a selection (empty when the rows are absent).
std::vector<RowResidual> row_residuals(const std::optional<LinearRows>& rows, const std::vector<int>& selected,
                                       const std::vector<double>& x);

}  // namespace specround::rounding
