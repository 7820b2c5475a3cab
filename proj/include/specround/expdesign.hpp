#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "specround/graph.hpp"
#include "specround/instance.hpp"
#include "specround/linalg.hpp"
#include "specround/rounding.hpp"

namespace specround::expdesign {

enum class Objective { A, D, E, V, G };

Objective parse_objective(std::string_view tag);
std::string_view to_string(Objective tag);

/// Vectors and costs come from `instance`; its x is ignored by the solver.
/// v_rows (p x n) defines the V and G objectives; when absent V = I.
struct DesignProblem {
  VectorInstance instance;
  double budget = 0.0;
  Objective tag = Objective::A;
  std::optional<linalg::Matrix> v_rows;

  void validate() const;
};

/// f_A = tr(S^-1)/n, f_D = det(S)^(-1/n), f_E = 1/lambda_min(S),
/// f_V = tr(V S^-1 V^T), f_G = max_r (V S^-1 V^T)_rr. Singular S gives +inf.
double objective(Objective tag, const linalg::SymMatrix& sigma, const std::optional<linalg::Matrix>& v_rows = {});

/// (Sub)gradient G with respect to S; d f / d x_i = v_i^T G v_i.
linalg::SymMatrix objective_gradient(Objective tag, const linalg::SymMatrix& sigma,
                                     const std::optional<linalg::Matrix>& v_rows = {});

struct RelaxationParams {
  int iters = 500;
  double tol = 1e-6;
};

struct RelaxationResult {
  std::vector<double> x;
  double objective = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  ///< objective after each iteration
};

/// Conditional gradient over {x in [0,1]^m : <c,x> <= C}. Throws Infeasible
/// if no finite objective is reached.
RelaxationResult solve_relaxation(const DesignProblem& p, const RelaxationParams& params = {});

struct DesignRounding {
  std::vector<int> selected;
  double cost = 0.0;
  double budget = 0.0;
  double fractional_cost = 0.0;
  /// lambda_min of M_x^{+/2} M_z M_x^{+/2} on the range of M_x
  double lambda_ratio = 0.0;
  double objective_x = 0.0;
  double objective_z = 0.0;
  std::uint64_t seed_used = 0;
  int retries = 0;
  bool integral_input = false;
  rounding::RoundingCertificate certificate;
};

/// Scales y = (1 - 2 eps) x, whitens, and runs the randomized swap; retries
/// with seed + 1 (at most 5 times) when the budget is exceeded.
/// eps in (0, 1/2]. Throws BudgetTooSmall when C < 15 n c_inf / eps^2 and
/// UnluckyRun when every attempt exceeds the budget.
DesignRounding round_design(const DesignProblem& p, const std::vector<double>& x, const rounding::SwapParams& params);

/// lambda_2 maximization as E-design: v_e = Q^T b_e with Q an orthonormal
/// basis of the complement of the all-ones vector.
DesignProblem lambda2_problem(const graph::Graph& g, double budget);
/// Total effective resistance minimization as A-design on the same vectors.
DesignProblem total_reff_problem(const graph::Graph& g, double budget);

/// sum_{u<v} Reff(u,v) by pairwise evaluation.
double total_effective_resistance(const graph::Graph& g);
/// n tr(L^+)
double total_effective_resistance_trace(const graph::Graph& g);

}  // namespace specround::expdesign
