#pragma once

#include <vector>

#include "specround/instance.hpp"
#include "specround/linalg.hpp"

namespace specround::signing {

/// Signs s_i for the appended cost coordinate and the resulting vectors
/// u_i = (v_i ; s_i sqrt(c_i lambda / <c,x>)) in R^{n+1}.
struct SignedAugmentation {
  std::vector<int> signs;
  linalg::Matrix augmented;   ///< (n+1) x m, columns u_i
  double lambda = 0.0;
  double l = 0.0;             ///< max_i ||v_i||
  double achieved_norm = 0.0; ///< ||sum s_i w_i||
  double expected_sq_norm = 0.0;  ///< sum ||w_i||^2, the uniform-signing expectation
  /// Conditional expectation of ||sum s_i w_i||^2 after fixing signs 1..j
  /// (entry 0 is before any sign is fixed).
  std::vector<double> conditional;
};

/// Greedy conditional-expectation signing in index order, ties toward +1.
/// Throws DegenerateCosts when <c,x> = 0 and InvalidArgument when lambda <= 0.
SignedAugmentation derandomized_signing(const VectorInstance& inst, double lambda);

/// ||sum x_i u_i u_i^T||_op for the augmented vectors.
double augmented_moment_norm(const VectorInstance& inst, const SignedAugmentation& aug);

struct TwoSidedReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double cost = 0.0;
  double fractional_cost = 0.0;
  double cost_ratio = 0.0;
  double band = 0.0;  ///< factor * eps
  bool spectral_pass = false;
  bool cost_pass = false;
  bool pass = false;
};

/// Checks (1 - b) I <= sum z_i v_i v_i^T <= (1 + b) I and
/// |<c,z> - <c,x>| <= b <c,x> with b = factor * eps. z is zero-one of length m.
TwoSidedReport verify_two_sided(const VectorInstance& inst, const std::vector<int>& z, double eps,
                                double factor = 8.0);

}  // namespace specround::signing
