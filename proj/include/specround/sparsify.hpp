#pragma once

#include <vector>

#include "specround/graph.hpp"

namespace specround::sparsify {

struct SelectionRecord {
  int t = 0;
  int edge = -1;
  double score = 0.0;        ///< <A_t, diag(L_G - m L_e, L+_G - m L+_e)>
  double bound = 0.0;        ///< -2 sqrt(2n) / (alpha m)
  double bound_sqrt_n = 0.0; ///< -2 sqrt(n) / (alpha m)
  double width = 0.0;        ///< alpha ||A^{1/4} F_t A^{1/4}||
  double trace_b = 0.0;      ///< tr of the Laplacian block of A_t
};

struct SparsifierCertificate {
  std::vector<int> edges;  ///< selected edge indices, in selection order
  int m = 0;
  int m_tilde = 0;
  double scale = 1.0;      ///< m / m_tilde
  int max_degree = 0;
  double eps = 0.0;
  double q = 0.0;
  double alpha = 0.0;
  int iterations = 0;
  double upper_residual = 0.0;  ///< lambda_max(s L_F - L_G) / d
  double lower_residual = 0.0;  ///< lambda_min(s L_F - L_G - 2 s D_F + 2 D_G) / d
  double width_constant = 0.0;  ///< max_t width / eps
  bool returned_input = false;  ///< m < 2n/eps^2, F = E
  std::vector<SelectionRecord> log;
};

struct SparsifyParams {
  double eps = 0.5;
  double q = 0.1;
  bool check_width = true;
};

/// Greedy regret-driven selection of ceil(n/eps^2) distinct edges. Edge
/// weights are ignored (every edge counts once).
SparsifierCertificate greedy_additive_sparsify(const graph::Graph& g, const SparsifyParams& params);

struct AdditiveReport {
  int m = 0;
  int m_tilde = 0;
  double scale = 0.0;
  int max_degree = 0;
  double additive_max = 0.0;    ///< lambda_max(s L_F - L_G) / d
  double additive_min = 0.0;    ///< lambda_min(s L_F - L_G) / d
  double signless_min = 0.0;    ///< lambda_min(L+_G - s L+_F) / d
  double eps_additive = 0.0;    ///< smallest eps with -eps d I <= s L_F - L_G <= eps d I
  double eps_degree = 0.0;         ///< smallest eps for the degree-corrected two-sided form
  double eps_claimed = 0.0;
  bool pass_additive = false;
  bool pass_degree = false;
};

/// Throws EmptySparsifier on empty F, InvalidArgument on repeated or
/// out-of-range indices.
AdditiveReport verify_additive(const graph::Graph& g, const std::vector<int>& f, double eps_claimed);

}  // namespace specround::sparsify
