#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specround/graph.hpp"
#include "specround/instance.hpp"
#include "specround/rounding.hpp"

namespace specround::netdesign {

struct Requirement {
  int u = 0;
  int v = 0;
  double f = 0.0;
};

struct ReffBound {
  int u = 0;
  int v = 0;
  double r = 0.0;
};

/// Graph weights hold the fractional solution x_e, costs hold c_e.
struct NetworkDesignInstance {
  graph::Graph g;
  std::vector<Requirement> requirements;
  std::optional<std::vector<double>> degree_bounds;
  std::vector<ReffBound> reff_bounds;
  std::optional<linalg::SymMatrix> spectral_lower;
  std::optional<double> algebraic_connectivity;
  std::optional<LinearRows> packing;
  std::optional<LinearRows> covering;

  /// Throws InvalidArgument on x outside [0,1], bad vertex ids, negative
  /// bounds or malformed rows.
  void validate() const;
};

/// f_{uv} = f for every unordered pair.
std::vector<Requirement> uniform_requirements(int n, double f);

/// v_e = L_x^{+/2} b_e in an orthonormal basis of the range of L_x (dimension
/// n-1). Throws DisconnectedSupport if the positive-weight support is not
/// connected.
VectorInstance graph_to_vectors(const NetworkDesignInstance& nd);

struct FamilyCheck {
  std::string name;
  bool applicable = false;
  bool pass = true;
  double residual = 0.0;  ///< worst (achieved - required); negative means violated
  std::string detail;
};

struct ImplicationReport {
  double eps_band = 0.0;
  double spectral_min = 0.0;  ///< lambda_min of L_x^{+/2} L_z L_x^{+/2} on the range
  double spectral_max = 0.0;
  int cuts_checked = 0;
  bool exhaustive_cuts = false;
  std::vector<FamilyCheck> families;
  bool pass = true;
};

/// Checks the constraint families implied by L_z >= (1 - eps_band) L_x:
/// spectral domination, effective-resistance bounds, the spectral lower bound
/// M, algebraic connectivity, connectivity cuts (exhaustive for n <= 12) and,
/// when L_z <= (1 + eps_band) L_x also holds, degree bounds. z holds per-edge
/// multiplicities.
ImplicationReport verify_spectral_implications(const NetworkDesignInstance& nd, const std::vector<double>& z,
                                               double eps_band = 1e-7);

struct NetworkSolution {
  std::vector<int> z;  ///< zero-one per edge
  rounding::RoundingCertificate certificate;
  ImplicationReport report;
  double cost = 0.0;
  double cost_bound = 0.0;  ///< (1 + 6 eps) <c,x> + 15 n c_inf / eps
  bool cost_within_bound = false;
};

NetworkSolution round_network(const NetworkDesignInstance& nd, const rounding::SwapParams& params);

}  // namespace specround::netdesign
