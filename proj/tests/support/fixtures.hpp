#pragma once

#include <cstdint>
#include <vector>

#include "specround/graph.hpp"
#include "specround/instance.hpp"

// Instance builders shared by unit tests, acceptance and benchmarks. They use
// std::mt19937_64 and Cholesky whitening so they do not depend on the code
// under test.
namespace specround::testing {

/// Gaussian vectors, x ~ U[x_lo, x_hi], c ~ U[c_lo, c_hi], whitened so that
/// sum x_i v_i v_i^T = I_n.
VectorInstance random_isotropic(int n, int m, std::uint64_t seed, double c_lo = 1.0, double c_hi = 2.0,
                                double x_lo = 0.05, double x_hi = 0.95);

/// Pairs sqrt(1 - e') e_i (x = 1, c = 0) and e_i (x = e', c = c_inf).
VectorInstance tight_pairs(int n, double eps_prime, double c_inf);

/// Complete graph on n vertices where every pair appears `copies` times with
/// x = 2k / (n (n - 1) copies), unit cost, vectors L_x^{+/2} b_e on 1-perp.
VectorInstance complete_graph_split(int n, double k, int copies);

/// n = 2 instance with m vectors at random angles, isotropic.
VectorInstance planar_instance(int m, std::uint64_t seed);

/// Random connected graph (spanning path plus extra random edges).
graph::Graph random_connected_graph(int n, int extra, std::uint64_t seed, double w_lo = 1.0, double w_hi = 1.0);

}  // namespace specround::testing
