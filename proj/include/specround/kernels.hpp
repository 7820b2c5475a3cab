#pragma once

#include <span>

#include "specround/graph.hpp"
#include "specround/regret.hpp"

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version; every output element is computed by the same arithmetic in
// both, so results are bit-identical regardless of thread count.
namespace specround::kernels {

/// Worker cap from SPECROUND_THREADS (unset or invalid: OpenMP default).
int thread_limit();
bool openmp_enabled();

/// a[i] = v_i^T A v_i and ah[i] = v_i^T A^{1/2} v_i for every column v_i.
void leverage_scan_serial(const regret::ActionMatrix& am, const linalg::Matrix& vectors, std::span<double> a,
                          std::span<double> ah);
void leverage_scan_parallel(const regret::ActionMatrix& am, const linalg::Matrix& vectors, std::span<double> a,
                            std::span<double> ah);
void leverage_scan(const regret::ActionMatrix& am, const linalg::Matrix& vectors, std::span<double> a,
                   std::span<double> ah);

/// Sparsifier selection score of every edge:
///   base - m (B_uu + B_vv - 2 B_uv) - m (C_uu + C_vv + 2 C_uv)
/// where B, C are the Laplacian and signless blocks of the action matrix and
/// base = <B, L_G> + <C, L+_G>.
void edge_scores_serial(const linalg::Matrix& lap_block, const linalg::Matrix& signless_block, double base,
                        double m, std::span<const graph::Edge> edges, std::span<double> out);
void edge_scores_parallel(const linalg::Matrix& lap_block, const linalg::Matrix& signless_block, double base,
                          double m, std::span<const graph::Edge> edges, std::span<double> out);
void edge_scores(const linalg::Matrix& lap_block, const linalg::Matrix& signless_block, double base, double m,
                 std::span<const graph::Edge> edges, std::span<double> out);

}  // namespace specround::kernels
