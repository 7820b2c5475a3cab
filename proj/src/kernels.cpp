#include "specround/kernels.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "specround/error.hpp"

namespace specround::kernels {

namespace {

// Below this many items the fork/join overhead dominates.
constexpr std::ptrdiff_t kParallelThreshold = 256;

inline void leverage_one(const linalg::Matrix& basis_t, const linalg::Vector& w, const linalg::Vector& wh,
                         const linalg::Matrix& vectors, Eigen::Index i, double& a, double& ah) {
  const linalg::Vector p = basis_t * vectors.col(i);
  double s = 0.0;
  double sh = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double p2 = p(k) * p(k);
    s += p2 * w(k);
    sh += p2 * wh(k);
  }
  a = s;
  ah = sh;
}

inline double edge_score_one(const linalg::Matrix& b, const linalg::Matrix& c, double base, double m,
                             const graph::Edge& e) {
  const double lap_q = b(e.u, e.u) + b(e.v, e.v) - 2.0 * b(e.u, e.v);
  const double sgn_q = c(e.u, e.u) + c(e.v, e.v) + 2.0 * c(e.u, e.v);
  return base - m * lap_q - m * sgn_q;
}

void check_sizes(const regret::ActionMatrix& am, const linalg::Matrix& vectors, std::span<double> a,
                 std::span<double> ah) {
  if (vectors.rows() != am.dim()) throw Error(ErrorKind::DimensionError, "vector dimension does not match action matrix");
  if (a.size() != static_cast<std::size_t>(vectors.cols()) || ah.size() != a.size()) {
    throw Error(ErrorKind::DimensionError, "leverage output spans must have one slot per vector");
  }
}

}  // namespace

int thread_limit() {
  if (const char* env = std::getenv("SPECROUND_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t > 0) return t;
    } catch (const std::exception&) {
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

void leverage_scan_serial(const regret::ActionMatrix& am, const linalg::Matrix& vectors, std::span<double> a,
                          std::span<double> ah) {
  check_sizes(am, vectors, a, ah);
  const linalg::Matrix basis_t = am.z_spectrum().eigenvectors.transpose();
  for (Eigen::Index i = 0; i < vectors.cols(); ++i) {
    leverage_one(basis_t, am.weights(), am.half_weights(), vectors, i, a[static_cast<std::size_t>(i)],
                 ah[static_cast<std::size_t>(i)]);
  }
}

void leverage_scan_parallel(const regret::ActionMatrix& am, const linalg::Matrix& vectors, std::span<double> a,
                            std::span<double> ah) {
  check_sizes(am, vectors, a, ah);
  const linalg::Matrix basis_t = am.z_spectrum().eigenvectors.transpose();
  const std::ptrdiff_t m = vectors.cols();
  const int threads = thread_limit();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    leverage_one(basis_t, am.weights(), am.half_weights(), vectors, i, a[static_cast<std::size_t>(i)],
                 ah[static_cast<std::size_t>(i)]);
  }
  (void)threads;
}

void leverage_scan(const regret::ActionMatrix& am, const linalg::Matrix& vectors, std::span<double> a,
                   std::span<double> ah) {
  if (openmp_enabled() && vectors.cols() >= kParallelThreshold && thread_limit() > 1) {
    leverage_scan_parallel(am, vectors, a, ah);
  } else {
    leverage_scan_serial(am, vectors, a, ah);
  }
}

void edge_scores_serial(const linalg::Matrix& lap_block, const linalg::Matrix& signless_block, double base,
                        double m, std::span<const graph::Edge> edges, std::span<double> out) {
  if (out.size() != edges.size()) throw Error(ErrorKind::DimensionError, "one score slot per edge required");
  for (std::size_t k = 0; k < edges.size(); ++k) out[k] = edge_score_one(lap_block, signless_block, base, m, edges[k]);
}

void edge_scores_parallel(const linalg::Matrix& lap_block, const linalg::Matrix& signless_block, double base,
                          double m, std::span<const graph::Edge> edges, std::span<double> out) {
  if (out.size() != edges.size()) throw Error(ErrorKind::DimensionError, "one score slot per edge required");
  const auto count = static_cast<std::ptrdiff_t>(edges.size());
  const int threads = thread_limit();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] =
        edge_score_one(lap_block, signless_block, base, m, edges[static_cast<std::size_t>(k)]);
  }
  (void)threads;
}

void edge_scores(const linalg::Matrix& lap_block, const linalg::Matrix& signless_block, double base, double m,
                 std::span<const graph::Edge> edges, std::span<double> out) {
  if (openmp_enabled() && static_cast<std::ptrdiff_t>(edges.size()) >= kParallelThreshold && thread_limit() > 1) {
    edge_scores_parallel(lap_block, signless_block, base, m, edges, out);
  } else {
    edge_scores_serial(lap_block, signless_block, base, m, edges, out);
  }
}

}  // namespace specround::kernels
