#include "fixtures.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

namespace specround::testing {

using linalg::Matrix;

namespace {

void whiten_cholesky(VectorInstance& inst) {
  Matrix mom = Matrix::Zero(inst.n(), inst.n());
  for (Eigen::Index i = 0; i < inst.m(); ++i)
    mom += inst.x[static_cast<std::size_t>(i)] * inst.vectors.col(i) * inst.vectors.col(i).transpose();
  const Eigen::LLT<Matrix> llt(mom);
  inst.vectors = llt.matrixL().solve(inst.vectors);
}

}  // namespace

VectorInstance random_isotropic(int n, int m, std::uint64_t seed, double c_lo, double c_hi, double x_lo,
                                double x_hi) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> ux(x_lo, x_hi), uc(c_lo, c_hi);
  VectorInstance inst;
  inst.vectors.resize(n, m);
  for (int i = 0; i < m; ++i)
    for (int r = 0; r < n; ++r) inst.vectors(r, i) = normal(gen);
  for (int i = 0; i < m; ++i) inst.x.push_back(ux(gen));
  for (int i = 0; i < m; ++i) inst.c.push_back(uc(gen));
  whiten_cholesky(inst);
  return inst;
}

VectorInstance tight_pairs(int n, double eps_prime, double c_inf) {
  VectorInstance inst;
  inst.vectors = Matrix::Zero(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    inst.vectors(i, 2 * i) = std::sqrt(1.0 - eps_prime);
    inst.x.push_back(1.0);
    inst.c.push_back(0.0);
    inst.vectors(i, 2 * i + 1) = 1.0;
    inst.x.push_back(eps_prime);
    inst.c.push_back(c_inf);
  }
  return inst;
}

VectorInstance complete_graph_split(int n, double k, int copies) {
  const double xe = 2.0 * k / (n * (n - 1.0) * copies);
  Matrix b(n, n * (n - 1) / 2 * copies);
  int col = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      for (int c = 0; c < copies; ++c) {
        b.col(col).setZero();
        b(u, col) = 1.0;
        b(v, col) = -1.0;
        ++col;
      }
  // L_x = (xe * copies) (n I - J); restrict to 1-perp and whiten.
  const Matrix centering = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
  Eigen::SelfAdjointEigenSolver<Matrix> es(centering);
  const Matrix q = es.eigenvectors().rightCols(n - 1);
  const double scale = 1.0 / std::sqrt(xe * copies * n);
  VectorInstance inst;
  inst.vectors = scale * q.transpose() * b;
  inst.x.assign(static_cast<std::size_t>(col), xe);
  inst.c.assign(static_cast<std::size_t>(col), 1.0);
  return inst;
}

VectorInstance planar_instance(int m, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> angle(0.0, 3.141592653589793), ux(0.1, 1.0), uc(0.5, 2.0),
      len(0.5, 1.5);
  VectorInstance inst;
  inst.vectors.resize(2, m);
  for (int i = 0; i < m; ++i) {
    const double a = angle(gen), r = len(gen);
    inst.vectors(0, i) = r * std::cos(a);
    inst.vectors(1, i) = r * std::sin(a);
    inst.x.push_back(ux(gen));
    inst.c.push_back(uc(gen));
  }
  whiten_cholesky(inst);
  return inst;
}

graph::Graph random_connected_graph(int n, int extra, std::uint64_t seed, double w_lo, double w_hi) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> vert(0, n - 1);
  std::uniform_real_distribution<double> uw(w_lo, w_hi), uc(0.5, 2.0);
  std::vector<graph::Edge> edges;
  for (int v = 1; v < n; ++v) edges.push_back({v - 1, v, w_lo == w_hi ? w_lo : uw(gen), uc(gen)});
  for (int i = 0; i < extra; ++i) {
    const int u = vert(gen);
    int v = vert(gen);
    if (u == v) v = (v + 1) % n;
    edges.push_back({u, v, w_lo == w_hi ? w_lo : uw(gen), uc(gen)});
  }
  return graph::Graph(n, std::move(edges));
}

}  // namespace specround::testing
