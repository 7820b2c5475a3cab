#include <benchmark/benchmark.h>

#include <vector>

#include "fixtures.hpp"
#include "specround/concentration.hpp"
#include "specround/graph.hpp"
#include "specround/kernels.hpp"
#include "specround/regret.hpp"

using namespace specround;

namespace {

struct LeverageSetup {
  VectorInstance inst;
  regret::ActionMatrix am;
  std::vector<double> a, ah;

  explicit LeverageSetup(int m)
      : inst(testing::random_isotropic(20, m, 1)),
        am(regret::compute_action_matrix(inst.selection_moment({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15,
                                                                16, 17, 18, 19, 20, 21, 22, 23}),
                                         10.0)),
        a(static_cast<std::size_t>(m)),
        ah(static_cast<std::size_t>(m)) {}
};

void BM_LeverageSerial(benchmark::State& state) {
  LeverageSetup s(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kernels::leverage_scan_serial(s.am, s.inst.vectors, s.a, s.ah);
    benchmark::DoNotOptimize(s.a.data());
  }
}

void BM_LeverageParallel(benchmark::State& state) {
  LeverageSetup s(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kernels::leverage_scan_parallel(s.am, s.inst.vectors, s.a, s.ah);
    benchmark::DoNotOptimize(s.a.data());
  }
}

template <bool Parallel>
void BM_EdgeScores(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const graph::Graph g = graph::complete_graph(n);
  const linalg::Matrix b = graph::laplacian(g).matrix() / (4.0 * n);
  const linalg::Matrix c = graph::signless_laplacian(g).matrix() / (4.0 * n);
  std::vector<double> out(static_cast<std::size_t>(g.num_edges()));
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::edge_scores_parallel(b, c, 1.0, g.num_edges(), g.edges(), out);
    else
      kernels::edge_scores_serial(b, c, 1.0, g.num_edges(), g.edges(), out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Chain(benchmark::State& state) {
  const concentration::BirthDeathChain chain{40, 0.5, 80.0, 0.0, 200, 0.0};
  for (auto _ : state) {
    auto y = Parallel ? concentration::simulate_parallel(chain, state.range(0), 1)
                      : concentration::simulate_serial(chain, state.range(0), 1);
    benchmark::DoNotOptimize(y.data());
  }
}

}  // namespace

BENCHMARK(BM_LeverageSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_LeverageParallel)->Arg(1000)->Arg(10000);
BENCHMARK(BM_EdgeScores<false>)->Arg(50)->Arg(200);
BENCHMARK(BM_EdgeScores<true>)->Arg(50)->Arg(200);
BENCHMARK(BM_Chain<false>)->Arg(10000);
BENCHMARK(BM_Chain<true>)->Arg(10000);

BENCHMARK_MAIN();
