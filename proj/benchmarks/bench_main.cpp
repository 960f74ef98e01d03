#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "lvg/isoperimetry.hpp"
#include "lvg/lattice.hpp"
#include "lvg/level_sets.hpp"
#include "lvg/solver.hpp"

namespace {

lvg::ScalarField random_field(const lvg::WeightedGraph& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  lvg::ScalarField u(g, 0.0);
  for (std::size_t i = 0; i < g.vertex_count(); ++i) u[i] = d(rng);
  return u;
}

lvg::DirichletProblem bubble_problem(const lvg::LatticeWindow& w, double lambda) {
  lvg::Point2 center{(w.meta.n - 1) / 2.0, (w.meta.n - 1) / 2.0};
  std::vector<std::pair<lvg::VertexId, double>> bv;
  for (lvg::VertexId id : w.meta.boundary) {
    const lvg::GridCoord* c = w.meta.find_coord(id);
    bv.push_back({id, lvg::bubble({double(c->i), double(c->j)}, center, lambda)});
  }
  return lvg::make_dirichlet_problem(w.graph,
                                     lvg::VertexSet(w.graph, w.meta.interior),
                                     bv, lvg::Nonlinearity::exponential());
}

void BM_BruteForceCis(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  lvg::LatticeWindow w = lvg::make_lattice_window(n, true);
  lvg::VertexSet admissible(w.graph, w.meta.interior);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lvg::brute_force_cis(admissible, 24, 1));
  }
  state.SetItemsProcessed(state.iterations() *
                          ((std::int64_t{1} << (n * n)) - 1));
}
BENCHMARK(BM_BruteForceCis)->Arg(3)->Arg(4);

void BM_BruteForceCisParallel(benchmark::State& state) {
  lvg::LatticeWindow w = lvg::make_lattice_window(4, true);
  lvg::VertexSet admissible(w.graph, w.meta.interior);
  unsigned workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lvg::brute_force_cis(admissible, 24, workers));
  }
}
BENCHMARK(BM_BruteForceCisParallel)->Arg(1)->Arg(4);

void BM_LaplacianField(benchmark::State& state) {
  lvg::LatticeWindow w =
      lvg::make_lattice_window(static_cast<int>(state.range(0)), true);
  lvg::ScalarField u = random_field(w.graph, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lvg::laplacian_field(u));
  }
  state.SetItemsProcessed(state.iterations() * w.graph.vertex_count());
}
BENCHMARK(BM_LaplacianField)->Arg(21)->Arg(64);

void BM_ChainAudit(benchmark::State& state) {
  lvg::LatticeWindow w =
      lvg::make_lattice_window(static_cast<int>(state.range(0)), true);
  lvg::ScalarField u = random_field(w.graph, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lvg::chain_audit(w.graph, u, 4.0, std::numeric_limits<double>::infinity()));
  }
}
BENCHMARK(BM_ChainAudit)->Arg(9)->Arg(15);

void BM_ExactExpCoarea(benchmark::State& state) {
  lvg::LatticeWindow w =
      lvg::make_lattice_window(static_cast<int>(state.range(0)), true);
  lvg::ScalarField u = random_field(w.graph, 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lvg::exact_exp_coarea(u));
  }
  state.SetItemsProcessed(state.iterations() * w.graph.edge_count());
}
BENCHMARK(BM_ExactExpCoarea)->Arg(21)->Arg(64);

void BM_NewtonSolve(benchmark::State& state) {
  lvg::LatticeWindow w =
      lvg::make_lattice_window(static_cast<int>(state.range(0)), true);
  lvg::DirichletProblem p = bubble_problem(w, 0.02);
  for (auto _ : state) {
    lvg::ScalarField u0 = lvg::harmonic_extension(p);
    benchmark::DoNotOptimize(lvg::newton_solve(p, u0, 1e-10, 50));
  }
}
BENCHMARK(BM_NewtonSolve)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
