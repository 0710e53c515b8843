#include <benchmark/benchmark.h>

#include <random>

#include "dynlab/diagonal.hpp"
#include "dynlab/natset.hpp"
#include "dynlab/recurrence.hpp"
#include "dynlab/shiftlab.hpp"
#include "dynlab/sobolev.hpp"

namespace ns = dynlab::natset;
namespace sl = dynlab::shiftlab;
namespace sb = dynlab::sobolev;
namespace dg = dynlab::diagonal;
namespace rc = dynlab::recurrence;

static void BM_GapProfile(benchmark::State& state) {
  auto set = ns::random_window_set(state.range(0), 0.4, 7);
  for (auto _ : state) {
    auto g = ns::gap_profile<std::int64_t>(set, 8);
    benchmark::DoNotOptimize(g.max_gap);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GapProfile)->Range(1 << 10, 1 << 18)->Complexity();

static void BM_BanachProfile(benchmark::State& state) {
  auto set = ns::random_window_set(1 << 14, 0.3, 11);
  for (auto _ : state) {
    auto p = ns::banach_profile<std::int64_t>(set, state.range(0));
    benchmark::DoNotOptimize(p.back().alpha);
  }
}
BENCHMARK(BM_BanachProfile)->Arg(16)->Arg(64)->Arg(256);

static void BM_CriterionSets(benchmark::State& state) {
  sl::WeightSpec w(sl::Side::bilateral, sl::StepRule{0.5, 2.0});
  for (auto _ : state) {
    auto sets = sl::criterion_sets(w, 0, 2, 1e4, state.range(0));
    benchmark::DoNotOptimize(sets.forward.size());
  }
}
BENCHMARK(BM_CriterionSets)->Arg(512)->Arg(4096);

static void BM_DirectReturnSet(benchmark::State& state) {
  sl::WeightSpec w(sl::Side::bilateral, sl::StepRule{0.5, 2.0});
  sl::BallSpec u{sl::TruncatedVector::basis(0, 0, 0), 0.1, sl::NormKind::sup, 2.0};
  sl::BallSpec v{sl::TruncatedVector::basis(1, 1, 1), 0.1, sl::NormKind::sup, 2.0};
  for (auto _ : state) {
    auto set = sl::direct_return_set(w, u, v, state.range(0));
    benchmark::DoNotOptimize(set.size());
  }
}
BENCHMARK(BM_DirectReturnSet)->Arg(1024)->Arg(8192);

static void BM_KnrBoundChain(benchmark::State& state) {
  for (auto _ : state) {
    auto rep = sb::build_knr_function(1, 0);
    benchmark::DoNotOptimize(rep.w22_sq);
  }
}
BENCHMARK(BM_KnrBoundChain);

static void BM_GramMatrix(benchmark::State& state) {
  auto pts = dg::enumerate_level(2);
  std::vector<double> angles;
  for (const auto& p : pts) angles.push_back(p.radians());
  for (auto _ : state) {
    auto g = sb::gram_matrix(angles, state.range(0));
    benchmark::DoNotOptimize(g.gram(0, 0));
  }
}
BENCHMARK(BM_GramMatrix)->Arg(64)->Arg(256);

static void BM_SeparationStep(benchmark::State& state) {
  dg::SeparationConfig cfg;
  cfg.level = 2;
  cfg.basis_size = 64;
  cfg.k_values = {63};
  cfg.u = {{{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}, 0.2};
  cfg.v = {{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}, 0.2};
  for (auto _ : state) {
    auto rep = dg::separation_experiment(cfg);
    benchmark::DoNotOptimize(rep.entries[0].distance_upper);
  }
}
BENCHMARK(BM_SeparationStep);

static void BM_ProgressionDensity(benchmark::State& state) {
  auto n = ns::random_window_set(2000, 0.6, 5);
  for (auto _ : state) {
    auto a = rc::progression_density_set(n, 2, state.range(0), 50, 0.1);
    benchmark::DoNotOptimize(a.size());
  }
}
BENCHMARK(BM_ProgressionDensity)->Arg(50)->Arg(200);

BENCHMARK_MAIN();
