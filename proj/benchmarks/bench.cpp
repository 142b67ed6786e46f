#include <benchmark/benchmark.h>

#include "signaling/audit.hpp"
#include "signaling/epbe.hpp"
#include "signaling/outer_game.hpp"
#include "signaling/refinement.hpp"

using namespace signaling;

namespace {

MarketParams screening(int n) {
  MarketParams p;
  p.theta_h = 2.0;
  p.theta_l = -1.0;
  p.lambda = 0.5;
  p.cost = CostFamily::linear(2.0, 1.0);
  p.n_schools = n;
  return p;
}

PolicyProfile ladder_profile(int n, int messages) {
  std::vector<double> thresholds;
  std::vector<MessageId> ids{0};
  for (int k = 1; k < messages; ++k) {
    thresholds.push_back(0.3 * k);
    ids.push_back(k);
  }
  return PolicyProfile(static_cast<std::size_t>(n),
                       Policy{0.0, StepMonitoringPolicy(thresholds, ids)});
}

void BM_ConstructEpbe(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int messages = static_cast<int>(state.range(1));
  MarketParams p = screening(n);
  PolicyProfile profile = ladder_profile(n, messages);
  for (auto _ : state) benchmark::DoNotOptimize(construct_epbe(profile, p));
}
BENCHMARK(BM_ConstructEpbe)->Args({1, 2})->Args({2, 3})->Args({8, 6})->Args({32, 10});

void BM_BruteForce(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int messages = static_cast<int>(state.range(1));
  MarketParams p = screening(n);
  PolicyProfile profile = ladder_profile(n, messages);
  DeviationGrid grid = make_deviation_grid(profile, 21, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_equilibria(profile, p, grid));
  }
}
BENCHMARK(BM_BruteForce)->Args({1, 2})->Args({2, 2})->Args({2, 3});

void BM_DeviationAudit(benchmark::State& state) {
  MarketParams p = screening(2);
  EquilibriumOutcome o = riley_rpbe(p, 2);
  AuditGrids grids = make_audit_grids(o, p, 21);
  auto mode = state.range(0) ? ContinuationMode::kPessimistic : ContinuationMode::kCanonical;
  int jobs = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(deviation_audit(o, p, grids, kDefaultTol, mode, jobs));
  }
}
BENCHMARK(BM_DeviationAudit)->Args({0, 1})->Args({1, 1})->Args({1, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
