// Serial reference vs OpenMP path for the kernels with a parallel loop.
// Set OMP_NUM_THREADS to compare thread counts.

#include <benchmark/benchmark.h>

#include <random>

#include "odist/assignment.hpp"
#include "odist/audit.hpp"
#include "odist/random_instances.hpp"

using namespace odist;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_MinimizeAssignment(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const std::size_t n = 8, m = 5;
  ProblemSpec spec;
  spec.preset = Preset::KMedian;
  spec.k = 3;
  const auto p = build_problem(spec, n, m);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  Matrix d(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < m; ++f) d(i, f) = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_assignment(p, d, exec_of(state)).cost);
  label(state);
}
BENCHMARK(BM_MinimizeAssignment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AuditSum(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto l = random_facility_distances(8, rng);
  const auto profile = random_profile(12, l, rng);
  for (auto _ : state) benchmark::DoNotOptimize(audit_sum_social_choice(0, profile, l, exec_of(state)).distortion);
  label(state);
}
BENCHMARK(BM_AuditSum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AuditPercentile(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto l = random_facility_distances(6, rng);
  const auto profile = random_profile(15, l, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(audit_percentile_social_choice(0, profile, l, 0.5, exec_of(state)).distortion);
  label(state);
}
BENCHMARK(BM_AuditPercentile)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AuditAssignment(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const std::size_t n = 5, m = 5;
  const auto l = random_facility_distances(m, rng);
  const auto profile = random_profile(n, l, rng);
  ProblemSpec spec;
  spec.preset = Preset::MatchingMinCost;
  const auto p = build_problem(spec, n, m);
  const Assignment x{0, 1, 2, 3, 4};
  for (auto _ : state) benchmark::DoNotOptimize(audit_additive_assignment(x, profile, l, p, exec_of(state)).distortion);
  label(state);
}
BENCHMARK(BM_AuditAssignment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
