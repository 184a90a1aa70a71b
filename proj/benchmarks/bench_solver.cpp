#include <benchmark/benchmark.h>

#include <random>

#include "cabne/bne.hpp"
#include "cabne/envelope.hpp"
#include "cabne/planes.hpp"

namespace {

using namespace cabne;

StrategyProfile llg_field(const DomainConfig& d, const Rational& step) {
  return bracket_truthful(d, initial_profile(d, step), step, Rounding::kUp);
}

// All candidate planes of one local against the rounded-truthful field; a fresh cache each time.
void BM_PlanesCold(benchmark::State& state) {
  const DomainConfig d = build_llg();
  const Rational step(1, state.range(0));
  const auto dist = exact_opponent_distribution(d, 0, llg_field(d, step));
  const auto bids = cell_vertex_bids({1}, step);
  for (auto _ : state) {
    OutcomeCache cache(d.auction, PaymentRule::kProxy, {}, step);
    benchmark::DoNotOptimize(cache.planes(dist, bids, {TieBreakOrder{}}, 1));
  }
  state.counters["outcomes"] = static_cast<double>(bids.size() * dist.support.size());
}
BENCHMARK(BM_PlanesCold)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

// Same planes with every outcome already cached: the accumulation pass alone.
void BM_PlanesWarm(benchmark::State& state) {
  const DomainConfig d = build_llg();
  const Rational step(1, state.range(0));
  const auto dist = exact_opponent_distribution(d, 0, llg_field(d, step));
  const auto bids = cell_vertex_bids({1}, step);
  OutcomeCache cache(d.auction, PaymentRule::kProxy, {}, step);
  (void)cache.planes(dist, bids, {TieBreakOrder{}}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(cache.planes(dist, bids, {TieBreakOrder{}}, 1));
}
BENCHMARK(BM_PlanesWarm)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

std::vector<UtilityPlane> random_planes(int count, int dimension) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> unit(0, 256);
  std::vector<UtilityPlane> out;
  for (int k = 0; k < count; ++k) {
    UtilityPlane p;
    for (int j = 0; j < dimension; ++j) {
      p.bid.emplace_back(k, count);
      p.win_prob.emplace_back(unit(rng), 256 * dimension);
    }
    p.expected_payment = Rational(unit(rng), 512);
    p.refresh_double();
    out.push_back(std::move(p));
  }
  return out;
}

void BM_LineEnvelope(benchmark::State& state) {
  const auto planes = random_planes(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(LineEnvelope(planes, 0, 1));
}
BENCHMARK(BM_LineEnvelope)->Arg(65)->Arg(1025);

void BM_GridEnvelope(benchmark::State& state) {
  const auto planes = random_planes(static_cast<int>(state.range(0)), 2);
  const std::vector<UniformPrior> box{{0, 1}, {0, 1}};
  for (auto _ : state) benchmark::DoNotOptimize(grid_envelope(planes, box, Rational(1, 32)));
}
BENCHMARK(BM_GridEnvelope)->Arg(65)->Arg(1089)->Unit(benchmark::kMillisecond);

void BM_SolveLlgCoarse(benchmark::State& state) {
  const DomainConfig d = build_llg();
  SolverConfig cfg;
  cfg.step = Rational(1, state.range(0));
  cfg.max_iterations = 3;
  for (auto _ : state) benchmark::DoNotOptimize(solve(d, cfg));
}
BENCHMARK(BM_SolveLlgCoarse)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
