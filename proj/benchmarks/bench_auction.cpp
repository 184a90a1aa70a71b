#include <benchmark/benchmark.h>

#include <random>

#include "cabne/auction.hpp"
#include "cabne/monotonicity.hpp"
#include "cabne/payments.hpp"
#include "cabne/reference_cases.hpp"

namespace {

using namespace cabne;

void BM_WinnerDeterminationTable2(benchmark::State& state) {
  const auto c = table2_case(false);
  for (auto _ : state) benchmark::DoNotOptimize(winner_determination(c.instance, c.bids));
}
BENCHMARK(BM_WinnerDeterminationTable2);

// Random instances with n bidders on 8 goods, 3 bundles each.
void BM_WinnerDeterminationRandom(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto gen = random_family(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 8, 3, 20);
  std::vector<ProbeInstance> pool;
  for (int k = 0; k < 32; ++k) pool.push_back(gen(rng));
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& p = pool[k++ % pool.size()];
    benchmark::DoNotOptimize(winner_determination(p.instance, p.bids));
  }
}
BENCHMARK(BM_WinnerDeterminationRandom)->Arg(4)->Arg(8)->Arg(12);

void BM_PaymentsTable2(benchmark::State& state) {
  const auto rule = static_cast<PaymentRule>(state.range(0));
  const auto c = table2_case(false);
  const Allocation x = winner_determination(c.instance, c.bids).allocations.front();
  for (auto _ : state) benchmark::DoNotOptimize(compute_payments(rule, c.instance, c.bids, x));
  state.SetLabel(std::string(rule_name(rule)));
}
BENCHMARK(BM_PaymentsTable2)
    ->Arg(static_cast<int>(PaymentRule::kVcg))
    ->Arg(static_cast<int>(PaymentRule::kVcgNearest))
    ->Arg(static_cast<int>(PaymentRule::kProportional))
    ->Arg(static_cast<int>(PaymentRule::kProxy))
    ->Unit(benchmark::kMillisecond);

void BM_PaymentsLlg(benchmark::State& state) {
  const auto rule = static_cast<PaymentRule>(state.range(0));
  const auto inst = AuctionInstance::from_names({"A", "B"}, {{"1", {{"A"}}}, {"2", {{"B"}}}, {"3", {{"A", "B"}}}});
  const BidProfile b(inst, {{Rational(3, 4)}, {Rational(5, 8)}, {Rational(1)}});
  const Allocation x = winner_determination(inst, b).allocations.front();
  for (auto _ : state) benchmark::DoNotOptimize(compute_payments(rule, inst, b, x));
  state.SetLabel(std::string(rule_name(rule)));
}
BENCHMARK(BM_PaymentsLlg)
    ->Arg(static_cast<int>(PaymentRule::kVcgNearest))
    ->Arg(static_cast<int>(PaymentRule::kProportional))
    ->Arg(static_cast<int>(PaymentRule::kProxy));

void BM_MonotonicitySearch(benchmark::State& state) {
  SearchOptions opt;
  opt.probe_budget = 1000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search_violations(PaymentRule::kVcg, random_family(2, 4, 3, 3, 10), opt));
  }
}
BENCHMARK(BM_MonotonicitySearch)->Unit(benchmark::kMillisecond);

}  // namespace
