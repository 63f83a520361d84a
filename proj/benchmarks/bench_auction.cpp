#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "bumpauction/bounds.hpp"
#include "bumpauction/matching.hpp"
#include "bumpauction/mechanism.hpp"
#include "bumpauction/strategies.hpp"
#include "bumpauction/types.hpp"

namespace {

using namespace bump;

std::vector<std::string> make_slots(int m) {
  std::vector<std::string> slots;
  for (int s = 1; s <= m; ++s) slots.push_back("s" + std::to_string(s));
  return slots;
}

std::vector<Bidder> make_bidders(int n, const std::vector<std::string>& slots,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> bid(0.1, 10.0);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<Bidder> bidders;
  for (int b = 1; b <= n; ++b) {
    Bidder bidder;
    bidder.id = "b" + std::to_string(b);
    bidder.bid = bid(rng);
    for (const auto& slot : slots)
      if (coin(rng)) bidder.choice_set.push_back(slot);
    if (bidder.choice_set.empty()) bidder.choice_set.push_back(slots.front());
    bidders.push_back(std::move(bidder));
  }
  return bidders;
}

void BM_MaxWeightMatching(benchmark::State& state) {
  const auto slots = make_slots(static_cast<int>(state.range(1)));
  const auto bidders =
      make_bidders(static_cast<int>(state.range(0)), slots, 991);
  for (auto _ : state) {
    const MatchingResult result = max_weight_matching(bidders, slots);
    benchmark::DoNotOptimize(result.weight);
  }
}
BENCHMARK(BM_MaxWeightMatching)->Args({20, 5})->Args({60, 8})->Args({200, 12});

void BM_MechanismRun(benchmark::State& state) {
  const GeneratedExample example =
      build_example("tight_chain", {{"k", static_cast<double>(state.range(0))}});
  for (auto _ : state) {
    const Outcome outcome = run(example.scenario, example.params);
    benchmark::DoNotOptimize(outcome.survivors.size());
  }
}
BENCHMARK(BM_MechanismRun)->Arg(5)->Arg(10)->Arg(20);

void BM_SurvivalWeight(benchmark::State& state) {
  const auto slots = make_slots(4);
  Scenario scenario;
  scenario.slots = slots;
  scenario.arrivals = make_bidders(static_cast<int>(state.range(0)), slots, 313);
  const MechanismParams params{0.2, 1.0};
  const std::size_t position = scenario.arrivals.size() / 2;
  for (auto _ : state) {
    const Thresholds thresholds = survival_weight(scenario, params, position);
    benchmark::DoNotOptimize(thresholds.sv);
  }
}
BENCHMARK(BM_SurvivalWeight)->Arg(10)->Arg(20)->Arg(40);

void BM_SolveCn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const SolveResult result = solve_c_n(0.25, n);
    benchmark::DoNotOptimize(result.root);
  }
}
BENCHMARK(BM_SolveCn)->Arg(8)->Arg(34)->Arg(144);

}  // namespace

BENCHMARK_MAIN();
