#include <benchmark/benchmark.h>

#include <clockauction/estimation.hpp>
#include <clockauction/extended.hpp>
#include <clockauction/synthetic.hpp>

#include "fixtures.hpp"

using namespace clockauction;

namespace {

SyntheticMarket market(int products, int bidders, std::uint64_t seed = 1) {
  SyntheticSpec spec;
  spec.num_products = products;
  spec.num_bidders = bidders;
  spec.max_base_products = std::min(products, 6);
  spec.max_levels = 4;
  spec.seed = seed;
  return generate_market(spec);
}

void BM_BestCopies(benchmark::State& state) {
  const auto m = market(static_cast<int>(state.range(0)), 1);
  const auto& agent = m.agents.front();
  const auto prices = PriceVector::opening(m.config.catalog);
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_copies(agent.model.bases.front(), agent.model, prices, agent.eligibility,
                                         m.config.catalog));
  }
}
BENCHMARK(BM_BestCopies)->Arg(4)->Arg(10)->Arg(20);

void BM_RunAuction(benchmark::State& state) {
  const auto m = market(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(run_auction(m.config, m.agents));
}
BENCHMARK(BM_RunAuction)->Args({10, 5})->Args({20, 8})->Args({40, 12})->Unit(benchmark::kMillisecond);

void BM_EstimateAll(benchmark::State& state) {
  const auto m = market(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto trace = run_auction(m.config, m.agents);
  const auto log = smooth_monotone(bid_log_from_rounds(trace.rounds));
  const auto prices = start_prices(trace);
  state.counters["rounds"] = trace.rounds_used;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_all(log, prices, m.config.catalog));
}
BENCHMARK(BM_EstimateAll)->Args({10, 5})->Args({20, 8})->Unit(benchmark::kMillisecond);

void BM_ExtendedAuction(benchmark::State& state) {
  const auto m = market(static_cast<int>(state.range(0)), 5);
  TieredValuationAdjustment adj;
  for (const auto& a : m.agents) {
    for (const auto& p : m.config.catalog.products()) {
      for (auto t : kTiers) adj.set(a.bidder, p.area_id, t, Money::dollars(10 * static_cast<std::int64_t>(index(t))));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(run_extended_auction(m.config, m.agents, adj));
}
BENCHMARK(BM_ExtendedAuction)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
