#include <gtest/gtest.h>

#include <sstream>

#include <clockauction/error.hpp>
#include <clockauction/ingest.hpp>
#include <clockauction/manifest.hpp>
#include <clockauction/report.hpp>
#include <clockauction/synthetic.hpp>
#include <clockauction/trace_io.hpp>

#include "fixtures.hpp"

using namespace clockauction;

namespace {

SyntheticMarket market(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.seed = seed;
  return generate_market(spec);
}

std::string jsonl(const AuctionTrace& t, const std::string& manifest = {}) {
  std::ostringstream out;
  write_trace_jsonl(out, t, manifest);
  return out.str();
}

}  // namespace

TEST(RevenueGap, PublishedReplications) {
  EXPECT_NEAR(revenue_gap_percent(Money::dollars(2'026'057'000), Money::dollars(1'903'834'500)), 6.0325, 1e-3);
  EXPECT_NEAR(revenue_gap_percent(Money::dollars(8'831'029'798), Money::dollars(7'924'278'135)), 10.2677, 1e-3);
  EXPECT_EQ(revenue_gap_percent(Money{}, Money::dollars(5)), 0.0);
}

TEST(CompareTraces, IdenticalTracesAgree) {
  const auto m = market(2);
  const auto t = run_auction(m.config, m.agents);
  const auto c = compare_traces(t, t, m.config.catalog);
  EXPECT_EQ(c.rmse.aggregate, 0.0);
  EXPECT_EQ(c.revenue_gap_percent, 0.0);
  EXPECT_EQ(c.actual_rounds, c.simulated_rounds);
  EXPECT_EQ(c.actual_units, c.simulated_units);
  EXPECT_EQ(to_json(c)["revenue_gap_percent"], 0.0);
}

TEST(TraceJsonl, RoundTrip) {
  for (std::uint64_t seed : {1, 5, 9}) {
    const auto m = market(seed);
    const auto t = run_auction(m.config, m.agents);
    const auto p = fixtures::temp_file("trace_" + std::to_string(seed) + ".jsonl", jsonl(t, "abc"));
    EXPECT_EQ(read_trace(p, m.config.catalog), t);
    EXPECT_EQ(jsonl(t), jsonl(t));
  }
}

TEST(TraceJsonl, TruncatedFlagSurvives) {
  auto m = market(3);
  m.config.max_rounds = 2;
  const auto t = run_auction(m.config, m.agents);
  ASSERT_TRUE(t.truncated);
  EXPECT_TRUE(read_trace(fixtures::temp_file("trunc.jsonl", jsonl(t)), m.config.catalog).truncated);
}

TEST(RoundPrices, CsvRoundTripAndGaps) {
  const auto m = market(4);
  const auto t = run_auction(m.config, m.agents);
  const auto prices = start_prices(t);
  std::ostringstream out;
  write_round_prices_csv(out, prices);
  EXPECT_EQ(load_round_prices(fixtures::temp_file("prices.csv", out.str()), m.config.catalog), prices);
  const auto id = m.config.catalog.products().front().id;
  const auto gap = fixtures::temp_file("prices_gap.csv", "round,product_id,price_cad\n2," + id + ",10\n");
  EXPECT_THROW(load_round_prices(gap, m.config.catalog), ValidationError);
}

// An observed log with its start prices reads back as the simulated trace.
TEST(TraceFromLog, MatchesSimulation) {
  const auto m = market(6);
  const auto t = run_auction(m.config, m.agents);
  auto prices = start_prices(t);
  prices.push_back(t.rounds.back().posted);
  const auto observed = trace_from_log(bid_log_from_rounds(t.rounds), prices, m.config.catalog);
  EXPECT_EQ(observed.final_allocation, t.final_allocation);
  EXPECT_EQ(observed.revenue, t.revenue);
  EXPECT_EQ(observed.rounds_used, t.rounds_used);
}

TEST(Heatmap, CellsSumToDemand) {
  const auto m = market(7);
  const auto t = run_auction(m.config, m.agents);
  const auto& bidder = t.final_allocation.begin()->first;
  std::ostringstream out;
  write_heatmap_csv(out, t, bidder, m.config.catalog);
  std::int64_t expected = 0;
  for (const auto& r : t.rounds) expected += r.bids.at(bidder).total_units();

  std::istringstream in(out.str());
  std::string line;
  std::int64_t total = 0;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("round", 0) == 0) continue;
    ++rows;
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');  // round
    while (std::getline(cells, cell, ',')) total += std::stoll(cell);
  }
  EXPECT_EQ(rows, t.rounds_used);
  EXPECT_EQ(total, expected);
  const auto svg = heatmap_svg(t, bidder, m.config.catalog, "deadbeef");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("deadbeef"), std::string::npos);
}

TEST(RmseCsv, AggregateRow) {
  AllocationComparison c;
  c.per_bidder = {{"X", 0.5}, {"Y", 0.0}};
  c.aggregate = 0.25;
  std::ostringstream out;
  write_rmse_csv(out, c, "m1");
  const auto s = out.str();
  EXPECT_NE(s.find("# manifest m1"), std::string::npos);
  EXPECT_NE(s.find("X,0.5"), std::string::npos);
  EXPECT_NE(s.find("*,0.25"), std::string::npos);
}

TEST(Manifest, HashIsStableAndSensitive) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");

  RunManifest a;
  a.command = "simulate";
  a.config_hash = "1";
  a.inputs = {{"/x/catalog.csv", "ff"}};
  RunManifest b = a;
  b.inputs = {{"/elsewhere/catalog.csv", "ff"}};
  EXPECT_EQ(a.hash(), b.hash());
  b.inputs = {{"/x/catalog.csv", "fe"}};
  EXPECT_NE(a.hash(), b.hash());
  b = a;
  b.scenario = "combined";
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_EQ(a.to_json()["tool_version"], std::string(kToolVersion));
}

TEST(SampleData, LoadsAndReplays) {
  const std::filesystem::path dir = CLOCKAUCTION_SAMPLE_DIR;
  const auto cat = load_catalog(dir / "catalog.csv");
  const auto log = parse_bid_log(dir / "bids.csv", cat);
  const auto prices = load_round_prices(dir / "round_prices.csv", cat);
  const auto t = trace_from_log(log, prices, cat);
  EXPECT_EQ(t.rounds_used, 19);
  EXPECT_EQ(t.revenue, Money::parse("4652.00"));
  EXPECT_FALSE(t.truncated);
}
