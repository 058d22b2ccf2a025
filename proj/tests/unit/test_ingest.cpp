#include <gtest/gtest.h>

#include <sstream>

#include <clockauction/error.hpp>
#include <clockauction/ingest.hpp>

#include "fixtures.hpp"

using namespace clockauction;
using fixtures::product;

namespace {

ProductCatalog abc() { return ProductCatalog({product("A", 9, 1, 10), product("B", 9, 1, 10), product("C", 9, 1, 10)}); }

/// One bidder's series for product A over consecutive rounds.
RawBidLog series(const std::vector<int>& qs, const std::string& product_id = "A") {
  std::vector<BidRow> rows;
  for (std::size_t r = 0; r < qs.size(); ++r) rows.push_back({static_cast<int>(r) + 1, "X", product_id, qs[r]});
  return make_bid_log(rows, abc());
}

std::vector<int> smoothed_series(const std::vector<int>& qs) {
  const auto s = smooth_monotone(series(qs));
  std::vector<int> out;
  for (const auto& b : s.history().rounds_of("X")) out.push_back(b.quantity("A"));
  return out;
}

}  // namespace

TEST(ParseBidLog, WellFormedFile) {
  const auto p = fixtures::temp_file("bids_ok.csv", "round,bidder_id,product_id,quantity\n1,X,A,2\n1,X,B,1\n2,X,A,1\n");
  EXPECT_EQ(parse_bid_log(p, abc()).rows.size(), 3u);
}

TEST(ParseBidLog, NegativeQuantity) {
  const auto p = fixtures::temp_file("bids_neg.csv", "round,bidder_id,product_id,quantity\n1,X,A,-1\n");
  EXPECT_THROW(parse_bid_log(p, abc()), ValidationError);
}

TEST(ParseBidLog, UnknownProductIsNamed) {
  const auto p = fixtures::temp_file("bids_unknown.csv", "round,bidder_id,product_id,quantity\n1,X,Q9,1\n");
  try {
    parse_bid_log(p, abc());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("Q9"), std::string::npos);
  }
}

TEST(MakeBidLog, RejectsStructuralProblems) {
  EXPECT_THROW(make_bid_log({{1, "X", "A", 10}}, abc()), ValidationError);                     // above supply
  EXPECT_THROW(make_bid_log({{1, "X", "A", 1}, {1, "X", "A", 2}}, abc()), ValidationError);    // duplicate
  EXPECT_THROW(make_bid_log({{1, "X", "A", 1}, {3, "X", "A", 1}}, abc()), ValidationError);    // gap
  EXPECT_THROW(make_bid_log({{0, "X", "A", 1}}, abc()), ValidationError);                      // round 0
}

TEST(SmoothMonotone, Examples) {
  EXPECT_EQ(smoothed_series({3, 1, 2}), (std::vector<int>{3, 2, 2}));
  EXPECT_EQ(smoothed_series({5, 4, 4}), (std::vector<int>{5, 4, 4}));
  EXPECT_EQ(smoothed_series({0, 2, 1}), (std::vector<int>{2, 2, 1}));
}

TEST(SmoothMonotone, PropertiesOnRandomLogs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int rounds = std::uniform_int_distribution<int>(1, 12)(rng);
    std::vector<BidRow> rows;
    for (int r = 1; r <= rounds; ++r) {
      for (const char* id : {"A", "B", "C"}) rows.push_back({r, "X", id, std::uniform_int_distribution<int>(0, 9)(rng)});
    }
    const auto raw = make_bid_log(rows, abc());
    const auto sm = smooth_monotone(raw).history();
    const auto rh = raw.history();
    for (const char* id : {"A", "B", "C"}) {
      for (int r = 1; r < rounds; ++r) EXPECT_GE(sm.bid("X", r).quantity(id), sm.bid("X", r + 1).quantity(id));
      EXPECT_EQ(sm.bid("X", rounds).quantity(id), rh.bid("X", rounds).quantity(id));
      for (int r = 1; r <= rounds; ++r) EXPECT_GE(sm.bid("X", r).quantity(id), rh.bid("X", r).quantity(id));
    }
  }
}

TEST(SuffixMax, MatchesDefinition) {
  const std::vector<int> in{1, 4, 2, 0, 3};
  EXPECT_EQ(suffix_max(in), (std::vector<int>{4, 4, 3, 3, 3}));
}

TEST(BuildLadders, Examples) {
  EXPECT_EQ(build_ladders(smooth_monotone(series({5, 5, 3, 3, 2})), "X").at("A").levels, (std::vector<int>{2, 3, 5}));
  EXPECT_EQ(build_ladders(smooth_monotone(series({4, 4, 4})), "X").at("A").levels, (std::vector<int>{4}));
  EXPECT_TRUE(build_ladders(smooth_monotone(series({0, 0})), "X").empty());
}

TEST(ExtractBases, TakesMinimumPerSupport) {
  const auto log = make_bid_log({{1, "X", "A", 4}, {1, "X", "B", 5}, {2, "X", "A", 4}, {2, "X", "B", 3}}, abc());
  const auto bases = extract_bases(smooth_monotone(log), "X");
  ASSERT_EQ(bases.size(), 1u);
  EXPECT_EQ(bases[0].quantities, (Bundle{{"A", 4}, {"B", 3}}));
}

TEST(ExtractBases, SingleObservationAndTwoSupports) {
  EXPECT_EQ(extract_bases(smooth_monotone(series({2})), "X").at(0).quantities, (Bundle{{"A", 2}}));
  const auto log = make_bid_log({{1, "X", "A", 2}, {1, "X", "B", 1}, {2, "X", "A", 2}, {2, "X", "B", 0}}, abc());
  EXPECT_EQ(extract_bases(smooth_monotone(log), "X").size(), 2u);
}

TEST(EnumerateVariants, Examples) {
  LadderMap ladders;
  ladders.emplace("A", CopyLadder{"A", {2, 3, 5}});
  const BundleBase a2{0, {{"A", 2}}};
  EXPECT_EQ(enumerate_variants(a2, ladders), (std::vector<Bundle>{{{"A", 2}}, {{"A", 3}}, {{"A", 5}}}));

  LadderMap l2;
  l2.emplace("A", CopyLadder{"A", {4}});
  l2.emplace("B", CopyLadder{"B", {3, 5}});
  const BundleBase ab{0, {{"A", 4}, {"B", 3}}};
  EXPECT_EQ(enumerate_variants(ab, l2), (std::vector<Bundle>{{{"A", 4}, {"B", 3}}, {{"A", 4}, {"B", 5}}}));
  EXPECT_EQ(count_variants(ab, l2), 2u);

  const BundleBase top{0, {{"A", 4}, {"B", 5}}};
  EXPECT_EQ(enumerate_variants(top, l2).size(), 1u);
}

TEST(BundleSpace, ObservedBidsMapToBases) {
  const auto log = make_bid_log({{1, "X", "A", 3}, {1, "X", "B", 2}, {2, "X", "A", 2}, {2, "X", "B", 2}, {3, "X", "A", 0},
                                 {3, "X", "B", 0}},
                                abc());
  const auto space = build_bundle_space(smooth_monotone(log), "X");
  ASSERT_EQ(space.bases.size(), 1u);
  EXPECT_EQ(space.observed.at(1).base_id, 0);
  EXPECT_FALSE(space.observed.at(3).base_id.has_value());
  for (const auto& [r, obs] : space.observed) {
    if (obs.base_id) EXPECT_TRUE(is_variant_of(obs.bundle, space.base(*obs.base_id), space.ladders));
  }
}

TEST(BidLogCsv, WriteThenParse) {
  const auto log = make_bid_log({{1, "X", "A", 3}, {1, "Y", "B", 2}, {2, "X", "A", 1}, {2, "Y", "B", 2}}, abc());
  std::ostringstream out;
  write_bid_log_csv(out, log.rows);
  const auto p = fixtures::temp_file("bids_rt.csv", out.str());
  EXPECT_EQ(parse_bid_log(p, abc()).history(), log.history());
}
