#include <gtest/gtest.h>

#include <clockauction/engine.hpp>
#include <clockauction/error.hpp>
#include <clockauction/synthetic.hpp>

#include "fixtures.hpp"

using namespace clockauction;
using fixtures::product;

namespace {

ProductCatalog ab(int supply = 9) { return ProductCatalog({product("A", supply, 1, 0), product("B", supply, 1, 0)}); }

PriceVector p(std::int64_t a, std::int64_t b) { return {{"A", Money::dollars(a)}, {"B", Money::dollars(b)}}; }

AuctionConfig config(ProductCatalog cat) {
  AuctionConfig c{std::move(cat), IncrementSchedule(0.1)};
  c.max_rounds = 200;
  return c;
}

}  // namespace

TEST(BestCopies, PicksHighestUtilityLevel) {
  const auto m = fixtures::model("X", {{{"A", 1}}}, {5}, {{"A", {1, 2, 3}, {0, 4, 2}}});
  EXPECT_EQ(best_copies(m.bases[0], m, p(3, 0), 10, ab()), (Bundle{{"A", 2}}));
}

TEST(BestCopies, ZeroPricesTakeTopLevels) {
  const auto m = fixtures::model("X", {{{"A", 1}, {"B", 2}}}, {5}, {{"A", {1, 2, 3}, {0, 4, 0}}, {"B", {2, 4}, {0, 1}}});
  EXPECT_EQ(best_copies(m.bases[0], m, p(0, 0), 100, ab()), (Bundle{{"A", 3}, {"B", 4}}));
}

TEST(BestCopies, EligibilityLimits) {
  const auto m = fixtures::model("X", {{{"A", 1}, {"B", 2}}}, {5}, {{"A", {1, 2, 3}, {0, 4, 3}}, {"B", {2, 4}, {0, 9}}});
  EXPECT_FALSE(best_copies(m.bases[0], m, p(0, 0), 0, ab()).has_value());
  EXPECT_FALSE(best_copies(m.bases[0], m, p(0, 0), 2, ab()).has_value());
  EXPECT_EQ(best_copies(m.bases[0], m, p(0, 0), 3, ab()), (Bundle{{"A", 1}, {"B", 2}}));
  // two spare points: B 2->4 is worth 18, A 1->3 only 7
  EXPECT_EQ(best_copies(m.bases[0], m, p(0, 0), 5, ab()), (Bundle{{"A", 1}, {"B", 4}}));
}

TEST(BestCopies, TieGoesToLargerLevel) {
  const auto m = fixtures::model("X", {{{"A", 1}}}, {5}, {{"A", {1, 2}, {0, 3}}});
  EXPECT_EQ(best_copies(m.bases[0], m, p(3, 0), 10, ab()), (Bundle{{"A", 2}}));
}

// Exhaustive search over every variant under the eligibility budget.
TEST(BestCopies, MatchesBruteForce) {
  std::mt19937_64 rng(21);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const ProductCatalog cat({product("A", 9, 1, 0), product("B", 9, 2, 0), product("C", 9, 3, 0), product("D", 9, 1, 0)});
  const std::vector<std::string> ids{"A", "B", "C", "D"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<fixtures::LadderSpec> ladders;
    Bundle base;
    for (const auto& id : ids) {
      if (uni(0, 3) == 0) continue;
      std::vector<int> levels;
      for (int q = 1; q <= 9; ++q) {
        if (uni(0, 2) == 0) levels.push_back(q);
      }
      if (levels.empty()) levels.push_back(uni(1, 9));
      std::vector<std::int64_t> marg{0};
      std::int64_t v = uni(0, 40);
      for (std::size_t k = 1; k < levels.size(); ++k) {
        marg.push_back(v);
        v = std::max<std::int64_t>(0, v - uni(0, 10));
      }
      base.set(id, levels[static_cast<std::size_t>(uni(0, static_cast<int>(levels.size()) - 1))]);
      ladders.push_back({id, levels, marg});
    }
    if (base.empty()) continue;
    const auto m = fixtures::model("X", {base}, {uni(0, 50)}, ladders);
    const PriceVector prices{{"A", Money::dollars(uni(0, 30))},
                             {"B", Money::dollars(uni(0, 30))},
                             {"C", Money::dollars(uni(0, 30))},
                             {"D", Money::dollars(uni(0, 30))}};
    const int elig = uni(0, 60);

    std::optional<Money> best;
    for (const auto& b : enumerate_variants(m.bases[0], m.ladders)) {
      if (eligibility_cost(b, cat) > elig) continue;
      const Money u = fixtures::oracle_utility(m, m.bases[0], b, prices);
      if (!best || u > *best) best = u;
    }
    const auto got = best_copies(m.bases[0], m, prices, elig, cat);
    ASSERT_EQ(got.has_value(), best.has_value()) << "trial " << trial;
    if (!got) continue;
    EXPECT_LE(eligibility_cost(*got, cat), elig);
    EXPECT_EQ(fixtures::oracle_utility(m, m.bases[0], *got, prices), *best) << "trial " << trial;
  }
}

TEST(MyopicBid, LowerBaseWinsTies) {
  const auto m = fixtures::model("X", {{{"A", 1}}, {{"B", 1}}}, {10, 10}, {{"A", {1}, {0}}, {"B", {1}, {0}}});
  const auto agent = make_agent(m, ab());
  EXPECT_EQ(myopic_bid(agent, p(5, 5), ab()), (Bundle{{"A", 1}}));
  EXPECT_EQ(myopic_bid(agent, p(6, 5), ab()), (Bundle{{"B", 1}}));
}

TEST(MyopicBid, NegativeUtilityDropsOut) {
  const auto m = fixtures::model("X", {{{"A", 1}}}, {1}, {{"A", {1}, {0}}});
  const auto agent = make_agent(m, ab());
  EXPECT_FALSE(myopic_bid(agent, p(5, 0), ab()).has_value());
  EXPECT_EQ(myopic_bid(agent, p(1, 0), ab()), (Bundle{{"A", 1}}));  // zero utility still bids
}

TEST(RunAuction, SingleBidderClearsInOneRound) {
  ProductCatalog cat({product("A", 3, 1, 10), product("B", 3, 1, 10)});
  const auto m = fixtures::model("X", {{{"A", 2}}}, {100}, {{"A", {2}, {0}}});
  const auto t = run_auction(config(cat), {make_agent(m, cat)});
  EXPECT_EQ(t.rounds_used, 1);
  EXPECT_FALSE(t.truncated);
  EXPECT_EQ(t.final_allocation.at("X"), (Bundle{{"A", 2}}));
  EXPECT_EQ(t.revenue, Money::dollars(20));
}

TEST(RunAuction, CompetitionRaisesPricesUntilSupplyFits) {
  ProductCatalog cat({product("A", 2, 1, 10)});
  const auto x = fixtures::model("X", {{{"A", 2}}}, {60}, {{"A", {2}, {0}}});
  const auto y = fixtures::model("Y", {{{"A", 2}}}, {90}, {{"A", {2}, {0}}});
  const auto t = run_auction(config(cat), {make_agent(x, cat), make_agent(y, cat)});
  EXPECT_GT(t.rounds_used, 1);
  EXPECT_TRUE(t.final_allocation.at("X").empty());
  EXPECT_EQ(t.final_allocation.at("Y"), (Bundle{{"A", 2}}));
  EXPECT_LE(t.revenue, Money::dollars(90));
  for (std::size_t r = 1; r < t.rounds.size(); ++r) {
    EXPECT_GE(t.rounds[r].start.at("A"), t.rounds[r - 1].start.at("A"));
  }
}

TEST(RunAuction, NoAgents) {
  const auto t = run_auction(config(ab()), {});
  EXPECT_EQ(t.rounds_used, 1);
  EXPECT_EQ(t.revenue, Money{});
  EXPECT_TRUE(t.final_allocation.empty());
}

TEST(RunAuction, TruncatesAtRoundLimit) {
  ProductCatalog cat({product("A", 1, 1, 10)});
  const auto x = fixtures::model("X", {{{"A", 1}}}, {1'000'000}, {{"A", {1}, {0}}});
  const auto y = fixtures::model("Y", {{{"A", 1}}}, {1'000'000}, {{"A", {1}, {0}}});
  auto c = config(cat);
  c.max_rounds = 5;
  const auto t = run_auction(c, {make_agent(x, cat), make_agent(y, cat)});
  EXPECT_TRUE(t.truncated);
  EXPECT_EQ(t.rounds_used, 5);
}

TEST(RunAuction, RejectsDuplicateBidders) {
  const auto m = fixtures::model("X", {{{"A", 1}}}, {1}, {{"A", {1}, {0}}});
  EXPECT_THROW(run_auction(config(ab()), {make_agent(m, ab()), make_agent(m, ab())}), ValidationError);
}

TEST(RunAuction, EligibilityNeverIncreases) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SyntheticSpec spec;
    spec.seed = seed;
    const auto market = generate_market(spec);
    const auto t = run_auction(market.config, market.agents);
    for (std::size_t r = 1; r < t.rounds.size(); ++r) {
      for (const auto& [bidder, e] : t.rounds[r].eligibility) EXPECT_LE(e, t.rounds[r - 1].eligibility.at(bidder));
    }
    EXPECT_EQ(run_auction(market.config, market.agents), t);
  }
}

TEST(CompareAllocations, RmseExample) {
  const ProductCatalog cat({product("A", 9, 1, 0), product("B", 9, 1, 0), product("C", 9, 1, 0), product("D", 9, 1, 0)});
  const std::map<BidderId, Bundle> a{{"X", {{"A", 1}}}, {"Y", {{"B", 2}}}};
  const std::map<BidderId, Bundle> b{{"X", {}}, {"Y", {{"B", 2}}}};
  const auto c = compare_allocations(a, b, cat);
  EXPECT_DOUBLE_EQ(c.per_bidder.at("X"), 0.5);
  EXPECT_DOUBLE_EQ(c.per_bidder.at("Y"), 0.0);
  EXPECT_DOUBLE_EQ(c.aggregate, 0.25);
  EXPECT_DOUBLE_EQ(compare_allocations(a, a, cat).aggregate, 0.0);
}
