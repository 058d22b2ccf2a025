#include <gtest/gtest.h>

#include <set>

#include <clockauction/error.hpp>
#include <clockauction/extended.hpp>
#include <clockauction/synthetic.hpp>

#include "fixtures.hpp"

using namespace clockauction;
using fixtures::product;

namespace {

constexpr auto L = DeploymentTier::kLow;
constexpr auto M = DeploymentTier::kMedium;
constexpr auto H = DeploymentTier::kHigh;

TierFlags flags(bool l, bool m, bool h) { return {l, m, h}; }

TierPrices uniform(const PriceVector& p) { return {p, p, p}; }

/// Independent reading of the rule: tier t is overdemanded when demand at t or stricter exceeds supply.
TierFlags oracle_overdemand(const TierArray& d, int s) {
  TierFlags out{};
  for (int t = 0; t < 3; ++t) {
    int at_least = 0;
    for (int u = t; u < 3; ++u) at_least += d[u];
    out[t] = at_least > s;
  }
  return out;
}

TieredValuationAdjustment flat_adjustment(const std::vector<BidderId>& bidders, const ProductCatalog& cat,
                                          std::array<std::int64_t, 3> dollars) {
  TieredValuationAdjustment adj;
  for (const auto& b : bidders) {
    for (const auto& p : cat.products()) {
      for (auto t : kTiers) adj.set(b, p.area_id, t, Money::dollars(dollars[index(t)]));
    }
  }
  return adj;
}

Money oracle_tiered_utility(const ValuationModel& m, const BundleBase& base, const TieredBundle& b,
                            const TierPrices& prices, const ProductCatalog& cat,
                            const TieredValuationAdjustment& adj) {
  Bundle plain;
  Money cost;
  std::set<std::pair<AreaId, DeploymentTier>> engaged;
  for (const auto& [id, h] : b) {
    plain.set(id, h.quantity);
    cost += prices[index(h.tier)].at(id) * h.quantity;
    engaged.emplace(cat.at(id).area_id, h.tier);
  }
  Money value = fixtures::oracle_value(m, base, plain);
  for (const auto& [area, t] : engaged) cost += adj.cost(m.bidder, area, t);
  return value - cost;
}

}  // namespace

TEST(TierOverdemand, Examples) {
  EXPECT_EQ(tier_overdemand({2, 1, 2}, 4), flags(true, false, false));
  EXPECT_EQ(tier_overdemand({0, 0, 5}, 4), flags(true, true, true));
  EXPECT_EQ(tier_overdemand({0, 0, 0}, 4), flags(false, false, false));
  EXPECT_EQ(tier_overdemand({0, 3, 2}, 4), flags(true, true, false));
}

TEST(TierOverdemand, ExhaustiveSmallTables) {
  for (int s = 1; s <= 6; ++s) {
    for (int l = 0; l <= 2 * s; ++l) {
      for (int m = 0; l + m <= 2 * s; ++m) {
        for (int h = 0; l + m + h <= 2 * s; ++h) {
          const TierArray d{l, m, h};
          const auto f = tier_overdemand(d, s);
          EXPECT_EQ(f, oracle_overdemand(d, s));
          EXPECT_TRUE(!f[2] || f[1]);
          EXPECT_TRUE(!f[1] || f[0]);
        }
      }
    }
  }
}

TEST(TieredUtility, LumpSumPerAreaAndTier) {
  const ProductCatalog cat({product("A", 9, 1, 0, "Z1"), product("B", 9, 1, 0, "Z1"), product("C", 9, 1, 0, "Z2")});
  const auto m = fixtures::model("X", {{{"A", 1}, {"B", 1}, {"C", 1}}}, {100},
                                 {{"A", {1}, {0}}, {"B", {1}, {0}}, {"C", {1}, {0}}});
  const auto adj = flat_adjustment({"X"}, cat, {5, 7, 11});
  const PriceVector zero{{"A", Money{}}, {"B", Money{}}, {"C", Money{}}};
  // A and B share Z1 at Low: one charge of 5; C at High in Z2: 11
  const TieredBundle b{{"A", {1, L}}, {"B", {1, L}}, {"C", {1, H}}};
  EXPECT_EQ(deployment_charge("X", b, cat, adj), Money::dollars(16));
  EXPECT_EQ(tiered_utility(m, b, m.bases[0], uniform(zero), cat, adj), Money::dollars(84));
  const TieredBundle split{{"A", {1, L}}, {"B", {1, M}}, {"C", {1, L}}};
  EXPECT_EQ(deployment_charge("X", split, cat, adj), Money::dollars(17));
}

TEST(TieredBestCopies, ZeroCostHighTierWinsWhenLowIsDearer) {
  const ProductCatalog cat({product("A", 9, 1, 0, "Z1")});
  const auto m = fixtures::model("X", {{{"A", 1}}}, {100}, {{"A", {1}, {0}}});
  TieredValuationAdjustment adj;
  adj.set("X", "Z1", L, Money::dollars(5));
  adj.set("X", "Z1", M, Money::dollars(5));
  adj.set("X", "Z1", H, Money{});
  EXPECT_THROW(adj.validate(), ValidationError);  // not monotone, but complete
  EXPECT_NO_THROW(adj.validate_complete());

  const TierPrices close{PriceVector{{"A", Money::dollars(10)}}, PriceVector{{"A", Money::dollars(10)}},
                         PriceVector{{"A", Money::dollars(12)}}};
  const auto b = tiered_best_copies(m.bases[0], m, close, 10, cat, adj);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->at("A").tier, H);

  const TierPrices far{PriceVector{{"A", Money::dollars(10)}}, PriceVector{{"A", Money::dollars(10)}},
                       PriceVector{{"A", Money::dollars(20)}}};
  // Low and Medium tie at 15; the stricter tier wins
  EXPECT_EQ(tiered_best_copies(m.bases[0], m, far, 10, cat, adj)->at("A").tier, M);
}

TEST(TieredBestCopies, MatchesBruteForce) {
  std::mt19937_64 rng(33);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const ProductCatalog cat({product("A", 9, 1, 0, "Z1"), product("B", 9, 2, 0, "Z1"), product("C", 9, 1, 0, "Z2")});
  const std::vector<std::string> ids{"A", "B", "C"};
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<fixtures::LadderSpec> ladders;
    Bundle base;
    for (const auto& id : ids) {
      if (uni(0, 3) == 0) continue;
      std::vector<int> levels;
      for (int q = 1; q <= 6; ++q) {
        if (uni(0, 2) == 0) levels.push_back(q);
      }
      if (levels.empty()) levels.push_back(uni(1, 6));
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
    const auto m = fixtures::model("X", {base}, {uni(0, 80)}, ladders);
    TierPrices prices;
    for (const auto& id : ids) {
      std::int64_t pl = uni(0, 20);
      const std::int64_t pm = pl + uni(0, 5);
      const std::int64_t ph = pm + uni(0, 5);
      prices[0].set(id, Money::dollars(pl));
      prices[1].set(id, Money::dollars(pm));
      prices[2].set(id, Money::dollars(ph));
    }
    TieredValuationAdjustment adj;
    for (const char* area : {"Z1", "Z2"}) {
      std::int64_t c = uni(0, 2) == 0 ? 0 : uni(0, 15);
      for (auto t : kTiers) {
        adj.set("X", area, t, Money::dollars(c));
        c += uni(0, 8);
      }
    }
    const int elig = uni(0, 30);

    std::optional<Money> best;
    for (const auto& v : enumerate_variants(m.bases[0], m.ladders)) {
      if (eligibility_cost(v, cat) > elig) continue;
      const auto n = static_cast<int>(v.support_size());
      int combos = 1;
      for (int i = 0; i < n; ++i) combos *= 3;
      for (int mask = 0; mask < combos; ++mask) {
        TieredBundle tb;
        int rest = mask;
        for (const auto& [id, q] : v.items()) {
          tb[id] = {q, kTiers[static_cast<std::size_t>(rest % 3)]};
          rest /= 3;
        }
        const Money u = oracle_tiered_utility(m, m.bases[0], tb, prices, cat, adj);
        if (!best || u > *best) best = u;
      }
    }
    const auto got = tiered_best_copies(m.bases[0], m, prices, elig, cat, adj);
    ASSERT_EQ(got.has_value(), best.has_value()) << "trial " << trial;
    if (!got) continue;
    EXPECT_LE(eligibility_cost(untiered(*got), cat), elig);
    EXPECT_EQ(oracle_tiered_utility(m, m.bases[0], *got, prices, cat, adj), *best) << "trial " << trial;
  }
}

TEST(ExtendedAuction, PriceGradientAndSupplyAtClose) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    SyntheticSpec spec;
    spec.seed = seed;
    spec.num_products = 6;
    spec.num_bidders = 4;
    const auto market = generate_market(spec);
    std::mt19937_64 rng(seed);
    TieredValuationAdjustment adj;
    for (const auto& a : market.agents) {
      for (const auto& p : market.config.catalog.products()) {
        if (adj.contains(a.bidder, p.area_id)) continue;
        std::int64_t c = std::uniform_int_distribution<std::int64_t>(0, 2000)(rng);
        for (auto t : kTiers) {
          adj.set(a.bidder, p.area_id, t, Money::cents(c));
          c += std::uniform_int_distribution<std::int64_t>(0, 3000)(rng);
        }
      }
    }
    const auto t = run_extended_auction(market.config, market.agents, adj);
    EXPECT_FALSE(t.truncated);
    for (const auto& r : t.rounds) {
      for (const auto& p : market.config.catalog.products()) {
        EXPECT_LE(r.posted[2].at(p.id), r.posted[1].at(p.id));
        EXPECT_LE(r.posted[1].at(p.id), r.posted[0].at(p.id));
        for (std::size_t i = 0; i < 3; ++i) EXPECT_GE(r.posted[i].at(p.id), r.start[i].at(p.id));
      }
    }
    for (const auto& p : market.config.catalog.products()) {
      const auto& d = t.rounds.back().aggregate.at(p.id);
      EXPECT_LE(d[0] + d[1] + d[2], p.supply);
    }
    EXPECT_EQ(run_extended_auction(market.config, market.agents, adj), t);
  }
}

TEST(ExtendedAuction, RequiresCompleteAdjustment) {
  const ProductCatalog cat({product("A", 1, 1, 1, "Z1")});
  const auto m = fixtures::model("X", {{{"A", 1}}}, {10}, {{"A", {1}, {0}}});
  TieredValuationAdjustment adj;
  adj.set("X", "Z1", L, Money{});
  AuctionConfig config{cat, IncrementSchedule(0.1)};
  EXPECT_THROW(run_extended_auction(config, {make_agent(m, cat)}, adj), ValidationError);
}

TEST(ExtendedAuction, CompetitionPushesOneBidderToHigh) {
  // Y values the license far more and pays nothing extra for High; X only wants Low.
  const ProductCatalog cat({product("A", 1, 1, 10, "Z1")});
  const auto x = fixtures::model("X", {{{"A", 1}}}, {40}, {{"A", {1}, {0}}});
  const auto y = fixtures::model("Y", {{{"A", 1}}}, {200}, {{"A", {1}, {0}}});
  TieredValuationAdjustment adj;
  for (auto t : kTiers) {
    adj.set("X", "Z1", t, Money::dollars(t == L ? 0 : 1000));
    adj.set("Y", "Z1", t, Money{});
  }
  AuctionConfig config{cat, IncrementSchedule(0.1)};
  const auto t = run_extended_auction(config, {make_agent(x, cat), make_agent(y, cat)}, adj);
  EXPECT_TRUE(t.final_allocation.at("X").empty());
  EXPECT_EQ(t.final_allocation.at("Y").at("A").quantity, 1);
}

TEST(Coverage, AdditionalPopulation) {
  const ProductCatalog cat({product("A", 2, 1, 0, "Z1", AreaClass::kRural), product("B", 2, 1, 0, "Z2", AreaClass::kUrban)});
  const Demographics demo({{"Z1", AreaClass::kRural, 100000, 500.0}, {"Z2", AreaClass::kUrban, 40000, 20.0}});
  const auto cov = CoverageTable::defaults();

  TieredTrace low;
  low.final_allocation["X"] = {{"A", {2, L}}, {"B", {1, L}}};
  const auto s0 = coverage_report(low, cat, demo, cov);
  EXPECT_EQ(s0.additional_population, 0);
  EXPECT_EQ(s0.licenses_by_tier, (TierArray{3, 0, 0}));
  EXPECT_EQ(s0.total_supply, 4);

  CoverageTable custom = cov;
  custom.set(AreaClass::kRural, L, 0.10);
  custom.set(AreaClass::kRural, H, 0.40);
  TieredTrace high;
  high.final_allocation["X"] = {{"A", {1, H}}};
  high.final_allocation["Y"] = {{"A", {1, M}}};
  const auto s1 = coverage_report(high, cat, demo, custom);
  EXPECT_EQ(s1.additional_population, 30000);  // strictest tier in Z1 is High, 0.30 over Low
  EXPECT_EQ(s1.licenses_by_class.at(AreaClass::kRural), (TierArray{0, 1, 1}));

  const Demographics partial({{"Z1", AreaClass::kRural, 100000, 500.0}});
  EXPECT_THROW(coverage_report(low, cat, partial, cov), ValidationError);
}

TEST(Coverage, DefaultsAreMonotone) {
  const auto cov = CoverageTable::defaults();
  EXPECT_NO_THROW(cov.validate());
  EXPECT_DOUBLE_EQ(cov.fraction(AreaClass::kRemote, L), 0.05);
  EXPECT_DOUBLE_EQ(cov.fraction(AreaClass::kMetro, H), 0.70);
  EXPECT_EQ(CoverageTable::from_json(cov.to_json()).to_json(), cov.to_json());
}

TEST(Adjustment, CsvRoundTrip) {
  const ProductCatalog cat({product("A", 1, 1, 1, "Z1"), product("B", 1, 1, 1, "Z2")});
  const auto adj = flat_adjustment({"X", "Y"}, cat, {1, 2, 3});
  std::ostringstream out;
  write_adjustment_csv(out, adj);
  EXPECT_EQ(load_adjustment(fixtures::temp_file("adj.csv", out.str())), adj);
  EXPECT_THROW(TieredValuationAdjustment().set("X", "Z1", L, Money::dollars(-1)), ValidationError);
}
