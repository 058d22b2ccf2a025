#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <clockauction/costmodel.hpp>
#include <clockauction/error.hpp>

#include "fixtures.hpp"

using namespace clockauction;
using fixtures::product;

namespace {

constexpr auto L = DeploymentTier::kLow;
constexpr auto M = DeploymentTier::kMedium;
constexpr auto H = DeploymentTier::kHigh;

ProductCatalog two_areas() {
  return ProductCatalog({product("P1", 2, 1, 0, "Z1", AreaClass::kRural), product("P2", 2, 1, 0, "Z2", AreaClass::kUrban)});
}

Demographics demo() {
  return Demographics({{"Z1", AreaClass::kRural, 180'000, 3000.0}, {"Z2", AreaClass::kUrban, 420'000, 150.0}});
}

TowerInventory inventory(std::int64_t towers) {
  TowerInventory inv;
  for (const char* b : {"X", "Y"}) {
    for (const char* a : {"Z1", "Z2"}) inv.set(b, a, towers);
  }
  return inv;
}

std::string csv_of(const TieredValuationAdjustment& t) {
  std::ostringstream out;
  write_adjustment_csv(out, t);
  return out.str();
}

}  // namespace

TEST(TowersNeeded, Examples) {
  EXPECT_EQ(towers_needed(100'000, 0.70, 2, 20'000), 2);
  EXPECT_EQ(towers_needed(100'000, 0.70, 4, 20'000), 0);
  EXPECT_EQ(towers_needed(100'000, 0.70, 9, 20'000), 0);
  EXPECT_EQ(towers_needed(0, 0.70, 0, 20'000), 0);
  EXPECT_EQ(towers_needed(100'000, 0.60, 0, 20'000), 3);   // exactly 60000 / 20000
  EXPECT_EQ(towers_needed(100'001, 0.60, 0, 20'000), 4);
  EXPECT_THROW(towers_needed(1, 1.5, 0, 20'000), ValidationError);
}

TEST(CostParameters, MidTowerCost) {
  const CostParameters p;
  EXPECT_EQ(p.tower_cost_mid(), Money::cents(32'332'850));
  EXPECT_EQ(p.tower_cost(CostLevel::kLow), Money::dollars(286'176));
  EXPECT_EQ(p.tower_cost(CostLevel::kHigh), Money::dollars(360'481));
  EXPECT_NEAR(p.adjustment_factor(), 1.573, 1e-12);
}

TEST(CostParameters, JsonRoundTripAndValidation) {
  CostParameters p;
  p.fibre_cost_per_km = Money::parse("31000.50");
  p.spacing_km[AreaClass::kRemote] = 20.0;
  p.tower_costs_pre_adjustment = true;
  const auto back = cost_parameters_from_json(to_json(p));
  EXPECT_EQ(to_json(back), to_json(p));
  EXPECT_EQ(cost_parameters_from_json(nlohmann::json::object()).fibre_cost_per_km, Money::dollars(25'000));
  EXPECT_THROW(cost_parameters_from_json({{"tower_cost_low", "400000"}}), ValidationError);
  EXPECT_THROW(cost_parameters_from_json({{"pop_per_tower", 0}}), ValidationError);
}

TEST(CostScenario, Names) {
  EXPECT_EQ(CostScenario::named("none").name, "NoWeighting");
  EXPECT_EQ(CostScenario::named("pop-high").base_cost_level, CostLevel::kHigh);
  EXPECT_EQ(CostScenario::named("AreaWeightedMid").weighting, Weighting::kArea);
  EXPECT_EQ(CostScenario::named("combined").base_cost_level, CostLevel::kMid);
  EXPECT_THROW(CostScenario::named("mid"), ValidationError);
  for (const auto& s : CostScenario::all()) EXPECT_EQ(CostScenario::named(s.cli_key()).name, s.name);
}

// Tower and fibre components recomputed by hand for one area.
TEST(DeploymentCost, MatchesHandComputation) {
  const CostParameters p;
  const AreaStats z1{"Z1", AreaClass::kRural, 180'000, 3000.0};
  const WeightingReference ref{100.0, 1500.0};
  // High rural target 0.50 -> ceil(90000 / 20000) = 5 towers, 1 existing
  const auto c = deployment_cost(z1, 1, H, CostScenario::area_weighted_mid(), p, ref);
  EXPECT_EQ(c.new_towers, 4);
  EXPECT_EQ(c.towers, Money::cents(32'332'850 * 4));
  // 4 towers * 7.5 km * $25000 * 1.573 * min(2, 3000 / 1500)
  const double fibre = 4 * 7.5 * 2'500'000.0 * 1.573 * 2.0;
  EXPECT_EQ(c.fibre, Money::cents(std::llround(fibre)));
  EXPECT_EQ(c.total(), c.towers + c.fibre);

  const auto none = deployment_cost(z1, 1, H, CostScenario::no_weighting(), p, ref);
  EXPECT_EQ(none.fibre, Money::cents(std::llround(4 * 7.5 * 2'500'000.0 * 1.573)));

  CostParameters pre = p;
  pre.tower_costs_pre_adjustment = true;
  const auto c2 = deployment_cost(z1, 1, H, CostScenario::area_weighted_mid(), pre, ref);
  EXPECT_EQ(c2.towers, Money::cents(std::llround(32'332'850.0 * 4 * 1.573)));
}

TEST(FibreMultiplier, ClampedRatios) {
  const WeightingReference ref{100.0, 1000.0};
  const AreaStats sparse{"S", AreaClass::kRemote, 1000, 1000.0};   // density 1
  const AreaStats dense{"D", AreaClass::kMetro, 500'000, 100.0};   // density 5000
  const AreaStats mid{"M", AreaClass::kUrban, 80'000, 1000.0};     // density 80
  EXPECT_DOUBLE_EQ(fibre_multiplier(sparse, Weighting::kPopulation, ref), 2.0);
  EXPECT_DOUBLE_EQ(fibre_multiplier(dense, Weighting::kPopulation, ref), 0.5);
  EXPECT_DOUBLE_EQ(fibre_multiplier(mid, Weighting::kPopulation, ref), 1.25);
  EXPECT_DOUBLE_EQ(fibre_multiplier(dense, Weighting::kArea, ref), 0.5);
  EXPECT_DOUBLE_EQ(fibre_multiplier(mid, Weighting::kBoth, ref), 1.25);
  EXPECT_DOUBLE_EQ(fibre_multiplier(dense, Weighting::kNone, ref), 1.0);
}

TEST(CostTable, ZeroDeficitGivesZeroCosts) {
  const auto t = build_cost_table(two_areas(), demo(), inventory(1000), CostScenario::combined_mid(), {});
  EXPECT_TRUE(t.warnings.empty());
  EXPECT_EQ(t.table.entries().size(), 12u);
  for (const auto& [key, cost] : t.table.entries()) EXPECT_EQ(cost, Money{});
}

TEST(CostTable, MonotoneInTierForEveryScenario) {
  for (const auto& s : CostScenario::all()) {
    const auto t = build_cost_table(two_areas(), demo(), inventory(2), s, {});
    for (const char* b : {"X", "Y"}) {
      for (const char* a : {"Z1", "Z2"}) {
        EXPECT_LE(t.table.cost(b, a, L), t.table.cost(b, a, M));
        EXPECT_LE(t.table.cost(b, a, M), t.table.cost(b, a, H));
      }
    }
    EXPECT_GT(t.table.cost("X", "Z1", H), Money{});
  }
}

TEST(CostTable, DeterministicBytes) {
  const auto a = build_cost_table(two_areas(), demo(), inventory(1), CostScenario::population_weighted_high(), {});
  const auto b = build_cost_table(two_areas(), demo(), inventory(1), CostScenario::population_weighted_high(), {});
  EXPECT_EQ(csv_of(a.table), csv_of(b.table));
}

TEST(CostTable, DoublingFibreRateDoublesOnlyFibre) {
  CostParameters p;
  CostParameters q = p;
  q.fibre_cost_per_km = p.fibre_cost_per_km * 2;
  const auto area = demo().at("Z1");
  const WeightingReference ref = WeightingReference::medians(demo());
  for (const auto& s : CostScenario::all()) {
    for (auto t : kTiers) {
      const auto a = deployment_cost(area, 0, t, s, p, ref);
      const auto b = deployment_cost(area, 0, t, s, q, ref);
      EXPECT_EQ(b.towers, a.towers);
      EXPECT_LE(std::llabs(b.fibre.in_cents() - 2 * a.fibre.in_cents()), 1);
    }
  }
}

TEST(CostTable, UniformAreasCostProportionalToDeficit) {
  const ProductCatalog cat({product("P1", 1, 1, 0, "Z1"), product("P2", 1, 1, 0, "Z2")});
  const Demographics d({{"Z1", AreaClass::kUrban, 200'000, 100.0}, {"Z2", AreaClass::kUrban, 200'000, 100.0}});
  TowerInventory inv;
  inv.set("X", "Z1", 0);
  inv.set("X", "Z2", 3);
  const auto t = build_cost_table(cat, d, inv, CostScenario::combined_mid(), {});
  // Low urban 0.40 -> 4 towers; deficits 4 and 1
  const auto z1 = t.table.cost("X", "Z1", L).in_cents();
  const auto z2 = t.table.cost("X", "Z2", L).in_cents();
  EXPECT_LE(std::llabs(z1 - 4 * z2), 4);
}

TEST(CostTable, MissingInventoryWarns) {
  TowerInventory inv;
  inv.set("X", "Z1", 3);
  const auto t = build_cost_table(two_areas(), demo(), inv, CostScenario::no_weighting(), {}, {"X", "Y"});
  EXPECT_EQ(t.warnings.size(), 3u);
  EXPECT_GT(t.table.cost("Y", "Z2", L), Money{});
  EXPECT_THROW(build_cost_table(two_areas(), Demographics({{"Z1", AreaClass::kRural, 1, 1.0}}), inv,
                                CostScenario::no_weighting(), {}),
               ValidationError);
}

TEST(Inventory, RejectsRepeatedRows) {
  const auto ok = fixtures::temp_file("inv_ok.csv", "bidder_id,area_id,tower_count\nX,Z1,3\nY,Z1,0\n");
  EXPECT_EQ(load_inventory(ok).find("X", "Z1"), 3);
  const auto dup = fixtures::temp_file("inv_dup.csv", "bidder_id,area_id,tower_count\nX,Z1,3\nX,Z1,4\n");
  EXPECT_THROW(load_inventory(dup), ParseError);
}
