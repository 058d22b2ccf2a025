#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "clockauction/deployment.hpp"

namespace clockauction {

enum class CostLevel { kLow, kMid, kHigh };
enum class Weighting { kNone, kPopulation, kArea, kBoth };

std::string_view to_string(CostLevel l);

struct CostScenario {
  std::string name;
  CostLevel base_cost_level = CostLevel::kLow;
  Weighting weighting = Weighting::kNone;

  static CostScenario no_weighting();
  static CostScenario population_weighted_high();
  static CostScenario area_weighted_mid();
  static CostScenario combined_mid();
  static std::array<CostScenario, 4> all();
  /// Accepts the CLI keys none, pop-high, area-mid, combined as well as the full names.
  static CostScenario named(std::string_view key);

  std::string_view cli_key() const;
};

struct CostParameters {
  Money tower_cost_low = Money::dollars(286'176);
  Money tower_cost_high = Money::dollars(360'481);
  /// Fibre rate per km before the adjustment factors.
  Money fibre_cost_per_km = Money::dollars(25'000);
  double market_markup = 0.10;
  double inflation = 0.10;
  double currency_premium = 0.30;
  std::int64_t pop_per_tower = 20'000;
  std::map<AreaClass, double> spacing_km{
      {AreaClass::kMetro, 1.0}, {AreaClass::kUrban, 1.0}, {AreaClass::kRural, 7.5}, {AreaClass::kRemote, 15.0}};
  /// When set, tower costs are scaled by the adjustment factors too.
  bool tower_costs_pre_adjustment = false;
  CoverageTable coverage = CoverageTable::defaults();

  /// Midpoint in whole cents, rounded half-up.
  Money tower_cost_mid() const;
  Money tower_cost(CostLevel level) const;
  double adjustment_factor() const;
  double spacing(AreaClass c) const;
  void validate() const;
};

nlohmann::json to_json(const CostParameters& p);
/// Missing keys keep their defaults.
CostParameters cost_parameters_from_json(const nlohmann::json& j);

/// Existing tower counts per (bidder, area).
class TowerInventory {
 public:
  void set(const BidderId& bidder, const AreaId& area, std::int64_t towers);
  std::optional<std::int64_t> find(const BidderId& bidder, const AreaId& area) const;
  std::vector<BidderId> bidders() const;
  const std::map<std::pair<BidderId, AreaId>, std::int64_t>& entries() const noexcept { return towers_; }

 private:
  std::map<std::pair<BidderId, AreaId>, std::int64_t> towers_;
};

/// Reads `bidder_id, area_id, tower_count`. Repeated keys are an error.
TowerInventory load_inventory(const std::filesystem::path& path);

/// max(0, ceil(population * coverage / pop_per_tower) - existing).
std::int64_t towers_needed(std::int64_t population, double coverage, std::int64_t existing,
                           std::int64_t pop_per_tower);

struct WeightingReference {
  double density = 0.0;
  double land_area_km2 = 0.0;

  static WeightingReference medians(const Demographics& demographics);
};

/// Multiplier applied to the fibre component.
double fibre_multiplier(const AreaStats& area, Weighting weighting, const WeightingReference& ref);

struct CostBreakdown {
  std::int64_t new_towers = 0;
  Money towers;
  Money fibre;

  Money total() const { return towers + fibre; }
};

CostBreakdown deployment_cost(const AreaStats& area, std::int64_t existing_towers, DeploymentTier tier,
                              const CostScenario& scenario, const CostParameters& params,
                              const WeightingReference& ref);

struct CostTable {
  TieredValuationAdjustment table;
  std::vector<std::string> warnings;
};

/// Covers every bidder in `bidders` (or in the inventory when empty) and every catalog area.
/// Missing inventory entries count as zero towers and add a warning.
CostTable build_cost_table(const ProductCatalog& catalog, const Demographics& demographics,
                           const TowerInventory& inventory, const CostScenario& scenario,
                           const CostParameters& params, std::vector<BidderId> bidders = {});

}  // namespace clockauction
