#include "clockauction/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "clockauction/csv.hpp"
#include "clockauction/error.hpp"

namespace clockauction {
namespace {

constexpr std::int64_t kPpm = 1'000'000;

std::string_view level_name(CostLevel l) {
  switch (l) {
    case CostLevel::kLow:
      return "low";
    case CostLevel::kMid:
      return "mid";
    case CostLevel::kHigh:
      return "high";
  }
  return "low";
}

}  // namespace

CostScenario CostScenario::no_weighting() { return {"NoWeighting", CostLevel::kLow, Weighting::kNone}; }
CostScenario CostScenario::population_weighted_high() {
  return {"PopulationWeightedHigh", CostLevel::kHigh, Weighting::kPopulation};
}
CostScenario CostScenario::area_weighted_mid() { return {"AreaWeightedMid", CostLevel::kMid, Weighting::kArea}; }
CostScenario CostScenario::combined_mid() { return {"CombinedMid", CostLevel::kMid, Weighting::kBoth}; }

std::array<CostScenario, 4> CostScenario::all() {
  return {no_weighting(), population_weighted_high(), area_weighted_mid(), combined_mid()};
}

CostScenario CostScenario::named(std::string_view key) {
  for (const auto& s : all()) {
    if (key == s.cli_key() || key == s.name) return s;
  }
  throw ValidationError("unknown cost scenario '" + std::string(key) + "' (expected none, pop-high, area-mid, combined)");
}

std::string_view CostScenario::cli_key() const {
  switch (weighting) {
    case Weighting::kNone:
      return "none";
    case Weighting::kPopulation:
      return "pop-high";
    case Weighting::kArea:
      return "area-mid";
    case Weighting::kBoth:
      return "combined";
  }
  return "none";
}

Money CostParameters::tower_cost_mid() const {
  const std::int64_t sum = tower_cost_low.in_cents() + tower_cost_high.in_cents();
  return Money::cents(sum / 2 + (sum % 2 != 0 ? 1 : 0));
}

Money CostParameters::tower_cost(CostLevel level) const {
  switch (level) {
    case CostLevel::kLow:
      return tower_cost_low;
    case CostLevel::kMid:
      return tower_cost_mid();
    case CostLevel::kHigh:
      return tower_cost_high;
  }
  return tower_cost_low;
}

double CostParameters::adjustment_factor() const {
  return (1.0 + market_markup) * (1.0 + inflation) * (1.0 + currency_premium);
}

double CostParameters::spacing(AreaClass c) const {
  auto it = spacing_km.find(c);
  if (it == spacing_km.end()) throw ValidationError("no fibre spacing for " + std::string(to_string(c)));
  return it->second;
}

void CostParameters::validate() const {
  if (tower_cost_low < Money{} || tower_cost_low > tower_cost_high) {
    throw ValidationError("tower costs must satisfy 0 <= low <= high");
  }
  if (fibre_cost_per_km < Money{}) throw ValidationError("negative fibre cost");
  if (market_markup < 0.0 || inflation < 0.0 || currency_premium < 0.0) {
    throw ValidationError("adjustment factors must be non-negative");
  }
  if (pop_per_tower < 1) throw ValidationError("pop_per_tower must be >= 1");
  for (const auto& [c, km] : spacing_km) {
    if (!(km >= 0.0)) throw ValidationError("negative fibre spacing for " + std::string(to_string(c)));
  }
  coverage.validate();
}

nlohmann::json to_json(const CostParameters& p) {
  nlohmann::json spacing = nlohmann::json::object();
  for (const auto& [c, km] : p.spacing_km) spacing[std::string(to_string(c))] = km;
  return {{"tower_cost_low", p.tower_cost_low.to_string()},
          {"tower_cost_high", p.tower_cost_high.to_string()},
          {"fibre_cost_per_km", p.fibre_cost_per_km.to_string()},
          {"market_markup", p.market_markup},
          {"inflation", p.inflation},
          {"currency_premium", p.currency_premium},
          {"pop_per_tower", p.pop_per_tower},
          {"spacing_km", spacing},
          {"tower_costs_pre_adjustment", p.tower_costs_pre_adjustment},
          {"coverage", p.coverage.to_json()}};
}

CostParameters cost_parameters_from_json(const nlohmann::json& j) {
  CostParameters p;
  auto money = [&](const char* key, Money& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    out = v.is_string() ? Money::parse(v.get<std::string>()) : Money::parse(v.dump());
  };
  try {
    money("tower_cost_low", p.tower_cost_low);
    money("tower_cost_high", p.tower_cost_high);
    money("fibre_cost_per_km", p.fibre_cost_per_km);
    p.market_markup = j.value("market_markup", p.market_markup);
    p.inflation = j.value("inflation", p.inflation);
    p.currency_premium = j.value("currency_premium", p.currency_premium);
    p.pop_per_tower = j.value("pop_per_tower", p.pop_per_tower);
    p.tower_costs_pre_adjustment = j.value("tower_costs_pre_adjustment", p.tower_costs_pre_adjustment);
    if (j.contains("spacing_km")) {
      for (const auto& [cls, km] : j.at("spacing_km").items()) p.spacing_km[parse_area_class(cls)] = km.get<double>();
    }
    if (j.contains("coverage")) p.coverage = CoverageTable::from_json(j.at("coverage"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed cost parameters: ") + e.what());
  }
  p.validate();
  return p;
}

void TowerInventory::set(const BidderId& bidder, const AreaId& area, std::int64_t towers) {
  if (towers < 0) throw ValidationError("negative tower count for " + bidder + " in " + area);
  towers_[{bidder, area}] = towers;
}

std::optional<std::int64_t> TowerInventory::find(const BidderId& bidder, const AreaId& area) const {
  auto it = towers_.find({bidder, area});
  if (it == towers_.end()) return std::nullopt;
  return it->second;
}

std::vector<BidderId> TowerInventory::bidders() const {
  std::set<BidderId> ids;
  for (const auto& [key, n] : towers_) ids.insert(key.first);
  return {ids.begin(), ids.end()};
}

TowerInventory load_inventory(const std::filesystem::path& path) {
  const auto t = csv::Table::read(path);
  const auto c_bidder = t.column("bidder_id");
  const auto c_area = t.column("area_id");
  const auto c_count = t.column("tower_count");
  TowerInventory out;
  for (const auto& row : t.rows()) {
    const auto& bidder = t.field(row, c_bidder);
    const auto& area = t.field(row, c_area);
    if (out.find(bidder, area)) throw ParseError(t.source(), row.line, "repeated inventory row for " + bidder + "/" + area);
    try {
      out.set(bidder, area, t.integer(row, c_count));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(t.source(), row.line, e.what());
    }
  }
  return out;
}

std::int64_t towers_needed(std::int64_t population, double coverage, std::int64_t existing,
                           std::int64_t pop_per_tower) {
  if (!(coverage >= 0.0 && coverage <= 1.0)) throw ValidationError("coverage target outside [0, 1]");
  if (pop_per_tower < 1) throw ValidationError("pop_per_tower must be >= 1");
  if (population <= 0) return 0;
  const std::int64_t ppm = std::llround(coverage * kPpm);
  const std::int64_t covered = population * ppm;  // population < 9.2e12 keeps this in range
  const std::int64_t denom = kPpm * pop_per_tower;
  const std::int64_t required = covered / denom + (covered % denom != 0 ? 1 : 0);
  return std::max<std::int64_t>(0, required - existing);
}

WeightingReference WeightingReference::medians(const Demographics& demographics) {
  return {demographics.median_density(), demographics.median_land_area()};
}

double fibre_multiplier(const AreaStats& area, Weighting weighting, const WeightingReference& ref) {
  double m = 1.0;
  if (weighting == Weighting::kPopulation || weighting == Weighting::kBoth) {
    const double d = area.density();
    m *= d > 0.0 ? std::clamp(ref.density / d, 0.5, 2.0) : 2.0;
  }
  if (weighting == Weighting::kArea || weighting == Weighting::kBoth) {
    m *= ref.land_area_km2 > 0.0 ? std::clamp(area.land_area_km2 / ref.land_area_km2, 0.5, 2.0) : 1.0;
  }
  return m;
}

CostBreakdown deployment_cost(const AreaStats& area, std::int64_t existing_towers, DeploymentTier tier,
                              const CostScenario& scenario, const CostParameters& params,
                              const WeightingReference& ref) {
  CostBreakdown out;
  const double target = params.coverage.fraction(area.area_class, tier);
  out.new_towers = towers_needed(area.population, target, existing_towers, params.pop_per_tower);
  if (out.new_towers == 0) return out;
  const double factor = params.adjustment_factor();
  const Money tower = params.tower_cost(scenario.base_cost_level);
  out.towers = params.tower_costs_pre_adjustment
                   ? Money::round_cents(static_cast<double>(tower.in_cents()) * factor * static_cast<double>(out.new_towers))
                   : tower * out.new_towers;
  const double km = static_cast<double>(out.new_towers) * params.spacing(area.area_class);
  out.fibre = Money::round_cents(km * static_cast<double>(params.fibre_cost_per_km.in_cents()) * factor *
                                 fibre_multiplier(area, scenario.weighting, ref));
  return out;
}

CostTable build_cost_table(const ProductCatalog& catalog, const Demographics& demographics,
                           const TowerInventory& inventory, const CostScenario& scenario,
                           const CostParameters& params, std::vector<BidderId> bidders) {
  params.validate();
  if (bidders.empty()) bidders = inventory.bidders();
  std::sort(bidders.begin(), bidders.end());
  bidders.erase(std::unique(bidders.begin(), bidders.end()), bidders.end());
  const auto ref = WeightingReference::medians(demographics);

  CostTable out;
  for (const auto& area_id : catalog.area_ids()) {
    const auto& area = demographics.at(area_id);
    for (const auto& bidder : bidders) {
      auto existing = inventory.find(bidder, area_id);
      if (!existing) {
        out.warnings.push_back("no tower inventory for " + bidder + " in " + area_id + "; assuming 0");
      }
      for (auto t : kTiers) {
        out.table.set(bidder, area_id, t, deployment_cost(area, existing.value_or(0), t, scenario, params, ref).total());
      }
    }
  }
  out.table.validate();
  return out;
}

std::string_view to_string(CostLevel l) { return level_name(l); }

}  // namespace clockauction
