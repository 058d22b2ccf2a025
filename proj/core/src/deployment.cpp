#include "clockauction/deployment.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include "clockauction/csv.hpp"
#include "clockauction/error.hpp"

namespace clockauction {
namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw ValidationError("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string_view to_string(DeploymentTier t) {
  switch (t) {
    case DeploymentTier::kLow:
      return "low";
    case DeploymentTier::kMedium:
      return "medium";
    case DeploymentTier::kHigh:
      return "high";
  }
  return "low";
}

DeploymentTier parse_tier(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "low") return DeploymentTier::kLow;
  if (lower == "medium" || lower == "mid") return DeploymentTier::kMedium;
  if (lower == "high") return DeploymentTier::kHigh;
  throw ValidationError("unknown deployment tier '" + std::string(text) + "'");
}

Demographics::Demographics(std::vector<AreaStats> areas) : areas_(std::move(areas)) {
  for (std::size_t i = 0; i < areas_.size(); ++i) {
    const auto& a = areas_[i];
    if (a.id.empty()) throw ValidationError("empty area id");
    if (a.population < 0) throw ValidationError("negative population for area " + a.id);
    if (a.land_area_km2 < 0.0) throw ValidationError("negative land area for area " + a.id);
    if (!index_.emplace(a.id, i).second) throw ValidationError("duplicate area " + a.id);
  }
}

const AreaStats* Demographics::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &areas_[it->second];
}

const AreaStats& Demographics::at(std::string_view id) const {
  const auto* a = find(id);
  if (a == nullptr) throw ValidationError("no demographics for area '" + std::string(id) + "'");
  return *a;
}

double Demographics::median_density() const {
  std::vector<double> v;
  for (const auto& a : areas_) v.push_back(a.density());
  return median(std::move(v));
}

double Demographics::median_land_area() const {
  std::vector<double> v;
  for (const auto& a : areas_) v.push_back(a.land_area_km2);
  return median(std::move(v));
}

Demographics load_demographics(const std::filesystem::path& path) {
  const auto t = csv::Table::read(path);
  const auto c_id = t.column("area_id");
  const auto c_class = t.column("area_class");
  const auto c_pop = t.column("population");
  const auto c_land = t.column("land_area_km2");
  std::vector<AreaStats> areas;
  for (const auto& row : t.rows()) {
    try {
      AreaStats a;
      a.id = t.field(row, c_id);
      a.area_class = parse_area_class(t.field(row, c_class));
      a.population = t.integer(row, c_pop);
      a.land_area_km2 = t.real(row, c_land);
      if (a.population < 0 || a.land_area_km2 < 0.0) throw ValidationError("negative population or area");
      areas.push_back(std::move(a));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(t.source(), row.line, e.what());
    }
  }
  return Demographics(std::move(areas));
}

CoverageTable CoverageTable::defaults() {
  CoverageTable t;
  t.fractions_[AreaClass::kMetro] = {0.50, 0.60, 0.70};
  t.fractions_[AreaClass::kUrban] = {0.40, 0.55, 0.70};
  t.fractions_[AreaClass::kRural] = {0.10, 0.30, 0.50};
  t.fractions_[AreaClass::kRemote] = {0.05, 0.20, 0.40};
  return t;
}

double CoverageTable::fraction(AreaClass c, DeploymentTier t) const {
  auto it = fractions_.find(c);
  if (it == fractions_.end()) throw ValidationError("no coverage targets for " + std::string(to_string(c)));
  return it->second[index(t)];
}

void CoverageTable::set(AreaClass c, DeploymentTier t, double fraction) {
  auto [it, inserted] = fractions_.try_emplace(c);
  if (inserted) it->second = {0.0, 0.0, 0.0};
  it->second[index(t)] = fraction;
}

void CoverageTable::validate() const {
  for (const auto& [c, f] : fractions_) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!(f[i] >= 0.0 && f[i] <= 1.0)) {
        throw ValidationError("coverage fraction for " + std::string(to_string(c)) + " outside [0, 1]");
      }
      if (i > 0 && f[i] < f[i - 1]) {
        throw ValidationError("coverage targets for " + std::string(to_string(c)) + " must not decrease by tier");
      }
    }
  }
}

nlohmann::json CoverageTable::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [c, f] : fractions_) {
    j[std::string(to_string(c))] = {{"low", f[0]}, {"medium", f[1]}, {"high", f[2]}};
  }
  return j;
}

CoverageTable CoverageTable::from_json(const nlohmann::json& j) {
  CoverageTable t = defaults();
  try {
    for (const auto& [cls, tiers] : j.items()) {
      const AreaClass c = parse_area_class(cls);
      for (const auto& [tier, value] : tiers.items()) t.set(c, parse_tier(tier), value.get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed coverage table: ") + e.what());
  }
  t.validate();
  return t;
}

void TieredValuationAdjustment::set(const BidderId& bidder, const AreaId& area, DeploymentTier tier, Money cost) {
  if (cost < Money{}) throw ValidationError("negative deployment cost for " + bidder + " in " + area);
  costs_[{bidder, area, tier}] = cost;
}

Money TieredValuationAdjustment::cost(const BidderId& bidder, const AreaId& area, DeploymentTier tier) const {
  auto it = costs_.find({bidder, area, tier});
  if (it == costs_.end()) {
    throw ValidationError("no deployment cost for " + bidder + " in " + area + " at " + std::string(to_string(tier)));
  }
  return it->second;
}

bool TieredValuationAdjustment::contains(const BidderId& bidder, const AreaId& area) const {
  return costs_.count({bidder, area, DeploymentTier::kLow}) > 0;
}

void TieredValuationAdjustment::validate_complete() const {
  for (const auto& [key, c] : costs_) {
    const auto& [bidder, area, tier] = key;
    for (auto t : kTiers) {
      if (!costs_.count({bidder, area, t})) {
        throw ValidationError("deployment costs for " + bidder + " in " + area + " miss tier " +
                              std::string(to_string(t)));
      }
    }
  }
}

void TieredValuationAdjustment::validate() const {
  validate_complete();
  for (const auto& [key, c] : costs_) {
    const auto& [bidder, area, tier] = key;
    if (tier != DeploymentTier::kLow) {
      const auto lower = static_cast<DeploymentTier>(index(tier) - 1);
      if (c < costs_.at({bidder, area, lower})) {
        throw ValidationError("deployment cost for " + bidder + " in " + area + " decreases at tier " +
                              std::string(to_string(tier)));
      }
    }
  }
}

void write_adjustment_csv(std::ostream& out, const TieredValuationAdjustment& table) {
  out << "bidder_id,area_id,tier,cost_cad\n";
  for (const auto& [key, c] : table.entries()) {
    const auto& [bidder, area, tier] = key;
    out << csv::escape(bidder) << ',' << csv::escape(area) << ',' << to_string(tier) << ',' << c.to_string() << '\n';
  }
}

TieredValuationAdjustment load_adjustment(const std::filesystem::path& path) {
  const auto t = csv::Table::read(path);
  const auto c_bidder = t.column("bidder_id");
  const auto c_area = t.column("area_id");
  const auto c_tier = t.column("tier");
  const auto c_cost = t.column("cost_cad");
  TieredValuationAdjustment out;
  for (const auto& row : t.rows()) {
    try {
      out.set(t.field(row, c_bidder), t.field(row, c_area), parse_tier(t.field(row, c_tier)),
              Money::parse(t.field(row, c_cost)));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(t.source(), row.line, e.what());
    }
  }
  out.validate_complete();
  return out;
}

}  // namespace clockauction
