#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "clockauction/domain.hpp"

namespace clockauction {

/// Deployment obligation attached to a licence. A stricter tier implies the weaker ones.
enum class DeploymentTier { kLow = 0, kMedium = 1, kHigh = 2 };

inline constexpr std::array<DeploymentTier, 3> kTiers{DeploymentTier::kLow, DeploymentTier::kMedium,
                                                      DeploymentTier::kHigh};

std::string_view to_string(DeploymentTier t);
DeploymentTier parse_tier(std::string_view text);
inline std::size_t index(DeploymentTier t) { return static_cast<std::size_t>(t); }

struct AreaStats {
  AreaId id;
  AreaClass area_class = AreaClass::kUrban;
  std::int64_t population = 0;
  double land_area_km2 = 0.0;

  double density() const { return land_area_km2 > 0.0 ? static_cast<double>(population) / land_area_km2 : 0.0; }
};

class Demographics {
 public:
  Demographics() = default;
  explicit Demographics(std::vector<AreaStats> areas);

  const std::vector<AreaStats>& areas() const noexcept { return areas_; }
  const AreaStats* find(std::string_view id) const;
  /// Throws ValidationError naming the area.
  const AreaStats& at(std::string_view id) const;

  double median_density() const;
  double median_land_area() const;

 private:
  std::vector<AreaStats> areas_;
  std::map<AreaId, std::size_t, std::less<>> index_;
};

/// Reads `area_id, area_class, population, land_area_km2`.
Demographics load_demographics(const std::filesystem::path& path);

/// Population-coverage fraction each tier must reach within five years, per area class.
class CoverageTable {
 public:
  /// 5% to 70% across classes and tiers.
  static CoverageTable defaults();

  double fraction(AreaClass c, DeploymentTier t) const;
  void set(AreaClass c, DeploymentTier t, double fraction);
  /// Throws unless each fraction is in [0, 1] and non-decreasing in tier.
  void validate() const;

  nlohmann::json to_json() const;
  static CoverageTable from_json(const nlohmann::json& j);

 private:
  std::map<AreaClass, std::array<double, 3>> fractions_;
};

/// Deployment cost per (bidder, area, tier).
class TieredValuationAdjustment {
 public:
  void set(const BidderId& bidder, const AreaId& area, DeploymentTier tier, Money cost);
  /// Throws ValidationError when the triple is missing.
  Money cost(const BidderId& bidder, const AreaId& area, DeploymentTier tier) const;
  bool contains(const BidderId& bidder, const AreaId& area) const;

  /// Throws unless every (bidder, area) has all three tiers.
  void validate_complete() const;
  /// validate_complete() plus costs non-decreasing in tier.
  void validate() const;

  const std::map<std::tuple<BidderId, AreaId, DeploymentTier>, Money>& entries() const noexcept { return costs_; }

  friend bool operator==(const TieredValuationAdjustment&, const TieredValuationAdjustment&) = default;

 private:
  std::map<std::tuple<BidderId, AreaId, DeploymentTier>, Money> costs_;
};

/// `bidder_id, area_id, tier, cost_cad` rows in key order.
void write_adjustment_csv(std::ostream& out, const TieredValuationAdjustment& table);
TieredValuationAdjustment load_adjustment(const std::filesystem::path& path);

}  // namespace clockauction
