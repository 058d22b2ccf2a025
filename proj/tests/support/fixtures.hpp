#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <clockauction/domain.hpp>
#include <clockauction/engine.hpp>
#include <clockauction/valuation.hpp>

namespace fixtures {

using namespace clockauction;

inline Product product(std::string id, int supply, int points, std::int64_t opening_dollars, std::string area = {},
                       AreaClass cls = AreaClass::kUrban) {
  Product p;
  p.area_id = area.empty() ? "A-" + id : std::move(area);
  p.id = std::move(id);
  p.area_class = cls;
  p.supply = supply;
  p.eligibility_points = points;
  p.opening_price = Money::dollars(opening_dollars);
  return p;
}

/// Marginal per-unit values in dollars, one per ladder level; the first is the baseline and must be 0.
struct LadderSpec {
  std::string product;
  std::vector<int> levels;
  std::vector<std::int64_t> marginal_dollars;
};

inline ValuationModel model(std::string bidder, std::vector<Bundle> bases, std::vector<std::int64_t> base_dollars,
                            std::vector<LadderSpec> ladders) {
  ValuationModel m;
  m.bidder = std::move(bidder);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    m.bases.push_back({static_cast<int>(i), bases[i]});
    m.base_values.push_back(Money::dollars(base_dollars[i]));
  }
  for (auto& l : ladders) {
    m.ladders.emplace(l.product, CopyLadder{l.product, l.levels});
    std::vector<Money> v;
    for (auto d : l.marginal_dollars) v.push_back(Money::dollars(d));
    m.marginals.emplace(l.product, std::move(v));
  }
  m.validate();
  return m;
}

/// Value of `bundle` recomputed from the raw ladder data, independent of ValuationModel::cumulative.
inline Money oracle_value(const ValuationModel& m, const BundleBase& base, const Bundle& bundle) {
  Money total = m.base_values.at(static_cast<std::size_t>(base.base_id));
  for (const auto& [id, q] : bundle.items()) {
    const auto& levels = m.ladders.at(id).levels;
    const auto& v = m.marginals.at(id);
    for (std::size_t k = 1; k < levels.size() && levels[k] <= q; ++k) total += v[k] * (levels[k] - levels[k - 1]);
  }
  return total;
}

inline Money oracle_utility(const ValuationModel& m, const BundleBase& base, const Bundle& bundle,
                            const PriceVector& prices) {
  Money cost;
  for (const auto& [id, q] : bundle.items()) cost += prices.at(id) * q;
  return oracle_value(m, base, bundle) - cost;
}

inline std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "clockauction-tests";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace fixtures
