#pragma once

#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "clockauction/domain.hpp"
#include "clockauction/ingest.hpp"

namespace clockauction {

/// Lower-bound valuation for one bidder: a complementarity value per bundle base plus
/// per-unit marginal values along each product's copy ladder.
struct ValuationModel {
  BidderId bidder;
  std::vector<BundleBase> bases;  // bases[i].base_id == i
  std::vector<Money> base_values;
  LadderMap ladders;
  /// Per ladder index, per-unit value. Index 0 is the normalized baseline and stays 0.
  std::map<ProductId, std::vector<Money>, std::less<>> marginals;

  Money marginal(std::string_view product, std::size_t level_index) const;

  /// Value of holding `quantity` units of `product` above the normalized baseline:
  /// sum over ladder steps l = 1..k of (c_l - c_{l-1}) * v_l. Throws if off-ladder.
  Money cumulative(std::string_view product, int quantity) const;

  /// Bases whose variant set contains `bundle`, lowest id first.
  std::optional<int> base_of(const Bundle& bundle) const;

  /// Throws ValidationError on a broken invariant (negative value, increasing
  /// marginals, nonzero baseline, misnumbered bases).
  void validate() const;

  friend bool operator==(const ValuationModel&, const ValuationModel&) = default;
};

/// Zero-valued model over a bundle space.
ValuationModel empty_model(const BundleSpace& space);

/// v_base + cumulative marginal values. Throws ValidationError if `bundle` is not a
/// variant of `base`.
Money bundle_value(const ValuationModel& model, const Bundle& bundle, const BundleBase& base);

/// bundle_value minus the bundle's cost at `prices`. The empty bundle has utility 0.
Money bundle_utility(const ValuationModel& model, const Bundle& bundle, const BundleBase& base,
                     const PriceVector& prices);

nlohmann::json to_json(const ValuationModel& model);
ValuationModel model_from_json(const nlohmann::json& j);

}  // namespace clockauction
