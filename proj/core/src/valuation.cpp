#include "clockauction/valuation.hpp"

#include "clockauction/error.hpp"

namespace clockauction {

Money ValuationModel::marginal(std::string_view product, std::size_t level_index) const {
  auto it = marginals.find(product);
  if (it == marginals.end()) throw ValidationError("no marginals for product " + std::string(product));
  return it->second.at(level_index);
}

Money ValuationModel::cumulative(std::string_view product, int quantity) const {
  auto lit = ladders.find(product);
  if (lit == ladders.end()) throw ValidationError("no ladder for product " + std::string(product));
  const auto& levels = lit->second.levels;
  const auto k = lit->second.index_of(quantity);
  if (!k) {
    throw ValidationError("quantity " + std::to_string(quantity) + " of " + std::string(product) +
                          " is not on the ladder");
  }
  const auto& v = marginals.find(product)->second;
  Money total;
  for (std::size_t l = 1; l <= *k; ++l) total += v[l] * (levels[l] - levels[l - 1]);
  return total;
}

std::optional<int> ValuationModel::base_of(const Bundle& bundle) const {
  for (const auto& b : bases) {
    if (is_variant_of(bundle, b, ladders)) return b.base_id;
  }
  return std::nullopt;
}

void ValuationModel::validate() const {
  if (base_values.size() != bases.size()) throw ValidationError(bidder + ": one value per base required");
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (bases[i].base_id != static_cast<int>(i)) throw ValidationError(bidder + ": base ids must be 0..n-1");
    if (base_values[i] < Money{}) throw ValidationError(bidder + ": negative base value");
    for (const auto& [id, q] : bases[i].quantities.items()) {
      auto it = ladders.find(id);
      if (it == ladders.end() || !it->second.index_of(q)) {
        throw ValidationError(bidder + ": base level of " + id + " is not on its ladder");
      }
    }
  }
  for (const auto& [id, ladder] : ladders) {
    auto it = marginals.find(id);
    if (it == marginals.end() || it->second.size() != ladder.levels.size()) {
      throw ValidationError(bidder + ": marginals for " + id + " do not match the ladder");
    }
    const auto& v = it->second;
    if (v.front() != Money{}) throw ValidationError(bidder + ": baseline marginal of " + id + " must be 0");
    for (std::size_t k = 1; k < v.size(); ++k) {
      if (v[k] < Money{}) throw ValidationError(bidder + ": negative marginal for " + id);
      if (k + 1 < v.size() && v[k] < v[k + 1]) {
        throw ValidationError(bidder + ": marginals of " + id + " are not diminishing");
      }
    }
  }
}

ValuationModel empty_model(const BundleSpace& space) {
  ValuationModel m;
  m.bidder = space.bidder;
  m.bases = space.bases;
  m.base_values.assign(space.bases.size(), Money{});
  m.ladders = space.ladders;
  for (const auto& [id, ladder] : space.ladders) m.marginals[id].assign(ladder.levels.size(), Money{});
  return m;
}

Money bundle_value(const ValuationModel& model, const Bundle& bundle, const BundleBase& base) {
  if (!is_variant_of(bundle, base, model.ladders)) {
    throw ValidationError(to_string(bundle) + " is not a variant of base " + std::to_string(base.base_id) +
                          " for " + model.bidder);
  }
  Money value = model.base_values.at(static_cast<std::size_t>(base.base_id));
  for (const auto& [id, q] : bundle.items()) value += model.cumulative(id, q);
  return value;
}

Money bundle_utility(const ValuationModel& model, const Bundle& bundle, const BundleBase& base,
                     const PriceVector& prices) {
  if (bundle.empty()) return Money{};
  return bundle_value(model, bundle, base) - payment(bundle, prices);
}

nlohmann::json to_json(const ValuationModel& model) {
  nlohmann::json bases = nlohmann::json::array();
  for (std::size_t i = 0; i < model.bases.size(); ++i) {
    nlohmann::json products = nlohmann::json::object();
    for (const auto& [id, q] : model.bases[i].quantities.items()) products[id] = q;
    bases.push_back({{"base_id", model.bases[i].base_id},
                     {"products", products},
                     {"value_cents", model.base_values[i].in_cents()}});
  }
  nlohmann::json marginals = nlohmann::json::array();
  for (const auto& [id, ladder] : model.ladders) {
    const auto& v = model.marginals.at(id);
    for (std::size_t k = 0; k < ladder.levels.size(); ++k) {
      marginals.push_back(
          {{"product_id", id}, {"level", ladder.levels[k]}, {"value_cents_per_unit", v[k].in_cents()}});
    }
  }
  return {{"bidder_id", model.bidder}, {"bases", bases}, {"marginals", marginals}};
}

ValuationModel model_from_json(const nlohmann::json& j) {
  ValuationModel m;
  try {
    m.bidder = j.at("bidder_id").get<std::string>();
    for (const auto& b : j.at("bases")) {
      BundleBase base;
      base.base_id = b.at("base_id").get<int>();
      for (const auto& [id, q] : b.at("products").items()) base.quantities.set(id, q.get<int>());
      m.bases.push_back(std::move(base));
      m.base_values.push_back(Money::cents(b.at("value_cents").get<std::int64_t>()));
    }
    std::map<ProductId, std::map<int, Money>> per_product;
    for (const auto& row : j.at("marginals")) {
      const auto id = row.at("product_id").get<std::string>();
      const int level = row.at("level").get<int>();
      if (level <= 0) throw ValidationError("ladder level must be positive");
      if (!per_product[id].emplace(level, Money::cents(row.at("value_cents_per_unit").get<std::int64_t>())).second) {
        throw ValidationError("duplicate ladder level " + std::to_string(level) + " for " + id);
      }
    }
    for (const auto& [id, levels] : per_product) {
      CopyLadder ladder{id, {}};
      std::vector<Money> v;
      for (const auto& [level, value] : levels) {
        ladder.levels.push_back(level);
        v.push_back(value);
      }
      m.ladders.emplace(id, std::move(ladder));
      m.marginals.emplace(id, std::move(v));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed valuation model: ") + e.what());
  }
  m.validate();
  return m;
}

}  // namespace clockauction
