#include "config.hpp"

#include <fstream>

#include <clockauction/error.hpp>
#include <clockauction/manifest.hpp>

namespace clockauction::cli {

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  Config c;
  try {
    c.raw_ = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  if (!c.raw_.is_object()) throw ValidationError("config " + path.string() + " must be a JSON object");
  c.base_ = path.parent_path();
  c.hash_ = file_hash(path);
  return c;
}

std::optional<std::filesystem::path> Config::path(const std::string& key) const {
  if (!raw_.contains(key)) return std::nullopt;
  if (!raw_.at(key).is_string()) throw ValidationError("config key '" + key + "' must be a path string");
  std::filesystem::path p = raw_.at(key).get<std::string>();
  return p.is_absolute() ? p : base_ / p;
}

std::filesystem::path Config::require_path(const std::string& key) const {
  auto p = path(key);
  if (!p) throw ValidationError("config key '" + key + "' is required for this command");
  return *p;
}

AuctionConfig Config::auction(ProductCatalog catalog) const {
  AuctionConfig a;
  a.catalog = std::move(catalog);
  try {
    a.max_rounds = raw_.value("max_rounds", a.max_rounds);
    a.activity = raw_.value("activity", a.activity);
    if (raw_.contains("initial_eligibility")) {
      a.initial_eligibility = raw_.at("initial_eligibility").get<std::map<BidderId, int>>();
    }
    if (raw_.contains("increments")) {
      const auto& inc = raw_.at("increments");
      a.increments = IncrementSchedule(inc.value("default", 0.1));
      if (inc.contains("products")) {
        for (const auto& [id, d] : inc.at("products").items()) a.increments.set_product(id, d.get<double>());
      }
      if (inc.contains("rounds")) {
        for (const auto& e : inc.at("rounds")) {
          a.increments.set_round(e.at("product_id").get<std::string>(), e.at("round").get<int>(),
                                 e.at("delta").get<double>());
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config auction settings: ") + e.what());
  }
  a.validate();
  return a;
}

EstimationOptions Config::estimation() const {
  EstimationOptions o;
  o.activity = raw_.value("activity", o.activity);
  if (!raw_.contains("estimation")) return o;
  try {
    const auto& e = raw_.at("estimation");
    o.fallback_penalty = e.value("fallback_penalty", o.fallback_penalty);
    o.cuts_per_base = e.value("cuts_per_base", o.cuts_per_base);
    o.max_separation_passes = e.value("max_separation_passes", o.max_separation_passes);
    o.tighten_marginals = e.value("tighten_marginals", o.tighten_marginals);
    o.max_full_rows = e.value("max_full_rows", o.max_full_rows);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config estimation settings: ") + e.what());
  }
  if (o.fallback_penalty <= 0.0 || o.cuts_per_base < 1 || o.max_separation_passes < 1) {
    throw ValidationError("estimation settings must be positive");
  }
  return o;
}

CostParameters Config::cost_parameters() const {
  if (!raw_.contains("cost_parameters")) return {};
  return cost_parameters_from_json(raw_.at("cost_parameters"));
}

SyntheticSpec Config::synthetic() const {
  SyntheticSpec s;
  if (!raw_.contains("synthetic")) return s;
  try {
    const auto& j = raw_.at("synthetic");
    s.num_products = j.value("num_products", s.num_products);
    s.num_bidders = j.value("num_bidders", s.num_bidders);
    s.max_supply = j.value("max_supply", s.max_supply);
    s.max_bases = j.value("max_bases", s.max_bases);
    s.max_levels = j.value("max_levels", s.max_levels);
    s.max_base_products = j.value("max_base_products", s.max_base_products);
    s.nested_bases = j.value("nested_bases", s.nested_bases);
    s.seed = j.value("seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config synthetic settings: ") + e.what());
  }
  return s;
}

}  // namespace clockauction::cli
