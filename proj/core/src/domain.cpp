#include "clockauction/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "clockauction/csv.hpp"
#include "clockauction/error.hpp"

namespace clockauction {

std::string_view to_string(AreaClass c) {
  switch (c) {
    case AreaClass::kMetro:
      return "metro";
    case AreaClass::kUrban:
      return "urban";
    case AreaClass::kRural:
      return "rural";
    case AreaClass::kRemote:
      return "remote";
  }
  return "urban";
}

AreaClass parse_area_class(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "metro") return AreaClass::kMetro;
  if (lower == "urban") return AreaClass::kUrban;
  if (lower == "rural") return AreaClass::kRural;
  if (lower == "remote") return AreaClass::kRemote;
  throw ValidationError("unknown area class '" + std::string(text) + "'");
}

ProductCatalog::ProductCatalog(std::vector<Product> products) : products_(std::move(products)) {
  for (std::size_t i = 0; i < products_.size(); ++i) {
    const Product& p = products_[i];
    if (p.id.empty()) throw ValidationError("product with empty id");
    if (p.supply < 1) throw ValidationError("product " + p.id + ": supply must be >= 1");
    if (p.eligibility_points < 0) {
      throw ValidationError("product " + p.id + ": eligibility points must be >= 0");
    }
    if (p.opening_price < Money{}) {
      throw ValidationError("product " + p.id + ": opening price must be >= 0");
    }
    if (!index_.emplace(p.id, i).second) throw ValidationError("duplicate product id " + p.id);
  }
}

const Product* ProductCatalog::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &products_[it->second];
}

const Product& ProductCatalog::at(std::string_view id) const {
  if (const Product* p = find(id)) return *p;
  throw ValidationError("unknown product '" + std::string(id) + "'");
}

std::vector<AreaId> ProductCatalog::area_ids() const {
  std::set<AreaId> ids;
  for (const auto& p : products_) ids.insert(p.area_id);
  return {ids.begin(), ids.end()};
}

ProductCatalog load_catalog(const std::filesystem::path& path) {
  const auto table = csv::Table::read(path);
  const auto c_id = table.column("product_id");
  const auto c_area = table.column("area_id");
  const auto c_class = table.column("area_class");
  const auto c_supply = table.column("supply");
  const auto c_points = table.column("eligibility_points");
  const auto c_price = table.column("opening_price_cad");

  std::vector<Product> products;
  std::set<std::string> seen;
  for (const auto& row : table.rows()) {
    Product p;
    p.id = table.field(row, c_id);
    p.area_id = table.field(row, c_area);
    try {
      p.area_class = parse_area_class(table.field(row, c_class));
      p.opening_price = Money::parse(table.field(row, c_price));
    } catch (const ValidationError& e) {
      throw ParseError(table.source(), row.line, e.what());
    }
    p.supply = static_cast<int>(table.integer(row, c_supply));
    p.eligibility_points = static_cast<int>(table.integer(row, c_points));
    if (p.id.empty()) throw ParseError(table.source(), row.line, "empty product_id");
    if (p.supply < 1) throw ParseError(table.source(), row.line, "supply must be >= 1");
    if (p.eligibility_points < 0) {
      throw ParseError(table.source(), row.line, "eligibility_points must be >= 0");
    }
    if (p.opening_price < Money{}) {
      throw ParseError(table.source(), row.line, "opening price must be >= 0");
    }
    if (!seen.insert(p.id).second) {
      throw ParseError(table.source(), row.line, "duplicate product_id " + p.id);
    }
    products.push_back(std::move(p));
  }
  return ProductCatalog(std::move(products));
}

Bundle::Bundle(std::initializer_list<std::pair<const ProductId, int>> items) {
  for (const auto& [id, q] : items) set(id, q);
}

int Bundle::quantity(std::string_view product) const {
  auto it = items_.find(product);
  return it == items_.end() ? 0 : it->second;
}

void Bundle::set(const ProductId& product, int quantity) {
  if (quantity < 0) {
    throw ValidationError("negative quantity " + std::to_string(quantity) + " for " + product);
  }
  if (quantity == 0) {
    items_.erase(product);
  } else {
    items_[product] = quantity;
  }
}

std::int64_t Bundle::total_units() const {
  std::int64_t total = 0;
  for (const auto& [id, q] : items_) total += q;
  return total;
}

std::string to_string(const Bundle& b) {
  std::string out = "(";
  bool first = true;
  for (const auto& [id, q] : b.items()) {
    if (!first) out += ", ";
    first = false;
    out += id + ":" + std::to_string(q);
  }
  return out + ")";
}

void validate_bundle(const Bundle& bundle, const ProductCatalog& catalog) {
  for (const auto& [id, q] : bundle.items()) {
    const Product& p = catalog.at(id);
    if (q > p.supply) {
      throw ValidationError("quantity " + std::to_string(q) + " of " + id + " exceeds supply " +
                            std::to_string(p.supply));
    }
  }
}

PriceVector::PriceVector(std::initializer_list<std::pair<const ProductId, Money>> items) {
  for (const auto& [id, p] : items) set(id, p);
}

PriceVector PriceVector::opening(const ProductCatalog& catalog) {
  PriceVector v;
  for (const auto& p : catalog.products()) v.set(p.id, p.opening_price);
  return v;
}

Money PriceVector::at(std::string_view product) const {
  auto it = prices_.find(product);
  if (it == prices_.end()) throw ValidationError("no price for product '" + std::string(product) + "'");
  return it->second;
}

std::optional<Money> PriceVector::find(std::string_view product) const {
  auto it = prices_.find(product);
  if (it == prices_.end()) return std::nullopt;
  return it->second;
}

void PriceVector::set(const ProductId& product, Money price) {
  if (price < Money{}) throw ValidationError("negative price for " + product);
  prices_[product] = price;
}

IncrementSchedule::IncrementSchedule(double default_delta) : default_(default_delta) {
  if (!(default_delta >= kMin - 1e-12 && default_delta <= kMax + 1e-12)) {
    throw ValidationError("increment " + std::to_string(default_delta) + " outside [0.1, 0.2]");
  }
}

void IncrementSchedule::set_product(const ProductId& product, double delta) {
  IncrementSchedule check(delta);
  per_product_[product] = delta;
}

void IncrementSchedule::set_round(const ProductId& product, int round, double delta) {
  IncrementSchedule check(delta);
  per_round_[{product, round}] = delta;
}

double IncrementSchedule::delta(std::string_view product, int round) const {
  if (!per_round_.empty()) {
    auto it = per_round_.find({std::string(product), round});
    if (it != per_round_.end()) return it->second;
  }
  auto it = per_product_.find(product);
  return it == per_product_.end() ? default_ : it->second;
}

Money clock_price(Money start, double delta) {
  if (!(delta >= IncrementSchedule::kMin - 1e-12 && delta <= IncrementSchedule::kMax + 1e-12)) {
    throw ValidationError("increment " + std::to_string(delta) + " outside [0.1, 0.2]");
  }
  if (start < Money{}) throw ValidationError("negative start price");
  // Exact integer evaluation: delta is carried in parts per million.
  constexpr std::int64_t kScale = 1'000'000;
  constexpr std::int64_t kMaxStart = std::numeric_limits<std::int64_t>::max() / (2 * kScale);
  if (start.in_cents() > kMaxStart) throw ValidationError("start price too large");
  const std::int64_t ppm = std::llround(delta * 1e6);
  const std::int64_t scaled = start.in_cents() * (kScale + ppm);
  const std::int64_t dollars = (scaled + 50 * kScale) / (100 * kScale);
  return Money::dollars(dollars);
}

int aggregate_demand(std::span<const Bundle> bids, std::string_view product) {
  int total = 0;
  for (const auto& b : bids) total += b.quantity(product);
  return total;
}

Money posted_price(Money start, Money clock, int aggregate, int supply) {
  return aggregate > supply ? clock : start;
}

Money payment(const Bundle& final_bundle, const PriceVector& final_posted) {
  Money total;
  for (const auto& [id, q] : final_bundle.items()) total += final_posted.at(id) * q;
  return total;
}

int eligibility_cost(const Bundle& bundle, const ProductCatalog& catalog) {
  int total = 0;
  for (const auto& [id, q] : bundle.items()) total += q * catalog.at(id).eligibility_points;
  return total;
}

}  // namespace clockauction
