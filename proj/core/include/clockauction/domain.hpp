#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clockauction/money.hpp"

namespace clockauction {

using ProductId = std::string;
using BidderId = std::string;
using AreaId = std::string;

enum class AreaClass { kMetro, kUrban, kRural, kRemote };

std::string_view to_string(AreaClass c);
AreaClass parse_area_class(std::string_view text);

struct Product {
  ProductId id;
  AreaId area_id;
  AreaClass area_class = AreaClass::kUrban;
  int supply = 1;
  int eligibility_points = 0;
  Money opening_price;
};

/// Products in a fixed order with id lookup. Ids are unique.
class ProductCatalog {
 public:
  ProductCatalog() = default;
  explicit ProductCatalog(std::vector<Product> products);

  const std::vector<Product>& products() const noexcept { return products_; }
  std::size_t size() const noexcept { return products_.size(); }
  bool empty() const noexcept { return products_.empty(); }

  const Product* find(std::string_view id) const;
  /// Throws ValidationError naming the product when absent.
  const Product& at(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  std::vector<AreaId> area_ids() const;

 private:
  std::vector<Product> products_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Loads `product_id, area_id, area_class, supply, eligibility_points, opening_price_cad`.
ProductCatalog load_catalog(const std::filesystem::path& path);

/// Sparse product quantities; an absent product has quantity 0.
class Bundle {
 public:
  Bundle() = default;
  Bundle(std::initializer_list<std::pair<const ProductId, int>> items);

  int quantity(std::string_view product) const;
  /// Setting 0 removes the entry. Negative quantities throw ValidationError.
  void set(const ProductId& product, int quantity);

  const std::map<ProductId, int, std::less<>>& items() const noexcept { return items_; }
  bool empty() const noexcept { return items_.empty(); }
  std::size_t support_size() const noexcept { return items_.size(); }
  std::int64_t total_units() const;

  friend bool operator==(const Bundle&, const Bundle&) = default;
  friend auto operator<=>(const Bundle& a, const Bundle& b) { return a.items_ <=> b.items_; }

 private:
  std::map<ProductId, int, std::less<>> items_;
};

std::string to_string(const Bundle& b);

/// Throws ValidationError if a product is unknown or a quantity exceeds supply.
void validate_bundle(const Bundle& bundle, const ProductCatalog& catalog);

class PriceVector {
 public:
  PriceVector() = default;
  PriceVector(std::initializer_list<std::pair<const ProductId, Money>> items);

  static PriceVector opening(const ProductCatalog& catalog);

  /// Throws ValidationError when the product has no price.
  Money at(std::string_view product) const;
  std::optional<Money> find(std::string_view product) const;
  /// Negative prices throw ValidationError.
  void set(const ProductId& product, Money price);

  const std::map<ProductId, Money, std::less<>>& items() const noexcept { return prices_; }
  std::size_t size() const noexcept { return prices_.size(); }

  friend bool operator==(const PriceVector&, const PriceVector&) = default;

 private:
  std::map<ProductId, Money, std::less<>> prices_;
};

struct RoundRecord {
  int round = 1;
  PriceVector start;
  PriceVector clock;
  PriceVector posted;
  std::map<ProductId, int> aggregate;
  std::map<BidderId, Bundle> bids;
  std::map<BidderId, int> eligibility;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

/// Price increment percentages per product and round. Every value lies in [0.1, 0.2].
class IncrementSchedule {
 public:
  static constexpr double kMin = 0.1;
  static constexpr double kMax = 0.2;

  explicit IncrementSchedule(double default_delta = 0.1);

  void set_product(const ProductId& product, double delta);
  void set_round(const ProductId& product, int round, double delta);

  double delta(std::string_view product, int round) const;

 private:
  double default_;
  std::map<ProductId, double, std::less<>> per_product_;
  std::map<std::pair<ProductId, int>, double> per_round_;
};

/// start * (1 + delta), rounded half-up to the dollar. Throws ValidationError if delta is
/// outside [0.1, 0.2] or start is negative.
Money clock_price(Money start, double delta);

int aggregate_demand(std::span<const Bundle> bids, std::string_view product);

/// Clock price when the product is overdemanded, else the start price.
Money posted_price(Money start, Money clock, int aggregate, int supply);

Money payment(const Bundle& final_bundle, const PriceVector& final_posted);

int eligibility_cost(const Bundle& bundle, const ProductCatalog& catalog);

}  // namespace clockauction
