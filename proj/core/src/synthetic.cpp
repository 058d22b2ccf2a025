#include "clockauction/synthetic.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "clockauction/error.hpp"
#include "clockauction/ingest.hpp"

namespace clockauction {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    std::shuffle(v.begin(), v.end(), gen_);
  }

 private:
  std::mt19937_64 gen_;
};

std::string numbered(char prefix, int i) {
  std::string n = std::to_string(i);
  return std::string(1, prefix) + std::string(n.size() < 2 ? 2 - n.size() : 0, '0') + n;
}

Money whole_dollars(double cents) { return Money::dollars(std::max<std::int64_t>(0, std::llround(cents / 100.0))); }

}  // namespace

SyntheticMarket generate_market(const SyntheticSpec& spec) {
  if (spec.num_products < 1 || spec.num_bidders < 1 || spec.max_supply < 1 || spec.max_bases < 1 ||
      spec.max_levels < 1 || spec.max_base_products < 1) {
    throw ValidationError("synthetic market sizes must be positive");
  }
  Rng rng(spec.seed);
  std::vector<Product> products;
  for (int i = 1; i <= spec.num_products; ++i) {
    Product p;
    p.id = numbered('P', i);
    p.area_id = numbered('A', i);
    p.area_class = static_cast<AreaClass>(rng.uniform(0, 3));
    p.supply = rng.uniform(1, spec.max_supply);
    p.eligibility_points = rng.uniform(1, 5);
    p.opening_price = Money::dollars(rng.uniform(5, 50) * 10);
    products.push_back(std::move(p));
  }
  SyntheticMarket market;
  market.config.catalog = ProductCatalog(products);

  for (int b = 1; b <= spec.num_bidders; ++b) {
    ValuationModel m;
    m.bidder = numbered('B', b);
    std::set<std::set<ProductId>> supports;
    const int nbases = rng.uniform(1, spec.max_bases);
    std::vector<ProductId> first;
    for (int k = 0; k < nbases; ++k) {
      std::vector<ProductId> pool;
      if (k == 0 || !spec.nested_bases) {
        for (const auto& p : products) pool.push_back(p.id);
      } else {
        pool = first;
      }
      rng.shuffle(pool);
      const int cap = k > 0 && spec.nested_bases ? static_cast<int>(pool.size()) - 1 : spec.max_base_products;
      if (cap < 1) break;
      const int size = rng.uniform(1, std::min<int>(cap, static_cast<int>(pool.size())));
      std::set<ProductId> support(pool.begin(), pool.begin() + size);
      if (k == 0) first.assign(support.begin(), support.end());
      if (!supports.insert(support).second) continue;
      BundleBase base;
      base.base_id = static_cast<int>(m.bases.size());
      for (const auto& id : support) base.quantities.set(id, 1);  // levels filled in below
      m.bases.push_back(std::move(base));
    }

    std::map<ProductId, double> unit_value;
    for (const auto& base : m.bases) {
      for (const auto& [id, q] : base.quantities.items()) {
        if (m.ladders.count(id)) continue;
        const auto& p = market.config.catalog.at(id);
        std::vector<int> all(static_cast<std::size_t>(p.supply));
        for (int i = 0; i < p.supply; ++i) all[static_cast<std::size_t>(i)] = i + 1;
        rng.shuffle(all);
        const int n = rng.uniform(1, std::min(spec.max_levels, p.supply));
        std::vector<int> levels(all.begin(), all.begin() + n);
        std::sort(levels.begin(), levels.end());
        const double unit = static_cast<double>(p.opening_price.in_cents()) * rng.real(1.5, 5.0);
        unit_value[id] = unit;
        std::vector<Money> v{Money{}};
        double current = unit;
        for (std::size_t l = 1; l < levels.size(); ++l) {
          current *= rng.real(0.5, 0.95);
          v.push_back(std::min(whole_dollars(current), v.size() > 1 ? v.back() : whole_dollars(current)));
        }
        m.ladders.emplace(id, CopyLadder{id, std::move(levels)});
        m.marginals.emplace(id, std::move(v));
      }
    }
    for (auto& base : m.bases) {
      double value = 0.0;
      const Bundle support = base.quantities;
      for (const auto& [id, q] : support.items()) {
        const int first = m.ladders.at(id).levels.front();
        base.quantities.set(id, first);
        value += first * unit_value.at(id);
      }
      m.base_values.push_back(whole_dollars(value * rng.real(1.0, 1.3)));
    }
    m.validate();
    market.agents.push_back(make_agent(std::move(m), market.config.catalog));
  }
  return market;
}

std::vector<PriceVector> start_prices(const AuctionTrace& trace) {
  std::vector<PriceVector> out;
  out.reserve(trace.rounds.size());
  for (const auto& r : trace.rounds) out.push_back(r.start);
  return out;
}

RoundTrip round_trip(const SyntheticMarket& market, const EstimationOptions& options) {
  RoundTrip rt;
  rt.original = run_auction(market.config, market.agents);
  const auto log = smooth_monotone(bid_log_from_rounds(rt.original.rounds));
  const auto prices = start_prices(rt.original);
  rt.estimates = estimate_all(log, prices, market.config.catalog, options);
  std::vector<BidderAgent> agents;
  for (const auto& e : rt.estimates) {
    if (e.model.bases.empty()) continue;  // never bid: stays out
    agents.push_back(make_agent(e.model, market.config.catalog));
  }
  rt.replay = run_auction(market.config, std::move(agents));
  rt.comparison = compare_allocations(rt.original.final_allocation, rt.replay.final_allocation, market.config.catalog);
  return rt;
}

}  // namespace clockauction
