#include "clockauction/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "clockauction/error.hpp"
#include "clockauction/estimation.hpp"

namespace clockauction {
namespace {

std::vector<int> allowed_levels(const BundleBase& base, const ValuationModel& model, const ProductId& id) {
  const auto& levels = model.ladders.at(id).levels;
  const int q = base.quantities.quantity(id);
  return {std::lower_bound(levels.begin(), levels.end(), q), levels.end()};
}

Money level_term(const ValuationModel& model, const ProductId& id, int level, const PriceVector& prices) {
  return model.cumulative(id, level) - prices.at(id) * level;
}

}  // namespace

void AuctionConfig::validate() const {
  if (max_rounds < 1) throw ValidationError("max_rounds must be >= 1");
  if (!(activity > 0.0 && activity <= 1.0)) throw ValidationError("activity rule must lie in (0, 1]");
  if (catalog.empty()) throw ValidationError("empty product catalog");
}

BidderAgent make_agent(ValuationModel model, const ProductCatalog& catalog) {
  const int e = max_variant_eligibility(model.bases, model.ladders, catalog);
  BidderId id = model.bidder;
  return BidderAgent{std::move(id), std::move(model), e};
}

optim::MixedIntegerProgram best_copies_program(const BundleBase& base, const ValuationModel& model,
                                               const PriceVector& prices, int eligibility,
                                               const ProductCatalog& catalog) {
  optim::MixedIntegerProgram mip;
  auto& lp = mip.relaxation();
  lp.set_sense(optim::Sense::kMaximize);
  std::vector<optim::Term> budget;
  for (const auto& [id, bq] : base.quantities.items()) {
    std::vector<optim::Term> choose_one;
    const int e = catalog.at(id).eligibility_points;
    for (int level : allowed_levels(base, model, id)) {
      const int v = mip.add_binary("I[" + id + "," + std::to_string(level) + "]");
      lp.set_objective(v, static_cast<double>(level_term(model, id, level, prices).in_cents()));
      choose_one.push_back({v, 1.0});
      if (e != 0) budget.push_back({v, static_cast<double>(level) * e});
    }
    lp.add_constraint("copies[" + id + "]", std::move(choose_one), optim::Relation::kEqual, 1.0);
  }
  lp.add_constraint("eligibility", std::move(budget), optim::Relation::kLessEqual, eligibility);
  return mip;
}

std::optional<Bundle> best_copies(const BundleBase& base, const ValuationModel& model, const PriceVector& prices,
                                  int eligibility, const ProductCatalog& catalog, const optim::Solver& solver) {
  if (base.quantities.empty()) return std::nullopt;
  const auto mip = best_copies_program(base, model, prices, eligibility, catalog);
  const auto sol = solver.solve(mip);
  if (sol.status == optim::SolveStatus::kInfeasible) return std::nullopt;
  if (sol.status != optim::SolveStatus::kOptimal) {
    throw SolverError("copy selection for " + model.bidder + " is " + optim::to_string(sol.status));
  }

  struct Choice {
    ProductId id;
    std::vector<int> levels;
    std::size_t pick = 0;
    int points = 0;
  };
  std::vector<Choice> choices;
  int v = 0;
  int used = 0;
  for (const auto& [id, bq] : base.quantities.items()) {
    Choice c{id, allowed_levels(base, model, id), 0, catalog.at(id).eligibility_points};
    for (std::size_t k = 0; k < c.levels.size(); ++k, ++v) {
      if (sol.value(v) > 0.5) c.pick = k;
    }
    used += c.levels[c.pick] * c.points;
    choices.push_back(std::move(c));
  }

  // Exact-cent polish: the relaxation works in floating point, so re-check single-product
  // moves and break ties toward the larger quantity.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& c : choices) {
      const Money current = level_term(model, c.id, c.levels[c.pick], prices);
      for (std::size_t k = c.levels.size(); k-- > 0;) {
        if (k == c.pick) continue;
        const int delta_points = (c.levels[k] - c.levels[c.pick]) * c.points;
        if (used + delta_points > eligibility) continue;
        const Money t = level_term(model, c.id, c.levels[k], prices);
        if (t > current || (t == current && k > c.pick)) {
          used += delta_points;
          c.pick = k;
          changed = true;
          break;
        }
      }
    }
  }

  Bundle out;
  for (const auto& c : choices) out.set(c.id, c.levels[c.pick]);
  return out;
}

std::optional<Bundle> myopic_bid(const BidderAgent& agent, const PriceVector& prices, const ProductCatalog& catalog,
                                 const optim::Solver& solver) {
  std::optional<Bundle> best;
  Money best_u;
  for (const auto& base : agent.model.bases) {
    auto b = best_copies(base, agent.model, prices, agent.eligibility, catalog, solver);
    if (!b) continue;
    const Money u = bundle_utility(agent.model, *b, base, prices);
    if (!best || u > best_u) {
      best = std::move(b);
      best_u = u;
    }
  }
  if (best && best_u >= Money{}) return best;
  return std::nullopt;
}

AuctionTrace run_auction(const AuctionConfig& config, std::vector<BidderAgent> agents, const optim::Solver& solver) {
  config.validate();
  const auto& catalog = config.catalog;
  std::sort(agents.begin(), agents.end(), [](const auto& a, const auto& b) { return a.bidder < b.bidder; });
  for (std::size_t i = 1; i < agents.size(); ++i) {
    if (agents[i].bidder == agents[i - 1].bidder) throw ValidationError("duplicate bidder " + agents[i].bidder);
  }
  for (auto& a : agents) {
    auto it = config.initial_eligibility.find(a.bidder);
    if (it != config.initial_eligibility.end()) a.eligibility = it->second;
  }

  AuctionTrace trace;
  PriceVector start = PriceVector::opening(catalog);
  for (int r = 1; r <= config.max_rounds; ++r) {
    RoundRecord rec;
    rec.round = r;
    rec.start = start;
    for (const auto& p : catalog.products()) {
      rec.clock.set(p.id, clock_price(start.at(p.id), config.increments.delta(p.id, r)));
    }
    for (auto& a : agents) {
      rec.eligibility[a.bidder] = a.eligibility;
      std::optional<Bundle> bid;
      if (a.eligibility > 0) bid = myopic_bid(a, start, catalog, solver);
      if (bid) {
        const int el = eligibility_cost(*bid, catalog);
        a.eligibility = std::min(a.eligibility, static_cast<int>(std::ceil(el / config.activity - 1e-9)));
        rec.bids[a.bidder] = std::move(*bid);
      } else {
        a.eligibility = 0;
        rec.bids[a.bidder] = Bundle{};
      }
    }
    bool overdemanded = false;
    for (const auto& p : catalog.products()) {
      int demand = 0;
      for (const auto& [bidder, b] : rec.bids) demand += b.quantity(p.id);
      rec.aggregate[p.id] = demand;
      rec.posted.set(p.id, posted_price(rec.start.at(p.id), rec.clock.at(p.id), demand, p.supply));
      overdemanded = overdemanded || demand > p.supply;
    }
    start = rec.posted;
    trace.rounds.push_back(std::move(rec));
    if (!overdemanded) break;
    if (r == config.max_rounds) trace.truncated = true;
  }

  const auto& last = trace.rounds.back();
  trace.rounds_used = static_cast<int>(trace.rounds.size());
  trace.final_allocation = last.bids;
  for (const auto& [bidder, b] : trace.final_allocation) trace.revenue += payment(b, last.posted);
  return trace;
}

AllocationComparison compare_allocations(const std::map<BidderId, Bundle>& a, const std::map<BidderId, Bundle>& b,
                                         const ProductCatalog& catalog) {
  std::set<BidderId> bidders;
  for (const auto& [id, x] : a) bidders.insert(id);
  for (const auto& [id, x] : b) bidders.insert(id);
  AllocationComparison out;
  if (catalog.empty()) throw ValidationError("empty product catalog");
  static const Bundle kNone;
  for (const auto& id : bidders) {
    auto ia = a.find(id);
    auto ib = b.find(id);
    const Bundle& x = ia == a.end() ? kNone : ia->second;
    const Bundle& y = ib == b.end() ? kNone : ib->second;
    double sq = 0.0;
    for (const auto& p : catalog.products()) {
      const double d = x.quantity(p.id) - y.quantity(p.id);
      sq += d * d;
    }
    const double rmse = std::sqrt(sq / static_cast<double>(catalog.size()));
    out.per_bidder[id] = rmse;
    out.aggregate += rmse;
  }
  if (!bidders.empty()) out.aggregate /= static_cast<double>(bidders.size());
  return out;
}

}  // namespace clockauction
