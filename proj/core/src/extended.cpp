#include "clockauction/extended.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "clockauction/error.hpp"

namespace clockauction {
namespace {

std::vector<int> allowed_levels(const BundleBase& base, const ValuationModel& model, const ProductId& id) {
  const auto& levels = model.ladders.at(id).levels;
  const int q = base.quantities.quantity(id);
  return {std::lower_bound(levels.begin(), levels.end(), q), levels.end()};
}

std::string tag(const std::string& a, const std::string& b, DeploymentTier t) {
  return "[" + a + "," + b + "," + std::string(to_string(t)) + "]";
}

struct Choice {
  ProductId id;
  int level;
  DeploymentTier tier;
  int column;
};

optim::MixedIntegerProgram build_program(const BundleBase& base, const ValuationModel& model, const TierPrices& prices,
                                         int eligibility, const ProductCatalog& catalog,
                                         const TieredValuationAdjustment& adjustment, std::vector<Choice>* choices) {
  optim::MixedIntegerProgram mip;
  auto& lp = mip.relaxation();
  lp.set_sense(optim::Sense::kMaximize);
  std::vector<optim::Term> budget;
  std::map<std::pair<AreaId, DeploymentTier>, int> engage;
  for (const auto& [id, bq] : base.quantities.items()) {
    const auto& product = catalog.at(id);
    std::vector<optim::Term> choose_one;
    for (int level : allowed_levels(base, model, id)) {
      const Money cum = model.cumulative(id, level);
      for (auto t : kTiers) {
        const int x = mip.add_binary("X" + tag(id, std::to_string(level), t));
        if (choices) choices->push_back({id, level, t, x});
        lp.set_objective(x, static_cast<double>((cum - prices[index(t)].at(id) * level).in_cents()));
        choose_one.push_back({x, 1.0});
        if (product.eligibility_points != 0) budget.push_back({x, static_cast<double>(level) * product.eligibility_points});
        const Money c = adjustment.cost(model.bidder, product.area_id, t);
        if (c == Money{}) continue;
        auto [it, fresh] = engage.try_emplace({product.area_id, t}, -1);
        if (fresh) {
          it->second = mip.add_binary("Y" + tag(model.bidder, product.area_id, t));
          lp.set_objective(it->second, -static_cast<double>(c.in_cents()));
        }
        lp.add_constraint("engage" + tag(id, std::to_string(level), t), {{x, 1.0}, {it->second, -1.0}},
                          optim::Relation::kLessEqual, 0.0);
      }
    }
    lp.add_constraint("copies[" + id + "]", std::move(choose_one), optim::Relation::kEqual, 1.0);
  }
  lp.add_constraint("eligibility", std::move(budget), optim::Relation::kLessEqual, eligibility);
  return mip;
}

}  // namespace

TierFlags tier_overdemand(const TierArray& d, int supply) {
  const int high = d[index(DeploymentTier::kHigh)];
  const int medium = high + d[index(DeploymentTier::kMedium)];
  const int low = medium + d[index(DeploymentTier::kLow)];
  return {low > supply, medium > supply, high > supply};
}

Bundle untiered(const TieredBundle& b) {
  Bundle out;
  for (const auto& [id, h] : b) out.set(id, h.quantity);
  return out;
}

Money tiered_payment(const TieredBundle& b, const TierPrices& prices) {
  Money total;
  for (const auto& [id, h] : b) total += prices[index(h.tier)].at(id) * h.quantity;
  return total;
}

Money deployment_charge(const BidderId& bidder, const TieredBundle& b, const ProductCatalog& catalog,
                        const TieredValuationAdjustment& adjustment) {
  std::set<std::pair<AreaId, DeploymentTier>> engaged;
  for (const auto& [id, h] : b) {
    if (h.quantity > 0) engaged.emplace(catalog.at(id).area_id, h.tier);
  }
  Money total;
  for (const auto& [area, tier] : engaged) total += adjustment.cost(bidder, area, tier);
  return total;
}

Money tiered_utility(const ValuationModel& model, const TieredBundle& b, const BundleBase& base,
                     const TierPrices& prices, const ProductCatalog& catalog,
                     const TieredValuationAdjustment& adjustment) {
  if (b.empty()) return Money{};
  return bundle_value(model, untiered(b), base) - tiered_payment(b, prices) -
         deployment_charge(model.bidder, b, catalog, adjustment);
}

optim::MixedIntegerProgram tiered_best_copies_program(const BundleBase& base, const ValuationModel& model,
                                                      const TierPrices& prices, int eligibility,
                                                      const ProductCatalog& catalog,
                                                      const TieredValuationAdjustment& adjustment) {
  return build_program(base, model, prices, eligibility, catalog, adjustment, nullptr);
}

std::optional<TieredBundle> tiered_best_copies(const BundleBase& base, const ValuationModel& model,
                                               const TierPrices& prices, int eligibility,
                                               const ProductCatalog& catalog,
                                               const TieredValuationAdjustment& adjustment,
                                               const optim::Solver& solver) {
  if (base.quantities.empty()) return std::nullopt;
  std::vector<Choice> choices;
  const auto mip = build_program(base, model, prices, eligibility, catalog, adjustment, &choices);
  const auto sol = solver.solve(mip);
  if (sol.status == optim::SolveStatus::kInfeasible) return std::nullopt;
  if (sol.status != optim::SolveStatus::kOptimal) {
    throw SolverError("tiered copy selection for " + model.bidder + " is " + optim::to_string(sol.status));
  }

  TieredBundle pick;
  for (const auto& c : choices) {
    if (sol.value(c.column) > 0.5) pick[c.id] = {c.level, c.tier};
  }

  // Exact-cent polish over single-product moves.
  auto points = [&](const TieredBundle& b) { return eligibility_cost(untiered(b), catalog); };
  auto utility = [&](const TieredBundle& b) { return tiered_utility(model, b, base, prices, catalog, adjustment); };
  Money current = utility(pick);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [id, bq] : base.quantities.items()) {
      const TieredHolding now = pick.at(id);
      for (int level : allowed_levels(base, model, id)) {
        for (auto t : kTiers) {
          if (level == now.quantity && t == now.tier) continue;
          TieredBundle trial = pick;
          trial[id] = {level, t};
          if (points(trial) > eligibility) continue;
          const Money u = utility(trial);
          const bool larger = std::tuple(level, index(t)) > std::tuple(now.quantity, index(now.tier));
          if (u > current || (u == current && larger)) {
            pick = std::move(trial);
            current = u;
            changed = true;
            break;
          }
        }
        if (changed) break;
      }
      if (changed) break;
    }
  }
  return pick;
}

std::optional<TieredBundle> tiered_myopic_bid(const BidderAgent& agent, const TierPrices& prices,
                                              const ProductCatalog& catalog,
                                              const TieredValuationAdjustment& adjustment,
                                              const optim::Solver& solver) {
  std::optional<TieredBundle> best;
  Money best_u;
  for (const auto& base : agent.model.bases) {
    auto b = tiered_best_copies(base, agent.model, prices, agent.eligibility, catalog, adjustment, solver);
    if (!b) continue;
    const Money u = tiered_utility(agent.model, *b, base, prices, catalog, adjustment);
    if (!best || u > best_u) {
      best = std::move(b);
      best_u = u;
    }
  }
  if (best && best_u >= Money{}) return best;
  return std::nullopt;
}

TieredTrace run_extended_auction(const AuctionConfig& config, std::vector<BidderAgent> agents,
                                 const TieredValuationAdjustment& adjustment, const optim::Solver& solver) {
  config.validate();
  const auto& catalog = config.catalog;
  std::sort(agents.begin(), agents.end(), [](const auto& a, const auto& b) { return a.bidder < b.bidder; });
  for (std::size_t i = 1; i < agents.size(); ++i) {
    if (agents[i].bidder == agents[i - 1].bidder) throw ValidationError("duplicate bidder " + agents[i].bidder);
  }
  for (auto& a : agents) {
    auto it = config.initial_eligibility.find(a.bidder);
    if (it != config.initial_eligibility.end()) a.eligibility = it->second;
    for (const auto& [id, ladder] : a.model.ladders) {
      const auto& area = catalog.at(id).area_id;
      for (auto t : kTiers) (void)adjustment.cost(a.bidder, area, t);  // throws on gaps
    }
  }

  TieredTrace trace;
  const PriceVector opening = PriceVector::opening(catalog);
  TierPrices start{opening, opening, opening};
  for (int r = 1; r <= config.max_rounds; ++r) {
    TieredRoundRecord rec;
    rec.round = r;
    rec.start = start;
    for (auto t : kTiers) {
      for (const auto& p : catalog.products()) {
        rec.clock[index(t)].set(p.id, clock_price(start[index(t)].at(p.id), config.increments.delta(p.id, r)));
      }
    }
    for (auto& a : agents) {
      rec.eligibility[a.bidder] = a.eligibility;
      std::optional<TieredBundle> bid;
      if (a.eligibility > 0) bid = tiered_myopic_bid(a, start, catalog, adjustment, solver);
      if (bid) {
        const int el = eligibility_cost(untiered(*bid), catalog);
        a.eligibility = std::min(a.eligibility, static_cast<int>(std::ceil(el / config.activity - 1e-9)));
        rec.bids[a.bidder] = std::move(*bid);
      } else {
        a.eligibility = 0;
        rec.bids[a.bidder] = TieredBundle{};
      }
    }
    bool overdemanded = false;
    for (const auto& p : catalog.products()) {
      TierArray d{};
      for (const auto& [bidder, b] : rec.bids) {
        auto it = b.find(p.id);
        if (it != b.end()) d[index(it->second.tier)] += it->second.quantity;
      }
      rec.aggregate[p.id] = d;
      const TierFlags over = tier_overdemand(d, p.supply);
      for (auto t : kTiers) {
        const auto i = index(t);
        rec.posted[i].set(p.id, over[i] ? rec.clock[i].at(p.id) : rec.start[i].at(p.id));
        overdemanded = overdemanded || over[i];
      }
    }
    start = rec.posted;
    trace.rounds.push_back(std::move(rec));
    if (!overdemanded) break;
    if (r == config.max_rounds) trace.truncated = true;
  }

  const auto& last = trace.rounds.back();
  trace.rounds_used = static_cast<int>(trace.rounds.size());
  trace.final_allocation = last.bids;
  for (const auto& [bidder, b] : trace.final_allocation) trace.revenue += tiered_payment(b, last.posted);
  return trace;
}

CoverageSummary coverage_report(const TieredTrace& trace, const ProductCatalog& catalog,
                                const Demographics& demographics, const CoverageTable& coverage) {
  CoverageSummary out;
  for (const auto& p : catalog.products()) {
    out.total_supply += p.supply;
    (void)demographics.at(p.area_id);
  }
  std::map<AreaId, DeploymentTier> strictest;
  for (const auto& [bidder, b] : trace.final_allocation) {
    for (const auto& [id, h] : b) {
      if (h.quantity <= 0) continue;
      const auto& product = catalog.at(id);
      const auto& area = demographics.at(product.area_id);
      out.licenses_by_class[area.area_class][index(h.tier)] += h.quantity;
      out.licenses_by_tier[index(h.tier)] += h.quantity;
      auto [it, fresh] = strictest.try_emplace(product.area_id, h.tier);
      if (!fresh) it->second = std::max(it->second, h.tier);
    }
  }
  for (const auto& [area_id, tier] : strictest) {
    const auto& area = demographics.at(area_id);
    const double delta = coverage.fraction(area.area_class, tier) - coverage.fraction(area.area_class, DeploymentTier::kLow);
    const auto added = static_cast<std::int64_t>(std::llround(static_cast<double>(area.population) * delta));
    out.additional_by_area[area_id] = added;
    out.additional_population += added;
  }
  return out;
}

std::map<BidderId, Money> deployment_costs(const TieredTrace& trace, const ProductCatalog& catalog,
                                           const TieredValuationAdjustment& adjustment) {
  std::map<BidderId, Money> out;
  for (const auto& [bidder, b] : trace.final_allocation) out[bidder] = deployment_charge(bidder, b, catalog, adjustment);
  return out;
}

}  // namespace clockauction
