#include "clockauction/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <set>
#include <thread>

#include "clockauction/error.hpp"

namespace clockauction {
namespace {

using optim::Relation;
using optim::Term;

enum class Block { kPositiveUtility, kMarginalRationality, kRevealedPreference, kDiminishingReturns };

void bump(BlockCounts& c, Block b) {
  switch (b) {
    case Block::kPositiveUtility:
      ++c.positive_utility;
      break;
    case Block::kMarginalRationality:
      ++c.marginal_rationality;
      break;
    case Block::kRevealedPreference:
      ++c.revealed_preference;
      break;
    case Block::kDiminishingReturns:
      ++c.diminishing_returns;
      break;
  }
}

using Terms = std::map<int, double>;

std::vector<Term> to_terms(const Terms& t) {
  std::vector<Term> out;
  for (const auto& [v, c] : t) {
    if (c != 0.0) out.push_back({v, c});
  }
  return out;
}

struct HardRow {
  std::string name;
  Terms terms;
  double rhs = 0.0;
  Block block = Block::kPositiveUtility;
};

struct RpRow {
  int round = 0;
  Bundle alternative;
  Terms terms;  // u(observed) - u(alternative), excluding slack
  double rhs = 0.0;
};

/// Variable layout and expression helpers shared by the full and lazy programs.
class Layout {
 public:
  explicit Layout(const EstimationInput& in) : in_(in) {
    const auto& space = in.space;
    if (in.eligibility.size() < in.prices.size()) {
      throw ValidationError("eligibility series shorter than the price series");
    }
    for (const auto& [round, obs] : space.observed) {
      if (round > static_cast<int>(in.prices.size())) {
        throw ValidationError("no start prices for round " + std::to_string(round));
      }
      if (!obs.bundle.empty() && !obs.base_id) {
        throw ValidationError("observed bundle " + to_string(obs.bundle) + " maps to no base");
      }
    }
    for (const auto& b : space.bases) vbar_.push_back(add("vbar[" + std::to_string(b.base_id) + "]"));
    for (const auto& [id, ladder] : space.ladders) {
      auto& vars = marg_[id];
      vars.push_back(-1);
      for (std::size_t k = 1; k < ladder.levels.size(); ++k) {
        vars.push_back(add("v[" + id + "," + std::to_string(ladder.levels[k]) + "]"));
      }
    }
  }

  int num_structural() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  int vbar(int base_id) const { return vbar_.at(static_cast<std::size_t>(base_id)); }
  const std::map<ProductId, std::vector<int>, std::less<>>& marginal_vars() const { return marg_; }
  const EstimationInput& input() const { return in_; }

  /// Adds sign * cumulative(product, level index k) to `t`.
  void add_cumulative(Terms& t, const ProductId& product, std::size_t k, double sign) const {
    const auto& levels = in_.space.ladders.at(product).levels;
    const auto& vars = marg_.at(product);
    for (std::size_t l = 1; l <= k; ++l) t[vars[l]] += sign * (levels[l] - levels[l - 1]);
  }

  /// Adds sign * (value part of the bundle's utility) and returns sign * cost.
  double add_utility(Terms& t, const Bundle& bundle, int base_id, const PriceVector& prices, double sign) const {
    if (bundle.empty()) return 0.0;
    t[vbar(base_id)] += sign;
    double cost = 0.0;
    for (const auto& [id, q] : bundle.items()) {
      add_cumulative(t, id, *in_.space.ladders.at(id).index_of(q), sign);
      cost += static_cast<double>(prices.at(id).in_cents()) * q;
    }
    return sign * cost;
  }

  const BundleSpace& space() const { return in_.space; }

 private:
  int add(std::string name) {
    names_.push_back(std::move(name));
    return static_cast<int>(names_.size()) - 1;
  }

  const EstimationInput& in_;
  std::vector<std::string> names_;
  std::vector<int> vbar_;
  std::map<ProductId, std::vector<int>, std::less<>> marg_;
};

/// Rows of blocks (a), (b) and (d), deduplicated on identical left-hand sides.
std::vector<HardRow> hard_rows(const Layout& layout) {
  const auto& space = layout.space();
  const auto& in = layout.input();
  std::map<std::vector<std::pair<int, double>>, std::size_t> seen;
  std::vector<HardRow> rows;
  auto push = [&](HardRow row) {
    std::vector<std::pair<int, double>> key;
    for (const auto& [v, c] : row.terms) {
      if (c != 0.0) key.emplace_back(v, c);
    }
    auto it = seen.find(key);
    if (it != seen.end()) {
      auto& existing = rows[it->second];
      existing.rhs = std::max(existing.rhs, row.rhs);
      return;
    }
    seen.emplace(std::move(key), rows.size());
    rows.push_back(std::move(row));
  };

  for (const auto& [round, obs] : space.observed) {
    if (obs.bundle.empty()) continue;
    const auto& prices = in.prices[static_cast<std::size_t>(round - 1)];
    HardRow pu{"pu[r" + std::to_string(round) + "]", {}, 0.0, Block::kPositiveUtility};
    pu.rhs = layout.add_utility(pu.terms, obs.bundle, *obs.base_id, prices, 1.0);
    push(std::move(pu));

    for (const auto& [id, q] : obs.bundle.items()) {
      const auto& levels = space.ladders.at(id).levels;
      const std::size_t k = *space.ladders.at(id).index_of(q);
      const double p = static_cast<double>(prices.at(id).in_cents());
      auto neighbour = [&](std::size_t kk, const char* tag) {
        HardRow mr{"mr[r" + std::to_string(round) + "," + id + "," + tag + "]", {}, 0.0,
                   Block::kMarginalRationality};
        layout.add_cumulative(mr.terms, id, k, 1.0);
        layout.add_cumulative(mr.terms, id, kk, -1.0);
        mr.rhs = (levels[k] - levels[kk]) * p;
        push(std::move(mr));
      };
      if (k > 0) neighbour(k - 1, "lo");
      if (k + 1 < levels.size()) neighbour(k + 1, "hi");
    }
  }
  for (const auto& [id, vars] : layout.marginal_vars()) {
    for (std::size_t k = 1; k + 1 < vars.size(); ++k) {
      HardRow dr{"dr[" + id + "," + std::to_string(k) + "]", {}, 0.0, Block::kDiminishingReturns};
      dr.terms[vars[k]] += 1.0;
      dr.terms[vars[k + 1]] -= 1.0;
      push(std::move(dr));
    }
  }
  return rows;
}

RpRow rp_row(const Layout& layout, int round, const Bundle& alternative, int alt_base) {
  const auto& obs = layout.space().observed.at(round);
  const auto& prices = layout.input().prices[static_cast<std::size_t>(round - 1)];
  RpRow row{round, alternative, {}, 0.0};
  // u(b^r) - u(b') + S >= 0 with u = value - cost
  if (!obs.bundle.empty()) row.rhs += layout.add_utility(row.terms, obs.bundle, *obs.base_id, prices, 1.0);
  row.rhs += layout.add_utility(row.terms, alternative, alt_base, prices, -1.0);
  for (auto it = row.terms.begin(); it != row.terms.end();) {
    it = it->second == 0.0 ? row.terms.erase(it) : std::next(it);
  }
  return row;
}

struct Program {
  optim::LinearProgram lp;
  BlockCounts rows;
  std::vector<int> rp_slack;  // slack variable per RP row
  std::vector<int> mr_slack;  // fallback slack variables
};

Program assemble(const Layout& layout, const std::vector<HardRow>& hard, const std::vector<RpRow>& rp,
                 bool fallback, double penalty) {
  Program prog;
  auto& lp = prog.lp;
  for (const auto& name : layout.names()) lp.add_variable(name);
  for (const auto& b : layout.space().bases) lp.set_objective(layout.vbar(b.base_id), 1.0);
  for (const auto& row : hard) {
    auto terms = to_terms(row.terms);
    if (fallback && row.block == Block::kMarginalRationality) {
      const int s = lp.add_variable("t[" + row.name + "]");
      lp.set_objective(s, penalty);
      terms.push_back({s, 1.0});
      prog.mr_slack.push_back(s);
    }
    lp.add_constraint(row.name, std::move(terms), Relation::kGreaterEqual, row.rhs);
    bump(prog.rows, row.block);
  }
  for (std::size_t i = 0; i < rp.size(); ++i) {
    const int s = lp.add_variable("s[" + std::to_string(i) + "]");
    lp.set_objective(s, 1.0);
    prog.rp_slack.push_back(s);
    auto terms = to_terms(rp[i].terms);
    terms.push_back({s, 1.0});
    lp.add_constraint("rp[r" + std::to_string(rp[i].round) + "," + std::to_string(i) + "]", std::move(terms),
                      Relation::kGreaterEqual, rp[i].rhs);
    bump(prog.rows, Block::kRevealedPreference);
  }
  return prog;
}

/// Per-product choices of a base's variants for the separation search.
struct Option {
  int level = 0;
  double value = 0.0;  // cumulative value minus cost
  int weight = 0;      // eligibility
};

class VariantSearch {
 public:
  VariantSearch(const Layout& layout, const BundleBase& base, const PriceVector& prices,
                const std::vector<double>& x, const ProductCatalog& catalog)
      : base_value_(x[static_cast<std::size_t>(layout.vbar(base.base_id))]) {
    for (const auto& [id, bq] : base.quantities.items()) {
      const auto& ladder = layout.space().ladders.at(id);
      const auto& vars = layout.marginal_vars().at(id);
      const double p = static_cast<double>(prices.at(id).in_cents());
      const int e = catalog.at(id).eligibility_points;
      std::vector<Option> opts;
      double cum = 0.0;
      for (std::size_t k = 0; k < ladder.levels.size(); ++k) {
        if (k > 0) cum += (ladder.levels[k] - ladder.levels[k - 1]) * x[static_cast<std::size_t>(vars[k])];
        if (ladder.levels[k] < bq) continue;
        opts.push_back({ladder.levels[k], cum - p * ladder.levels[k], ladder.levels[k] * e});
        cost_scale_ += p * ladder.levels[k];
      }
      std::sort(opts.begin(), opts.end(), [](const Option& a, const Option& b) {
        return a.value != b.value ? a.value > b.value : a.level < b.level;
      });
      products_.push_back(id);
      options_.push_back(std::move(opts));
    }
    const std::size_t n = options_.size();
    best_rest_.assign(n + 1, 0.0);
    min_weight_rest_.assign(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) {
      double best = -optim::kInfinity;
      int lightest = std::numeric_limits<int>::max();
      for (const auto& o : options_[i]) {
        best = std::max(best, o.value);
        lightest = std::min(lightest, o.weight);
      }
      best_rest_[i] = best_rest_[i + 1] + best;
      min_weight_rest_[i] = min_weight_rest_[i + 1] + lightest;
    }
  }

  double cost_scale() const { return cost_scale_; }

  /// Up to `limit` variants with utility above `threshold` and eligibility within
  /// `budget`, highest utility first.
  std::vector<std::pair<double, Bundle>> top(double threshold, int budget, std::size_t limit) {
    threshold_ = threshold;
    budget_ = budget;
    limit_ = limit;
    found_.clear();
    choice_.assign(options_.size(), 0);
    dfs(0, base_value_, 0);
    std::sort(found_.begin(), found_.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    return std::move(found_);
  }

 private:
  double cutoff() const {
    if (found_.size() < limit_) return threshold_;
    double worst = optim::kInfinity;
    for (const auto& f : found_) worst = std::min(worst, f.first);
    return std::max(threshold_, worst);
  }

  void dfs(std::size_t i, double value, int weight) {
    if (weight + min_weight_rest_[i] > budget_) return;
    if (value + best_rest_[i] <= cutoff()) return;
    if (i == options_.size()) {
      Bundle b;
      for (std::size_t j = 0; j < products_.size(); ++j) b.set(products_[j], options_[j][choice_[j]].level);
      if (found_.size() >= limit_) {
        auto worst = std::min_element(found_.begin(), found_.end(),
                                      [](const auto& a, const auto& c) { return a.first < c.first; });
        *worst = {value, std::move(b)};
      } else {
        found_.emplace_back(value, std::move(b));
      }
      return;
    }
    for (std::size_t k = 0; k < options_[i].size(); ++k) {
      choice_[i] = k;
      dfs(i + 1, value + options_[i][k].value, weight + options_[i][k].weight);
    }
  }

  double base_value_;
  double cost_scale_ = 0.0;
  std::vector<ProductId> products_;
  std::vector<std::vector<Option>> options_;
  std::vector<double> best_rest_;
  std::vector<int> min_weight_rest_;
  std::vector<std::size_t> choice_;
  double threshold_ = 0.0;
  int budget_ = 0;
  std::size_t limit_ = 0;
  std::vector<std::pair<double, Bundle>> found_;
};

double observed_utility(const Layout& layout, int round, const std::vector<double>& x) {
  const auto& obs = layout.space().observed.at(round);
  if (obs.bundle.empty()) return 0.0;
  Terms t;
  const double cost = layout.add_utility(t, obs.bundle, *obs.base_id, layout.input().prices[static_cast<std::size_t>(round - 1)], 1.0);
  double u = -cost;
  for (const auto& [v, c] : t) u += c * x[static_cast<std::size_t>(v)];
  return u;
}

/// Adds violated revealed-preference rows; returns how many were added.
int separate(const Layout& layout, const std::vector<double>& x, std::vector<RpRow>& rp,
             std::set<std::pair<int, Bundle>>& generated, int cuts_per_base) {
  const auto& in = layout.input();
  int added = 0;
  for (const auto& [round, obs] : layout.space().observed) {
    const int budget = in.eligibility[static_cast<std::size_t>(round - 1)];
    if (budget <= 0) continue;
    const auto& prices = in.prices[static_cast<std::size_t>(round - 1)];
    const double u_obs = observed_utility(layout, round, x);
    for (const auto& base : layout.space().bases) {
      VariantSearch search(layout, base, prices, x, in.catalog);
      const double tol = 1e-7 * std::max(1.0, search.cost_scale());
      std::size_t already = 0;
      for (auto it = generated.lower_bound({round, Bundle{}}); it != generated.end() && it->first == round; ++it) {
        if (is_variant_of(it->second, base, layout.space().ladders)) ++already;
      }
      auto cands = search.top(u_obs + tol, budget, already + static_cast<std::size_t>(cuts_per_base));
      int taken = 0;
      for (auto& [u, b] : cands) {
        if (taken >= cuts_per_base) break;
        if (b == obs.bundle || generated.count({round, b})) continue;
        generated.insert({round, b});
        rp.push_back(rp_row(layout, round, b, base.base_id));
        ++taken;
        ++added;
      }
    }
  }
  return added;
}

std::int64_t ceil_cents(double x) { return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(x - 1e-6))); }

ValuationModel materialize(const Layout& layout, const std::vector<double>& x) {
  ValuationModel m = empty_model(layout.space());
  for (const auto& b : layout.space().bases) {
    m.base_values[static_cast<std::size_t>(b.base_id)] = Money::cents(ceil_cents(x[static_cast<std::size_t>(layout.vbar(b.base_id))]));
  }
  for (const auto& [id, vars] : layout.marginal_vars()) {
    auto& v = m.marginals[id];
    for (std::size_t k = 1; k < vars.size(); ++k) v[k] = Money::cents(ceil_cents(x[static_cast<std::size_t>(vars[k])]));
  }
  return m;
}

Money exact_utility(const ValuationModel& m, const BundleSpace& space, int round, const PriceVector& prices) {
  const auto& obs = space.observed.at(round);
  if (obs.bundle.empty()) return Money{};
  return bundle_utility(m, obs.bundle, space.base(*obs.base_id), prices);
}

BlockCounts count_violations(const ValuationModel& m, const EstimationInput& in, const std::vector<RpRow>& rp) {
  BlockCounts v;
  const auto& space = in.space;
  for (const auto& [round, obs] : space.observed) {
    if (obs.bundle.empty()) continue;
    const auto& prices = in.prices[static_cast<std::size_t>(round - 1)];
    if (exact_utility(m, space, round, prices) < Money{}) ++v.positive_utility;
    for (const auto& [id, q] : obs.bundle.items()) {
      const auto& ladder = space.ladders.at(id);
      const std::size_t k = *ladder.index_of(q);
      const Money here = m.cumulative(id, q) - prices.at(id) * q;
      for (std::size_t kk : {k - 1, k + 1}) {
        if (kk >= ladder.levels.size()) continue;  // k - 1 wraps when k == 0
        const int qq = ladder.levels[kk];
        if (here < m.cumulative(id, qq) - prices.at(id) * qq) ++v.marginal_rationality;
      }
    }
  }
  for (const auto& [id, vals] : m.marginals) {
    for (std::size_t k = 1; k + 1 < vals.size(); ++k) {
      if (vals[k] < vals[k + 1]) ++v.diminishing_returns;
    }
  }
  for (const auto& row : rp) {
    const auto& prices = in.prices[static_cast<std::size_t>(row.round - 1)];
    const auto alt_base = m.base_of(row.alternative);
    const Money alt = bundle_utility(m, row.alternative, space.base(*alt_base), prices);
    if (exact_utility(m, space, row.round, prices) < alt) ++v.revealed_preference;
  }
  return v;
}

}  // namespace

int max_variant_eligibility(const std::vector<BundleBase>& bases, const LadderMap& ladders,
                            const ProductCatalog& catalog) {
  int best = 0;
  for (const auto& b : bases) {
    int el = 0;
    for (const auto& [id, q] : b.quantities.items()) el += ladders.at(id).max_level() * catalog.at(id).eligibility_points;
    best = std::max(best, el);
  }
  return best;
}

std::vector<int> reconstruct_eligibility(const BundleSpace& space, const ProductCatalog& catalog, double activity) {
  if (!(activity > 0.0 && activity <= 1.0)) throw ValidationError("activity rule must lie in (0, 1]");
  std::vector<int> out;
  int e = max_variant_eligibility(space.bases, space.ladders, catalog);
  for (const auto& [round, obs] : space.observed) {
    out.push_back(e);
    const int el = eligibility_cost(obs.bundle, catalog);
    e = obs.bundle.empty() ? 0 : std::min(e, static_cast<int>(std::ceil(el / activity - 1e-9)));
  }
  return out;
}

optim::LinearProgram build_lp(const EstimationInput& input, const EstimationOptions& options) {
  const Layout layout(input);
  const auto hard = hard_rows(layout);
  std::int64_t total = 0;
  for (const auto& [round, obs] : input.space.observed) {
    if (input.eligibility[static_cast<std::size_t>(round - 1)] <= 0) continue;
    for (const auto& base : input.space.bases) total += static_cast<std::int64_t>(count_variants(base, input.space.ladders));
  }
  if (total > options.max_full_rows) {
    throw ValidationError("full program for " + input.space.bidder + " needs " + std::to_string(total) +
                          " revealed-preference rows, above the limit of " + std::to_string(options.max_full_rows));
  }
  std::vector<RpRow> rp;
  for (const auto& [round, obs] : input.space.observed) {
    const int budget = input.eligibility[static_cast<std::size_t>(round - 1)];
    if (budget <= 0) continue;
    for (const auto& base : input.space.bases) {
      for (auto& b : enumerate_variants(base, input.space.ladders)) {
        if (b == obs.bundle || eligibility_cost(b, input.catalog) > budget) continue;
        rp.push_back(rp_row(layout, round, b, base.base_id));
      }
    }
  }
  return assemble(layout, hard, rp, false, options.fallback_penalty).lp;
}

Estimate estimate(const EstimationInput& input, const EstimationOptions& options, const optim::Solver& solver) {
  const Layout layout(input);
  const auto hard = hard_rows(layout);
  std::vector<RpRow> rp;
  std::set<std::pair<int, Bundle>> generated;

  Estimate out;
  auto& report = out.report;
  report.bidder = input.space.bidder;

  bool fallback = false;
  Program prog;
  optim::Solution sol;
  using Objective = std::function<std::vector<double>(const Program&)>;
  std::vector<std::pair<Objective, double>> locked;

  // Minimizes `objective` with earlier objectives held at their optima, adding violated
  // revealed-preference rows until none remain. Returns false on failure after stage 1.
  auto run = [&](const Objective& objective) {
    while (true) {
      prog = assemble(layout, hard, rp, fallback, options.fallback_penalty);
      optim::LinearProgram lp = prog.lp;
      for (const auto& [obj, z] : locked) {
        const auto c = obj(prog);
        std::vector<Term> terms;
        for (std::size_t v = 0; v < c.size(); ++v) {
          if (c[v] != 0.0) terms.push_back({static_cast<int>(v), c[v]});
        }
        lp.add_constraint("objective_bound", std::move(terms), Relation::kLessEqual,
                          z + 1e-7 * std::max(1.0, std::abs(z)));
      }
      const auto c = objective(prog);
      for (std::size_t v = 0; v < c.size(); ++v) lp.set_objective(static_cast<int>(v), c[v]);
      sol = solver.solve(lp);
      report.lp_iterations += sol.iterations;
      if (sol.status == optim::SolveStatus::kInfeasible && locked.empty() && !fallback) {
        fallback = true;
        report.fallback_used = true;
        continue;
      }
      if (sol.status != optim::SolveStatus::kOptimal) {
        if (!locked.empty()) return false;
        throw SolverError("estimation program for " + input.space.bidder + " is " + optim::to_string(sol.status));
      }
      ++report.separation_passes;
      if (report.separation_passes > options.max_separation_passes) {
        throw SolverError("revealed-preference separation did not converge for " + input.space.bidder);
      }
      if (separate(layout, sol.values, rp, generated, options.cuts_per_base) == 0) {
        double z = 0.0;
        for (std::size_t v = 0; v < c.size(); ++v) z += c[v] * sol.values[v];
        locked.emplace_back(objective, z);
        return true;
      }
    }
  };

  // The stated objective weighs slack and base values equally, so its optima can trade
  // one for the other. Ties are broken by least slack, then by the smallest marginals.
  std::vector<Objective> stages;
  stages.push_back([](const Program& p) { return p.lp.objective(); });
  stages.push_back([](const Program& p) {
    std::vector<double> c(static_cast<std::size_t>(p.lp.num_variables()), 0.0);
    for (int s : p.rp_slack) c[static_cast<std::size_t>(s)] = 1.0;
    return c;
  });
  if (options.tighten_marginals && !layout.marginal_vars().empty()) {
    stages.push_back([&](const Program& p) {
      std::vector<double> c(static_cast<std::size_t>(p.lp.num_variables()), 0.0);
      for (const auto& [id, vars] : layout.marginal_vars()) {
        const auto& levels = input.space.ladders.at(id).levels;
        for (std::size_t k = 1; k < vars.size(); ++k) c[static_cast<std::size_t>(vars[k])] = levels[k] - levels[k - 1];
      }
      return c;
    });
  }
  for (const auto& stage : stages) {
    Program kept_prog = prog;
    optim::Solution kept_sol = sol;
    if (!run(stage)) {
      prog = std::move(kept_prog);
      sol = std::move(kept_sol);
      break;
    }
  }

  report.status = sol.status;
  report.rows = prog.rows;
  for (int s : prog.rp_slack) report.slack_total += sol.value(s);
  for (int s : prog.mr_slack) report.fallback_slack_total += sol.value(s);
  for (const auto& b : input.space.bases) report.base_value_total += sol.value(layout.vbar(b.base_id));

  out.model = materialize(layout, sol.values);
  report.violations = count_violations(out.model, input, rp);
  return out;
}

std::vector<Estimate> estimate_all(const SmoothedBidLog& log, std::span<const PriceVector> prices,
                                   const ProductCatalog& catalog, const EstimationOptions& options) {
  const auto bidders = log.history().bidders();
  std::vector<Estimate> out(bidders.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < bidders.size(); i = next++) {
      const auto space = build_bundle_space(log, bidders[i]);
      const auto elig = reconstruct_eligibility(space, catalog, options.activity);
      out[i] = estimate(EstimationInput{space, prices, elig, catalog}, options);
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(bidders.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> jobs;
  for (std::size_t t = 1; t < threads; ++t) jobs.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace clockauction
