#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <clockauction/costmodel.hpp>
#include <clockauction/error.hpp>
#include <clockauction/extended.hpp>
#include <clockauction/ingest.hpp>
#include <clockauction/manifest.hpp>
#include <clockauction/report.hpp>
#include <clockauction/synthetic.hpp>
#include <clockauction/trace_io.hpp>

#include "config.hpp"
#include "output.hpp"

namespace ca = clockauction;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int { kOk = 0, kValidation = 2, kSolver = 3, kTruncated = 4 };

struct Globals {
  fs::path config_path;
  fs::path out = ".";
  fs::path dump_lp;
  std::string scenario = "none";
};

/// Shared state for one subcommand run.
class Run {
 public:
  Run(const Globals& g, std::string command) : globals_(g), outputs_(g.out) {
    if (!g.config_path.empty()) config_ = ca::cli::Config::load(g.config_path);
    manifest_.command = std::move(command);
    manifest_.config_hash = config_.hash();
    manifest_.scenario = g.scenario;
  }

  const ca::cli::Config& config() const { return config_; }
  ca::RunManifest& manifest() { return manifest_; }
  ca::cli::OutputSet& outputs() { return outputs_; }

  fs::path input(const std::string& key) {
    auto p = config_.require_path(key);
    manifest_.add_input(p);
    return p;
  }
  std::optional<fs::path> optional_input(const std::string& key) {
    auto p = config_.path(key);
    if (p) manifest_.add_input(*p);
    return p;
  }

  ca::ProductCatalog catalog() { return ca::load_catalog(input("catalog")); }

  bool dumping() const { return !globals_.dump_lp.empty(); }
  void dump(const std::string& name, std::string program) {
    if (dumping()) lp_.emplace_back(name, std::move(program));
  }

  std::string stamp() { return manifest_.hash(); }

  json stamped(json j) {
    j["manifest"] = stamp();
    return j;
  }

  void finish() {
    outputs_.add("manifest.json", stamped(manifest_.to_json()).dump(2) + "\n");
    if (dumping()) {
      ca::cli::OutputSet lp(globals_.dump_lp);
      for (auto& [name, text] : lp_) lp.add(name, std::move(text));
      lp.commit();
    }
    outputs_.commit();
  }

 private:
  const Globals& globals_;
  ca::cli::Config config_;
  ca::RunManifest manifest_;
  ca::cli::OutputSet outputs_;
  std::vector<std::pair<std::string, std::string>> lp_;
};

std::string safe_name(std::string s) {
  for (char& c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok) c = '_';
  }
  return s;
}

std::string bid_csv(std::span<const ca::BidRow> rows, const std::string& manifest) {
  std::ostringstream s;
  s << "# manifest " << manifest << '\n';
  ca::write_bid_log_csv(s, rows);
  return s.str();
}

std::vector<ca::BidderAgent> load_agents(const fs::path& path, const ca::ProductCatalog& catalog) {
  std::ifstream in(path);
  if (!in) throw ca::ValidationError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ca::ValidationError(path.string() + ": " + e.what());
  }
  const json& models = j.is_object() ? j.at("models") : j;
  std::vector<ca::BidderAgent> agents;
  for (const auto& m : models) {
    auto model = ca::model_from_json(m);
    if (model.bases.empty()) continue;
    for (const auto& [id, ladder] : model.ladders) (void)catalog.at(id);
    agents.push_back(ca::make_agent(std::move(model), catalog));
  }
  return agents;
}

ca::TieredValuationAdjustment cost_table_for(Run& run, const ca::ProductCatalog& catalog,
                                             const std::vector<ca::BidderAgent>& agents, const std::string& scenario) {
  if (auto p = run.optional_input("cost_table")) return ca::load_adjustment(*p);
  const auto demographics = ca::load_demographics(run.input("demographics"));
  ca::TowerInventory inventory;
  if (auto p = run.optional_input("inventory")) inventory = ca::load_inventory(*p);
  std::vector<ca::BidderId> bidders;
  for (const auto& a : agents) bidders.push_back(a.bidder);
  auto built = ca::build_cost_table(catalog, demographics, inventory, ca::CostScenario::named(scenario),
                                    run.config().cost_parameters(), bidders);
  for (const auto& w : built.warnings) std::cerr << "warning: " << w << '\n';
  return std::move(built.table);
}

int cmd_ingest(Run& run) {
  const auto catalog = run.catalog();
  const auto log = ca::parse_bid_log(run.input("bid_log"), catalog);
  const auto history = log.history();
  const auto h = run.stamp();
  run.outputs().add("bids.csv", bid_csv(log.rows, h));
  json summary{{"rounds", history.num_rounds()},
               {"bidders", history.bidders()},
               {"rows", log.rows.size()},
               {"products", catalog.size()}};
  if (auto p = run.optional_input("round_prices")) {
    const auto prices = ca::load_round_prices(*p, catalog);
    const auto trace = ca::trace_from_log(log, prices, catalog);
    std::ostringstream jl;
    ca::write_trace_jsonl(jl, trace, h);
    run.outputs().add("observed_trace.jsonl", jl.str());
    run.outputs().add("observed_summary.json", run.stamped(ca::summary_json(trace)).dump(2) + "\n");
    summary["revenue"] = trace.revenue.to_string();
  }
  run.outputs().add("ingest_summary.json", run.stamped(summary).dump(2) + "\n");
  run.finish();
  std::cout << "ingested " << log.rows.size() << " rows, " << history.bidders().size() << " bidders, "
            << history.num_rounds() << " rounds\n";
  return kOk;
}

int cmd_smooth(Run& run) {
  const auto catalog = run.catalog();
  const auto smoothed = ca::smooth_monotone(ca::parse_bid_log(run.input("bid_log"), catalog));
  const auto rows = smoothed.rows();
  run.outputs().add("bids_smoothed.csv", bid_csv(rows, run.stamp()));
  run.finish();
  std::cout << "smoothed " << rows.size() << " rows\n";
  return kOk;
}

json report_json(const ca::EstimationReport& r) {
  auto blocks = [](const ca::BlockCounts& b) {
    return json{{"positive_utility", b.positive_utility},
                {"marginal_rationality", b.marginal_rationality},
                {"revealed_preference", b.revealed_preference},
                {"diminishing_returns", b.diminishing_returns}};
  };
  return {{"bidder_id", r.bidder},
          {"status", ca::optim::to_string(r.status)},
          {"slack_total_cents", r.slack_total},
          {"base_value_total_cents", r.base_value_total},
          {"rows", blocks(r.rows)},
          {"violations", blocks(r.violations)},
          {"separation_passes", r.separation_passes},
          {"lp_iterations", r.lp_iterations},
          {"fallback_used", r.fallback_used},
          {"fallback_slack_total_cents", r.fallback_slack_total}};
}

int cmd_estimate(Run& run) {
  const auto catalog = run.catalog();
  const auto smoothed = ca::smooth_monotone(ca::parse_bid_log(run.input("bid_log"), catalog));
  const auto all_prices = ca::load_round_prices(run.input("round_prices"), catalog);
  const auto rounds = static_cast<std::size_t>(smoothed.history().num_rounds());
  if (all_prices.size() < rounds) throw ca::ValidationError("round prices stop before the last logged round");
  const std::span<const ca::PriceVector> prices(all_prices.data(), rounds);
  const auto options = run.config().estimation();
  const auto estimates = ca::estimate_all(smoothed, prices, catalog, options);

  json models = json::array();
  json reports = json::array();
  int flagged = 0;
  for (const auto& e : estimates) {
    models.push_back(ca::to_json(e.model));
    reports.push_back(report_json(e.report));
    if (e.report.fallback_used || e.report.slack_total > 0.5) ++flagged;
  }
  if (run.dumping()) {
    for (const auto& bidder : smoothed.history().bidders()) {
      const auto space = ca::build_bundle_space(smoothed, bidder);
      const auto el = ca::reconstruct_eligibility(space, catalog, options.activity);
      try {
        const auto lp = ca::build_lp({space, prices, el, catalog}, options);
        run.dump("estimate_" + safe_name(bidder) + ".lp", ca::optim::to_lp_format(lp));
      } catch (const ca::ValidationError& e) {
        std::cerr << "note: no LP dump for " << bidder << ": " << e.what() << '\n';
      }
    }
  }
  run.outputs().add("valuations.json", run.stamped(json{{"models", models}}).dump(2) + "\n");
  run.outputs().add("estimation_report.json", run.stamped(json{{"bidders", reports}}).dump(2) + "\n");
  run.finish();
  std::cout << "estimated " << estimates.size() << " bidders";
  if (flagged > 0) std::cout << " (" << flagged << " with slack or relaxed rows)";
  std::cout << '\n';
  return kOk;
}

int cmd_simulate(Run& run) {
  auto catalog = run.catalog();
  auto agents = load_agents(run.input("valuations"), catalog);
  const auto config = run.config().auction(std::move(catalog));
  if (run.dumping()) {
    const auto opening = ca::PriceVector::opening(config.catalog);
    for (const auto& a : agents) {
      for (const auto& base : a.model.bases) {
        run.dump("best_copies_" + safe_name(a.bidder) + "_base" + std::to_string(base.base_id) + ".lp",
                 ca::optim::to_lp_format(ca::best_copies_program(base, a.model, opening, a.eligibility, config.catalog)));
      }
    }
  }
  const auto trace = ca::run_auction(config, std::move(agents));
  std::ostringstream jl;
  ca::write_trace_jsonl(jl, trace, run.stamp());
  run.outputs().add("trace.jsonl", jl.str());
  run.outputs().add("summary.json", run.stamped(ca::summary_json(trace)).dump(2) + "\n");
  run.finish();
  std::cout << "simulated " << trace.rounds_used << " rounds, revenue " << trace.revenue.to_string()
            << (trace.truncated ? " (truncated)" : "") << '\n';
  return trace.truncated ? kTruncated : kOk;
}

int cmd_simulate_extended(Run& run, const std::string& scenario) {
  auto catalog = run.catalog();
  auto agents = load_agents(run.input("valuations"), catalog);
  const auto config = run.config().auction(std::move(catalog));
  const auto adjustment = cost_table_for(run, config.catalog, agents, scenario);
  if (run.dumping()) {
    const auto opening = ca::PriceVector::opening(config.catalog);
    const ca::TierPrices prices{opening, opening, opening};
    for (const auto& a : agents) {
      for (const auto& base : a.model.bases) {
        run.dump("tiered_best_copies_" + safe_name(a.bidder) + "_base" + std::to_string(base.base_id) + ".lp",
                 ca::optim::to_lp_format(ca::tiered_best_copies_program(base, a.model, prices, a.eligibility,
                                                                        config.catalog, adjustment)));
      }
    }
  }
  const auto trace = ca::run_extended_auction(config, std::move(agents), adjustment);
  std::ostringstream jl;
  ca::write_trace_jsonl(jl, trace, run.stamp());
  run.outputs().add("tiered_trace.jsonl", jl.str());
  json summary = ca::summary_json(trace);
  json costs = json::object();
  for (const auto& [bidder, c] : ca::deployment_costs(trace, config.catalog, adjustment)) costs[bidder] = c.to_string();
  summary["deployment_costs"] = costs;
  summary["scenario"] = scenario;
  if (auto p = run.optional_input("demographics")) {
    const auto demographics = ca::load_demographics(*p);
    const auto coverage = ca::coverage_report(trace, config.catalog, demographics, run.config().cost_parameters().coverage);
    summary["coverage"] = ca::to_json(coverage);
  }
  run.outputs().add("tiered_summary.json", run.stamped(summary).dump(2) + "\n");
  run.finish();
  std::cout << "simulated " << trace.rounds_used << " tiered rounds, revenue " << trace.revenue.to_string()
            << (trace.truncated ? " (truncated)" : "") << '\n';
  return trace.truncated ? kTruncated : kOk;
}

int cmd_cost_table(Run& run, const std::string& scenario_key) {
  const auto catalog = run.catalog();
  const auto demographics = ca::load_demographics(run.input("demographics"));
  const auto inventory = ca::load_inventory(run.input("inventory"));
  std::vector<ca::BidderId> bidders;
  if (run.config().raw().contains("bidders")) bidders = run.config().raw().at("bidders").get<std::vector<std::string>>();
  const auto scenario = ca::CostScenario::named(scenario_key);
  const auto built = ca::build_cost_table(catalog, demographics, inventory, scenario, run.config().cost_parameters(),
                                          bidders);
  for (const auto& w : built.warnings) std::cerr << "warning: " << w << '\n';
  std::ostringstream csv;
  csv << "# manifest " << run.stamp() << '\n';
  ca::write_adjustment_csv(csv, built.table);
  run.outputs().add("cost_table_" + std::string(scenario.cli_key()) + ".csv", csv.str());
  run.finish();
  std::cout << "cost table " << scenario.name << ": " << built.table.entries().size() << " entries, "
            << built.warnings.size() << " warnings\n";
  return kOk;
}

int cmd_report(Run& run, const fs::path& actual_path, const fs::path& simulated_path) {
  const auto catalog = run.catalog();
  run.manifest().add_input(actual_path);
  run.manifest().add_input(simulated_path);
  const auto actual = ca::read_trace(actual_path, catalog);
  const auto simulated = ca::read_trace(simulated_path, catalog);
  const auto cmp = ca::compare_traces(actual, simulated, catalog);
  const auto h = run.stamp();
  run.outputs().add("comparison.json", run.stamped(ca::to_json(cmp)).dump(2) + "\n");
  std::ostringstream rmse;
  ca::write_rmse_csv(rmse, cmp.rmse, h);
  run.outputs().add("rmse.csv", rmse.str());
  std::ostringstream scatter;
  ca::write_price_scatter_csv(scatter, actual, simulated, catalog, h);
  run.outputs().add("price_scatter.csv", scatter.str());
  for (const auto& [label, trace] : {std::pair{"actual", &actual}, std::pair{"simulated", &simulated}}) {
    for (const auto& [bidder, b] : trace->final_allocation) {
      const std::string stem = std::string("heatmaps/") + label + "_" + safe_name(bidder);
      std::ostringstream csv;
      ca::write_heatmap_csv(csv, *trace, bidder, catalog, h);
      run.outputs().add(stem + ".csv", csv.str());
      run.outputs().add(stem + ".svg", ca::heatmap_svg(*trace, bidder, catalog, h));
    }
  }
  run.finish();
  char gap[32];
  std::snprintf(gap, sizeof gap, "%.2f", cmp.revenue_gap_percent);
  std::cout << "revenue " << cmp.actual_revenue.to_string() << " vs " << cmp.simulated_revenue.to_string() << " (gap "
            << gap << "%), aggregate RMSE " << cmp.rmse.aggregate << '\n';
  return kOk;
}

int cmd_roundtrip(Run& run, int markets) {
  auto spec = run.config().synthetic();
  const auto options = run.config().estimation();
  json rows = json::array();
  int exact = 0;
  for (int m = 0; m < markets; ++m) {
    const auto market = ca::generate_market(spec);
    const auto rt = ca::round_trip(market, options);
    double slack = 0.0;
    for (const auto& e : rt.estimates) slack += e.report.slack_total;
    const bool same = rt.comparison.aggregate == 0.0;
    exact += same ? 1 : 0;
    rows.push_back({{"seed", spec.seed},
                    {"rmse", rt.comparison.aggregate},
                    {"original_revenue", rt.original.revenue.to_string()},
                    {"replay_revenue", rt.replay.revenue.to_string()},
                    {"original_rounds", rt.original.rounds_used},
                    {"replay_rounds", rt.replay.rounds_used},
                    {"slack_total_cents", slack},
                    {"exact", same}});
    ++spec.seed;
  }
  run.outputs().add("roundtrip.json",
                    run.stamped(json{{"markets", rows}, {"exact", exact}, {"total", markets}}).dump(2) + "\n");
  run.finish();
  std::cout << exact << "/" << markets << " synthetic markets reproduced exactly\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clock-auction valuation recovery, replay and counterfactual simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--dump-lp", g.dump_lp, "Write optimization programs in LP format to this directory");
  app.add_option("--scenario", g.scenario, "Cost scenario: none, pop-high, area-mid, combined")->capture_default_str();

  auto* ingest = app.add_subcommand("ingest", "Validate a bid log and build the observed trace");
  auto* smooth = app.add_subcommand("smooth", "Write the monotone-smoothed bid log");
  auto* estimate = app.add_subcommand("estimate", "Recover lower-bound valuations from the bid log");
  auto* simulate = app.add_subcommand("simulate", "Replay the auction with myopic bidders");
  auto* extended = app.add_subcommand("simulate-extended", "Run the deployment-tiered auction");
  auto* cost = app.add_subcommand("cost-table", "Build the deployment cost table for a scenario");
  auto* report = app.add_subcommand("report", "Compare two traces");
  auto* roundtrip = app.add_subcommand("roundtrip-check", "Simulate, estimate and replay synthetic markets");

  fs::path actual_path;
  fs::path simulated_path;
  report->add_option("--actual", actual_path, "Reference trace (JSON lines)")->required()->check(CLI::ExistingFile);
  report->add_option("--simulated", simulated_path, "Trace to compare (JSON lines)")->required()->check(CLI::ExistingFile);
  int markets = 10;
  roundtrip->add_option("--markets", markets, "Number of synthetic markets")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    Run run(g, sub->get_name());
    if (sub == ingest) return cmd_ingest(run);
    if (sub == smooth) return cmd_smooth(run);
    if (sub == estimate) return cmd_estimate(run);
    if (sub == simulate) return cmd_simulate(run);
    if (sub == extended) return cmd_simulate_extended(run, g.scenario);
    if (sub == cost) return cmd_cost_table(run, g.scenario);
    if (sub == report) return cmd_report(run, actual_path, simulated_path);
    if (sub == roundtrip) return cmd_roundtrip(run, markets);
  } catch (const ca::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const ca::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}
