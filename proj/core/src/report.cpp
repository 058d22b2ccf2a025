#include "clockauction/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "clockauction/csv.hpp"

namespace clockauction {
namespace {

// Light to dark; bin 0 is reserved for zero demand.
constexpr std::array<const char*, 6> kRamp{"#f7f7f7", "#deebf7", "#9ecae1", "#6baed6", "#3182bd", "#08519c"};

std::int64_t units(const std::map<BidderId, Bundle>& alloc) {
  std::int64_t n = 0;
  for (const auto& [bidder, b] : alloc) n += b.total_units();
  return n;
}

void stamp(std::ostream& out, const std::string& manifest) {
  if (!manifest.empty()) out << "# manifest " << manifest << '\n';
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

double revenue_gap_percent(Money actual, Money simulated) {
  if (actual == Money{}) return 0.0;
  return 100.0 * static_cast<double>((actual - simulated).in_cents()) / static_cast<double>(actual.in_cents());
}

TraceComparison compare_traces(const AuctionTrace& actual, const AuctionTrace& simulated,
                               const ProductCatalog& catalog) {
  TraceComparison c;
  c.rmse = compare_allocations(actual.final_allocation, simulated.final_allocation, catalog);
  c.actual_revenue = actual.revenue;
  c.simulated_revenue = simulated.revenue;
  c.revenue_gap_percent = revenue_gap_percent(actual.revenue, simulated.revenue);
  c.actual_rounds = actual.rounds_used;
  c.simulated_rounds = simulated.rounds_used;
  c.actual_units = units(actual.final_allocation);
  c.simulated_units = units(simulated.final_allocation);
  return c;
}

nlohmann::json to_json(const TraceComparison& c) {
  return {{"rmse_per_bidder", c.rmse.per_bidder},
          {"rmse_aggregate", c.rmse.aggregate},
          {"actual_revenue", c.actual_revenue.to_string()},
          {"simulated_revenue", c.simulated_revenue.to_string()},
          {"revenue_gap_percent", c.revenue_gap_percent},
          {"actual_rounds", c.actual_rounds},
          {"simulated_rounds", c.simulated_rounds},
          {"actual_units", c.actual_units},
          {"simulated_units", c.simulated_units}};
}

void write_rmse_csv(std::ostream& out, const AllocationComparison& c, const std::string& manifest) {
  stamp(out, manifest);
  out << "bidder_id,rmse\n";
  for (const auto& [bidder, r] : c.per_bidder) out << csv::escape(bidder) << ',' << fixed(r, 6) << '\n';
  out << "*," << fixed(c.aggregate, 6) << '\n';
}

void write_heatmap_csv(std::ostream& out, const AuctionTrace& trace, const BidderId& bidder,
                       const ProductCatalog& catalog, const std::string& manifest) {
  stamp(out, manifest);
  out << "round";
  for (const auto& p : catalog.products()) out << ',' << csv::escape(p.id);
  out << '\n';
  for (const auto& r : trace.rounds) {
    out << r.round;
    auto it = r.bids.find(bidder);
    for (const auto& p : catalog.products()) out << ',' << (it == r.bids.end() ? 0 : it->second.quantity(p.id));
    out << '\n';
  }
}

std::string heatmap_svg(const AuctionTrace& trace, const BidderId& bidder, const ProductCatalog& catalog,
                        const std::string& manifest) {
  constexpr int kCell = 12;
  constexpr int kLeft = 40;
  constexpr int kTop = 20;
  std::vector<int> nonzero;
  for (const auto& r : trace.rounds) {
    auto it = r.bids.find(bidder);
    if (it == r.bids.end()) continue;
    for (const auto& [id, q] : it->second.items()) {
      if (q > 0) nonzero.push_back(q);
    }
  }
  std::sort(nonzero.begin(), nonzero.end());
  // Quintile cut points over the non-zero cells.
  std::array<int, 4> cuts{};
  for (std::size_t i = 0; i < cuts.size() && !nonzero.empty(); ++i) {
    cuts[i] = nonzero[std::min(nonzero.size() - 1, (i + 1) * nonzero.size() / 5)];
  }
  auto bin = [&](int q) {
    if (q <= 0) return 0;
    std::size_t b = 1;
    while (b <= cuts.size() && q > cuts[b - 1]) ++b;
    return static_cast<int>(std::min<std::size_t>(b, kRamp.size() - 1));
  };

  const int width = kLeft + kCell * static_cast<int>(catalog.size()) + 10;
  const int height = kTop + kCell * static_cast<int>(trace.rounds.size()) + 10;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  if (!manifest.empty()) svg << "<!-- manifest " << manifest << " -->\n";
  svg << "<text x=\"2\" y=\"12\" font-size=\"10\">" << bidder << "</text>\n";
  int row = 0;
  for (const auto& r : trace.rounds) {
    auto it = r.bids.find(bidder);
    int col = 0;
    for (const auto& p : catalog.products()) {
      const int q = it == r.bids.end() ? 0 : it->second.quantity(p.id);
      svg << "<rect x=\"" << kLeft + col * kCell << "\" y=\"" << kTop + row * kCell << "\" width=\"" << kCell
          << "\" height=\"" << kCell << "\" fill=\"" << kRamp[static_cast<std::size_t>(bin(q))] << "\"><title>round "
          << r.round << ", " << p.id << ": " << q << "</title></rect>\n";
      ++col;
    }
    ++row;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_price_scatter_csv(std::ostream& out, const AuctionTrace& actual, const AuctionTrace& simulated,
                             const ProductCatalog& catalog, const std::string& manifest) {
  stamp(out, manifest);
  out << "product_id,actual_price_cad,simulated_price_cad\n";
  auto final_price = [](const AuctionTrace& t, const ProductId& id) -> std::string {
    if (t.rounds.empty()) return "";
    auto p = t.rounds.back().posted.find(id);
    return p ? p->to_string() : "";
  };
  for (const auto& p : catalog.products()) {
    out << csv::escape(p.id) << ',' << final_price(actual, p.id) << ',' << final_price(simulated, p.id) << '\n';
  }
}

nlohmann::json to_json(const CoverageSummary& s) {
  auto tiers = [](const TierArray& a) { return nlohmann::json{{"low", a[0]}, {"medium", a[1]}, {"high", a[2]}}; };
  nlohmann::json by_class = nlohmann::json::object();
  for (const auto& [c, a] : s.licenses_by_class) by_class[std::string(to_string(c))] = tiers(a);
  nlohmann::json share = nlohmann::json::object();
  const std::int64_t sold = s.licenses_by_tier[0] + s.licenses_by_tier[1] + s.licenses_by_tier[2];
  for (auto t : kTiers) {
    const auto n = static_cast<double>(s.licenses_by_tier[index(t)]);
    share[std::string(to_string(t))] = {
        {"of_sold", sold > 0 ? n / static_cast<double>(sold) : 0.0},
        {"of_supply", s.total_supply > 0 ? n / static_cast<double>(s.total_supply) : 0.0}};
  }
  return {{"licenses_by_class", by_class},
          {"licenses_by_tier", tiers(s.licenses_by_tier)},
          {"licenses_sold", sold},
          {"total_supply", s.total_supply},
          {"tier_share", share},
          {"additional_population", s.additional_population},
          {"additional_by_area", s.additional_by_area}};
}

}  // namespace clockauction
