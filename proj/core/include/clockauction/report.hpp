#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "clockauction/engine.hpp"
#include "clockauction/extended.hpp"

namespace clockauction {

/// (actual - simulated) / actual in percent; 0 when actual is 0.
double revenue_gap_percent(Money actual, Money simulated);

struct TraceComparison {
  AllocationComparison rmse;
  Money actual_revenue;
  Money simulated_revenue;
  double revenue_gap_percent = 0.0;
  int actual_rounds = 0;
  int simulated_rounds = 0;
  std::int64_t actual_units = 0;
  std::int64_t simulated_units = 0;
};

TraceComparison compare_traces(const AuctionTrace& actual, const AuctionTrace& simulated,
                               const ProductCatalog& catalog);

nlohmann::json to_json(const TraceComparison& c);
/// `bidder_id, rmse` with a trailing `*` row for the aggregate.
void write_rmse_csv(std::ostream& out, const AllocationComparison& c, const std::string& manifest = {});

/// Rounds down, catalog products across; each cell is the bidder's demanded quantity.
void write_heatmap_csv(std::ostream& out, const AuctionTrace& trace, const BidderId& bidder,
                       const ProductCatalog& catalog, const std::string& manifest = {});
std::string heatmap_svg(const AuctionTrace& trace, const BidderId& bidder, const ProductCatalog& catalog,
                        const std::string& manifest = {});

/// Final posted price of each product in both traces.
void write_price_scatter_csv(std::ostream& out, const AuctionTrace& actual, const AuctionTrace& simulated,
                             const ProductCatalog& catalog, const std::string& manifest = {});

nlohmann::json to_json(const CoverageSummary& s);

}  // namespace clockauction
