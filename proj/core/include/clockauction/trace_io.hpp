#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clockauction/engine.hpp"
#include "clockauction/extended.hpp"
#include "clockauction/ingest.hpp"

namespace clockauction {

// Prices are written as integer cents under *_cents keys.
nlohmann::json to_json(const RoundRecord& r);
RoundRecord round_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TieredRoundRecord& r);
TieredRoundRecord tiered_round_from_json(const nlohmann::json& j);

nlohmann::json summary_json(const AuctionTrace& t);
nlohmann::json summary_json(const TieredTrace& t);

/// One round per line. A non-empty `manifest` is added to every line.
void write_trace_jsonl(std::ostream& out, const AuctionTrace& t, const std::string& manifest = {});
void write_trace_jsonl(std::ostream& out, const TieredTrace& t, const std::string& manifest = {});

/// Rebuilds the derived fields from the rounds. The auction counts as truncated when the
/// last round still has excess demand.
AuctionTrace read_trace(const std::filesystem::path& path, const ProductCatalog& catalog);
TieredTrace read_tiered_trace(const std::filesystem::path& path, const ProductCatalog& catalog);

/// Start price per round: `round, product_id, price_cad`. Rounds run 1..n with every
/// catalog product priced in each.
std::vector<PriceVector> load_round_prices(const std::filesystem::path& path, const ProductCatalog& catalog);
void write_round_prices_csv(std::ostream& out, std::span<const PriceVector> prices);

/// Trace view of an observed auction. `prices` holds the start price of every logged round
/// and optionally one extra entry with the final posted prices.
AuctionTrace trace_from_log(const RawBidLog& log, std::span<const PriceVector> prices, const ProductCatalog& catalog);

}  // namespace clockauction
