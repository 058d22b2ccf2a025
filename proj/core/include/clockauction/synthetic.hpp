#pragma once

#include <cstdint>
#include <vector>

#include "clockauction/engine.hpp"
#include "clockauction/estimation.hpp"

namespace clockauction {

struct SyntheticSpec {
  int num_products = 10;
  int num_bidders = 5;
  int max_supply = 6;
  int max_bases = 2;
  int max_levels = 3;
  int max_base_products = 4;
  /// Later bases are subsets of the first, so a bidder only ever drops products.
  bool nested_bases = true;
  std::uint64_t seed = 1;
};

struct SyntheticMarket {
  AuctionConfig config;
  std::vector<BidderAgent> agents;
};

/// Random catalog and bidders with known, internally consistent valuations.
SyntheticMarket generate_market(const SyntheticSpec& spec);

struct RoundTrip {
  AuctionTrace original;
  AuctionTrace replay;
  std::vector<Estimate> estimates;
  AllocationComparison comparison;
};

/// Simulates the market, estimates valuations from the smoothed bid log at the
/// recorded start prices, and re-simulates with the estimated agents.
RoundTrip round_trip(const SyntheticMarket& market, const EstimationOptions& options = {});

/// Start prices per round of a trace, in round order.
std::vector<PriceVector> start_prices(const AuctionTrace& trace);

}  // namespace clockauction
