#pragma once

#include <map>
#include <optional>
#include <vector>

#include "clockauction/domain.hpp"
#include "clockauction/optim.hpp"
#include "clockauction/valuation.hpp"

namespace clockauction {

struct AuctionConfig {
  ProductCatalog catalog;
  IncrementSchedule increments;
  int max_rounds = 500;
  /// Fraction of eligibility that must be exercised to keep it. 1.0 is the strict rule.
  double activity = 1.0;
  /// Round-1 eligibility per bidder; bidders not listed start at their largest variant.
  std::map<BidderId, int> initial_eligibility;

  void validate() const;
};

struct BidderAgent {
  BidderId bidder;
  ValuationModel model;
  int eligibility = 0;
};

/// Agent starting at the eligibility cost of its largest variant.
BidderAgent make_agent(ValuationModel model, const ProductCatalog& catalog);

struct AuctionTrace {
  std::vector<RoundRecord> rounds;
  std::map<BidderId, Bundle> final_allocation;
  Money revenue;
  int rounds_used = 0;
  bool truncated = false;

  friend bool operator==(const AuctionTrace&, const AuctionTrace&) = default;
};

/// Utility-maximizing variant of `base` at `prices` within `eligibility`, or nullopt when
/// even the base itself does not fit. Ties between levels go to the larger quantity.
std::optional<Bundle> best_copies(const BundleBase& base, const ValuationModel& model, const PriceVector& prices,
                                  int eligibility, const ProductCatalog& catalog,
                                  const optim::Solver& solver = optim::default_solver());

/// The MIP solved by `best_copies`, exposed for `--dump-lp`.
optim::MixedIntegerProgram best_copies_program(const BundleBase& base, const ValuationModel& model,
                                               const PriceVector& prices, int eligibility,
                                               const ProductCatalog& catalog);

/// Best bundle over all bases (lower base id wins ties), or nullopt when its utility
/// is negative or nothing fits.
std::optional<Bundle> myopic_bid(const BidderAgent& agent, const PriceVector& prices, const ProductCatalog& catalog,
                                 const optim::Solver& solver = optim::default_solver());

AuctionTrace run_auction(const AuctionConfig& config, std::vector<BidderAgent> agents,
                         const optim::Solver& solver = optim::default_solver());

struct AllocationComparison {
  std::map<BidderId, double> per_bidder;  // RMSE over catalog products
  double aggregate = 0.0;                 // mean of per-bidder RMSE
};

/// Bidders missing from one side count as holding nothing.
AllocationComparison compare_allocations(const std::map<BidderId, Bundle>& a, const std::map<BidderId, Bundle>& b,
                                         const ProductCatalog& catalog);

}  // namespace clockauction
