#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "clockauction/deployment.hpp"
#include "clockauction/engine.hpp"

namespace clockauction {

using TierArray = std::array<int, 3>;
using TierFlags = std::array<bool, 3>;
using TierPrices = std::array<PriceVector, 3>;

/// High when d_H > s, Medium when d_M + d_H > s, Low when the total exceeds s.
TierFlags tier_overdemand(const TierArray& demands, int supply);

struct TieredHolding {
  int quantity = 0;
  DeploymentTier tier = DeploymentTier::kLow;

  friend bool operator==(const TieredHolding&, const TieredHolding&) = default;
};

/// At most one tier per product.
using TieredBundle = std::map<ProductId, TieredHolding, std::less<>>;

Bundle untiered(const TieredBundle& b);
Money tiered_payment(const TieredBundle& b, const TierPrices& prices);

/// Lump-sum cost of every (area, tier) pair the bundle engages.
Money deployment_charge(const BidderId& bidder, const TieredBundle& b, const ProductCatalog& catalog,
                        const TieredValuationAdjustment& adjustment);

/// Standard utility at tier prices minus deployment charges.
Money tiered_utility(const ValuationModel& model, const TieredBundle& b, const BundleBase& base,
                     const TierPrices& prices, const ProductCatalog& catalog,
                     const TieredValuationAdjustment& adjustment);

optim::MixedIntegerProgram tiered_best_copies_program(const BundleBase& base, const ValuationModel& model,
                                                      const TierPrices& prices, int eligibility,
                                                      const ProductCatalog& catalog,
                                                      const TieredValuationAdjustment& adjustment);

/// Ties go to the larger quantity, then the stricter tier.
std::optional<TieredBundle> tiered_best_copies(const BundleBase& base, const ValuationModel& model,
                                               const TierPrices& prices, int eligibility,
                                               const ProductCatalog& catalog,
                                               const TieredValuationAdjustment& adjustment,
                                               const optim::Solver& solver = optim::default_solver());

std::optional<TieredBundle> tiered_myopic_bid(const BidderAgent& agent, const TierPrices& prices,
                                              const ProductCatalog& catalog,
                                              const TieredValuationAdjustment& adjustment,
                                              const optim::Solver& solver = optim::default_solver());

struct TieredRoundRecord {
  int round = 0;
  TierPrices start;
  TierPrices clock;
  TierPrices posted;
  std::map<ProductId, TierArray> aggregate;
  std::map<BidderId, TieredBundle> bids;
  std::map<BidderId, int> eligibility;

  friend bool operator==(const TieredRoundRecord&, const TieredRoundRecord&) = default;
};

struct TieredTrace {
  std::vector<TieredRoundRecord> rounds;
  std::map<BidderId, TieredBundle> final_allocation;
  Money revenue;
  int rounds_used = 0;
  bool truncated = false;

  friend bool operator==(const TieredTrace&, const TieredTrace&) = default;
};

/// Every tier of a product opens at the product's opening price and shares its supply.
TieredTrace run_extended_auction(const AuctionConfig& config, std::vector<BidderAgent> agents,
                                 const TieredValuationAdjustment& adjustment,
                                 const optim::Solver& solver = optim::default_solver());

struct CoverageSummary {
  std::map<AreaClass, TierArray> licenses_by_class;
  TierArray licenses_by_tier{};
  std::int64_t total_supply = 0;
  /// Population reached by the strictest tier held in each area beyond the Low target.
  std::int64_t additional_population = 0;
  std::map<AreaId, std::int64_t> additional_by_area;
};

CoverageSummary coverage_report(const TieredTrace& trace, const ProductCatalog& catalog,
                                const Demographics& demographics, const CoverageTable& coverage);

/// Deployment charges on the final allocation, per bidder.
std::map<BidderId, Money> deployment_costs(const TieredTrace& trace, const ProductCatalog& catalog,
                                           const TieredValuationAdjustment& adjustment);

}  // namespace clockauction
