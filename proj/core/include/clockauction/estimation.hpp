#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clockauction/domain.hpp"
#include "clockauction/ingest.hpp"
#include "clockauction/optim.hpp"
#include "clockauction/valuation.hpp"

namespace clockauction {

/// Rows emitted per constraint block.
struct BlockCounts {
  int positive_utility = 0;
  int marginal_rationality = 0;
  int revealed_preference = 0;
  int diminishing_returns = 0;

  friend bool operator==(const BlockCounts&, const BlockCounts&) = default;
};

struct EstimationReport {
  BidderId bidder;
  optim::SolveStatus status = optim::SolveStatus::kOptimal;
  double slack_total = 0.0;       // cents, sum of revealed-preference slack at the optimum
  double base_value_total = 0.0;  // cents, sum of base values at the optimum
  BlockCounts rows;               // rows in the solved program
  BlockCounts violations;         // rows not met by the materialized model (exact cents)
  int separation_passes = 0;
  std::int64_t lp_iterations = 0;
  /// Marginal-rationality rows had to be relaxed with penalized slack.
  bool fallback_used = false;
  double fallback_slack_total = 0.0;
};

struct EstimationOptions {
  /// Weight of relaxed marginal-rationality slack relative to revealed-preference slack.
  double fallback_penalty = 10.0;
  /// Most violated alternatives added per (round, base) in one separation pass.
  int cuts_per_base = 4;
  int max_separation_passes = 500;
  /// After the main solve, keep the objective at its optimum and minimize the sum of
  /// marginal values, which picks the tightest marginals among tied optima.
  bool tighten_marginals = true;
  /// Largest full program (revealed-preference rows) `build_lp` will materialize.
  std::int64_t max_full_rows = 2'000'000;
  double activity = 1.0;
};

struct Estimate {
  ValuationModel model;
  EstimationReport report;
};

/// Observed round data for one bidder. prices[r-1] and eligibility[r-1] belong to round r.
struct EstimationInput {
  const BundleSpace& space;
  std::span<const PriceVector> prices;
  std::span<const int> eligibility;
  const ProductCatalog& catalog;
};

/// Eligibility under the activity rule, replayed over the smoothed bids. Round 1 gets
/// the eligibility cost of the largest variant over all bases; afterwards
/// E^{r+1} = min(E^r, ceil(El(b^r) / activity)), and an empty bid zeroes it for good.
std::vector<int> reconstruct_eligibility(const BundleSpace& space, const ProductCatalog& catalog,
                                         double activity = 1.0);

/// Largest eligibility cost over the variants of all bases.
int max_variant_eligibility(const std::vector<BundleBase>& bases, const LadderMap& ladders,
                            const ProductCatalog& catalog);

/// The complete program with every revealed-preference comparison enumerated. Throws
/// ValidationError when it would exceed `options.max_full_rows` rows.
optim::LinearProgram build_lp(const EstimationInput& input, const EstimationOptions& options = {});

/// Solves the program by adding revealed-preference rows lazily. The optimum matches
/// the complete program's.
Estimate estimate(const EstimationInput& input, const EstimationOptions& options = {},
                  const optim::Solver& solver = optim::default_solver());

/// One estimate per bidder in the log, computed concurrently, ordered by bidder id.
std::vector<Estimate> estimate_all(const SmoothedBidLog& log, std::span<const PriceVector> prices,
                                   const ProductCatalog& catalog, const EstimationOptions& options = {});

}  // namespace clockauction
