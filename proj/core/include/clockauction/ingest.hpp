#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "clockauction/domain.hpp"

namespace clockauction {

struct BidRow {
  int round = 1;
  BidderId bidder;
  ProductId product;
  int quantity = 0;

  friend bool operator==(const BidRow&, const BidRow&) = default;
};

/// Dense per-bidder bundles for rounds 1..num_rounds. Rounds without rows hold the
/// empty bundle.
class BidHistory {
 public:
  BidHistory() = default;
  explicit BidHistory(int num_rounds) : num_rounds_(num_rounds) {}

  int num_rounds() const noexcept { return num_rounds_; }
  const std::map<BidderId, std::vector<Bundle>>& series() const noexcept { return series_; }
  std::vector<BidderId> bidders() const;

  /// Empty bundle for unknown bidders.
  const Bundle& bid(const BidderId& bidder, int round) const;
  const std::vector<Bundle>& rounds_of(const BidderId& bidder) const;
  void set(const BidderId& bidder, int round, Bundle bundle);

  /// One row per (round, bidder, product) for every product the bidder ever demanded,
  /// zeros included, ordered by bidder, round, product.
  std::vector<BidRow> to_rows() const;

  friend bool operator==(const BidHistory&, const BidHistory&) = default;

 private:
  int num_rounds_ = 0;
  std::map<BidderId, std::vector<Bundle>> series_;
};

struct RawBidLog {
  std::vector<BidRow> rows;

  BidHistory history() const;
};

/// Bid log whose per-(bidder, product) demand never increases across rounds.
/// Only `smooth_monotone` constructs one.
class SmoothedBidLog {
 public:
  const BidHistory& history() const noexcept { return history_; }
  std::vector<BidRow> rows() const { return history_.to_rows(); }

 private:
  friend SmoothedBidLog smooth_monotone(const RawBidLog& log);
  explicit SmoothedBidLog(BidHistory h) : history_(std::move(h)) {}
  BidHistory history_;
};

/// Validates rows against the catalog: known products, 0 <= quantity <= supply,
/// round >= 1, no duplicate (round, bidder, product), and each bidder's rounds
/// contiguous from 1. Throws ValidationError.
RawBidLog make_bid_log(std::vector<BidRow> rows, const ProductCatalog& catalog);

/// Reads `round, bidder_id, product_id, quantity`.
RawBidLog parse_bid_log(const std::filesystem::path& path, const ProductCatalog& catalog);

void write_bid_log_csv(std::ostream& out, std::span<const BidRow> rows);

/// Raw bid log from engine round records.
RawBidLog bid_log_from_rounds(std::span<const RoundRecord> rounds);

/// Suffix maximum of a demand series: out[r] = max(in[r..]).
std::vector<int> suffix_max(std::span<const int> series);

SmoothedBidLog smooth_monotone(const RawBidLog& log);

struct CopyLadder {
  ProductId product;
  std::vector<int> levels;  // strictly increasing, all > 0

  /// Index of `quantity` among the levels, or nullopt when off-ladder.
  std::optional<std::size_t> index_of(int quantity) const;
  int max_level() const { return levels.back(); }

  friend bool operator==(const CopyLadder&, const CopyLadder&) = default;
};

using LadderMap = std::map<ProductId, CopyLadder, std::less<>>;

struct BundleBase {
  int base_id = 0;
  Bundle quantities;

  friend bool operator==(const BundleBase&, const BundleBase&) = default;
};

struct ObservedBid {
  Bundle bundle;
  std::optional<int> base_id;  // nullopt for the empty bid

  friend bool operator==(const ObservedBid&, const ObservedBid&) = default;
};

struct BundleSpace {
  BidderId bidder;
  std::vector<BundleBase> bases;
  LadderMap ladders;
  std::map<int, ObservedBid> observed;  // keyed by round

  const BundleBase& base(int base_id) const;
};

LadderMap build_ladders(const SmoothedBidLog& log, const BidderId& bidder);

/// One base per distinct non-empty support set, ordered by first appearance. Each base
/// quantity is the minimum observed among rounds with that support.
std::vector<BundleBase> extract_bases(const SmoothedBidLog& log, const BidderId& bidder);

/// All bundles over the base's products with every level on the ladder and >= the
/// base level. Includes the base itself. Order is lexicographic in product id then level.
std::vector<Bundle> enumerate_variants(const BundleBase& base, const LadderMap& ladders);

std::uint64_t count_variants(const BundleBase& base, const LadderMap& ladders);

/// True when `bundle` has exactly the base's support with on-ladder levels at or above it.
bool is_variant_of(const Bundle& bundle, const BundleBase& base, const LadderMap& ladders);

BundleSpace build_bundle_space(const SmoothedBidLog& log, const BidderId& bidder);

}  // namespace clockauction
