#include "clockauction/ingest.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <tuple>

#include "clockauction/csv.hpp"
#include "clockauction/error.hpp"

namespace clockauction {
namespace {

const Bundle& empty_bundle() {
  static const Bundle kEmpty;
  return kEmpty;
}

const std::vector<Bundle>& empty_series() {
  static const std::vector<Bundle> kEmpty;
  return kEmpty;
}

void validate_row(const BidRow& row, const ProductCatalog& catalog) {
  if (row.round < 1) throw ValidationError("round must be >= 1, got " + std::to_string(row.round));
  if (row.bidder.empty()) throw ValidationError("empty bidder id");
  const Product* p = catalog.find(row.product);
  if (p == nullptr) throw ValidationError("unknown product '" + row.product + "'");
  if (row.quantity < 0) {
    throw ValidationError("negative quantity " + std::to_string(row.quantity) + " for " + row.product);
  }
  if (row.quantity > p->supply) {
    throw ValidationError("quantity " + std::to_string(row.quantity) + " of " + row.product +
                          " exceeds supply " + std::to_string(p->supply));
  }
}

std::set<ProductId> products_of(const std::vector<Bundle>& series) {
  std::set<ProductId> out;
  for (const auto& b : series) {
    for (const auto& [id, q] : b.items()) out.insert(id);
  }
  return out;
}

}  // namespace

std::vector<BidderId> BidHistory::bidders() const {
  std::vector<BidderId> out;
  out.reserve(series_.size());
  for (const auto& [id, s] : series_) out.push_back(id);
  return out;
}

const Bundle& BidHistory::bid(const BidderId& bidder, int round) const {
  auto it = series_.find(bidder);
  if (it == series_.end() || round < 1 || round > num_rounds_) return empty_bundle();
  return it->second[static_cast<std::size_t>(round - 1)];
}

const std::vector<Bundle>& BidHistory::rounds_of(const BidderId& bidder) const {
  auto it = series_.find(bidder);
  return it == series_.end() ? empty_series() : it->second;
}

void BidHistory::set(const BidderId& bidder, int round, Bundle bundle) {
  if (round < 1) throw ValidationError("round must be >= 1");
  if (round > num_rounds_) {
    num_rounds_ = round;
    for (auto& [id, s] : series_) s.resize(static_cast<std::size_t>(num_rounds_));
  }
  auto& s = series_[bidder];
  s.resize(static_cast<std::size_t>(num_rounds_));
  s[static_cast<std::size_t>(round - 1)] = std::move(bundle);
}

std::vector<BidRow> BidHistory::to_rows() const {
  std::vector<BidRow> rows;
  for (const auto& [bidder, series] : series_) {
    const auto products = products_of(series);
    for (int r = 1; r <= num_rounds_; ++r) {
      for (const auto& p : products) {
        rows.push_back({r, bidder, p, series[static_cast<std::size_t>(r - 1)].quantity(p)});
      }
    }
  }
  return rows;
}

BidHistory RawBidLog::history() const {
  int num_rounds = 0;
  for (const auto& row : rows) num_rounds = std::max(num_rounds, row.round);
  BidHistory h(num_rounds);
  std::map<BidderId, std::vector<Bundle>> series;
  for (const auto& row : rows) {
    auto& s = series[row.bidder];
    s.resize(static_cast<std::size_t>(num_rounds));
    s[static_cast<std::size_t>(row.round - 1)].set(row.product, row.quantity);
  }
  for (auto& [bidder, s] : series) {
    for (int r = 1; r <= num_rounds; ++r) h.set(bidder, r, std::move(s[static_cast<std::size_t>(r - 1)]));
  }
  return h;
}

RawBidLog make_bid_log(std::vector<BidRow> rows, const ProductCatalog& catalog) {
  std::set<std::tuple<int, BidderId, ProductId>> seen;
  std::map<BidderId, std::set<int>> rounds;
  for (const auto& row : rows) {
    validate_row(row, catalog);
    if (!seen.emplace(row.round, row.bidder, row.product).second) {
      throw ValidationError("duplicate row for round " + std::to_string(row.round) + ", bidder " +
                            row.bidder + ", product " + row.product);
    }
    rounds[row.bidder].insert(row.round);
  }
  for (const auto& [bidder, rs] : rounds) {
    if (*rs.begin() != 1 || *rs.rbegin() != static_cast<int>(rs.size())) {
      throw ValidationError("rounds for bidder " + bidder + " are not contiguous from 1");
    }
  }
  return RawBidLog{std::move(rows)};
}

RawBidLog parse_bid_log(const std::filesystem::path& path, const ProductCatalog& catalog) {
  const auto table = csv::Table::read(path);
  const auto c_round = table.column("round");
  const auto c_bidder = table.column("bidder_id");
  const auto c_product = table.column("product_id");
  const auto c_qty = table.column("quantity");

  std::vector<BidRow> rows;
  rows.reserve(table.rows().size());
  for (const auto& row : table.rows()) {
    BidRow r;
    r.round = static_cast<int>(table.integer(row, c_round));
    r.bidder = table.field(row, c_bidder);
    r.product = table.field(row, c_product);
    r.quantity = static_cast<int>(table.integer(row, c_qty));
    try {
      validate_row(r, catalog);
    } catch (const ValidationError& e) {
      throw ParseError(table.source(), row.line, e.what());
    }
    rows.push_back(std::move(r));
  }
  return make_bid_log(std::move(rows), catalog);
}

void write_bid_log_csv(std::ostream& out, std::span<const BidRow> rows) {
  out << "round,bidder_id,product_id,quantity\n";
  for (const auto& r : rows) {
    out << r.round << ',' << csv::escape(r.bidder) << ',' << csv::escape(r.product) << ',' << r.quantity
        << '\n';
  }
}

RawBidLog bid_log_from_rounds(std::span<const RoundRecord> rounds) {
  BidHistory h;
  for (const auto& rec : rounds) {
    for (const auto& [bidder, bundle] : rec.bids) h.set(bidder, rec.round, bundle);
  }
  return RawBidLog{h.to_rows()};
}

std::vector<int> suffix_max(std::span<const int> series) {
  std::vector<int> out(series.begin(), series.end());
  for (std::size_t i = out.size(); i-- > 1;) out[i - 1] = std::max(out[i - 1], out[i]);
  return out;
}

SmoothedBidLog smooth_monotone(const RawBidLog& log) {
  BidHistory raw = log.history();
  BidHistory smoothed(raw.num_rounds());
  for (const auto& [bidder, series] : raw.series()) {
    std::vector<Bundle> out(series.size());
    for (const auto& product : products_of(series)) {
      std::vector<int> q;
      q.reserve(series.size());
      for (const auto& b : series) q.push_back(b.quantity(product));
      const auto s = suffix_max(q);
      for (std::size_t r = 0; r < s.size(); ++r) out[r].set(product, s[r]);
    }
    for (std::size_t r = 0; r < out.size(); ++r) {
      smoothed.set(bidder, static_cast<int>(r + 1), std::move(out[r]));
    }
  }
  return SmoothedBidLog(std::move(smoothed));
}

std::optional<std::size_t> CopyLadder::index_of(int quantity) const {
  auto it = std::lower_bound(levels.begin(), levels.end(), quantity);
  if (it == levels.end() || *it != quantity) return std::nullopt;
  return static_cast<std::size_t>(it - levels.begin());
}

const BundleBase& BundleSpace::base(int base_id) const {
  for (const auto& b : bases) {
    if (b.base_id == base_id) return b;
  }
  throw ValidationError("bidder " + bidder + " has no base " + std::to_string(base_id));
}

LadderMap build_ladders(const SmoothedBidLog& log, const BidderId& bidder) {
  std::map<ProductId, std::set<int>> levels;
  for (const auto& b : log.history().rounds_of(bidder)) {
    for (const auto& [id, q] : b.items()) levels[id].insert(q);
  }
  LadderMap out;
  for (auto& [id, qs] : levels) out.emplace(id, CopyLadder{id, {qs.begin(), qs.end()}});
  return out;
}

std::vector<BundleBase> extract_bases(const SmoothedBidLog& log, const BidderId& bidder) {
  std::vector<std::set<ProductId>> supports;
  std::vector<BundleBase> bases;
  for (const auto& b : log.history().rounds_of(bidder)) {
    if (b.empty()) continue;
    std::set<ProductId> support;
    for (const auto& [id, q] : b.items()) support.insert(id);
    auto it = std::find(supports.begin(), supports.end(), support);
    if (it == supports.end()) {
      supports.push_back(std::move(support));
      bases.push_back(BundleBase{static_cast<int>(bases.size()), b});
      continue;
    }
    auto& base = bases[static_cast<std::size_t>(it - supports.begin())].quantities;
    for (const auto& [id, q] : b.items()) base.set(id, std::min(base.quantity(id), q));
  }
  return bases;
}

bool is_variant_of(const Bundle& bundle, const BundleBase& base, const LadderMap& ladders) {
  if (bundle.support_size() != base.quantities.support_size()) return false;
  for (const auto& [id, q] : bundle.items()) {
    const int base_q = base.quantities.quantity(id);
    if (base_q == 0 || q < base_q) return false;
    auto it = ladders.find(id);
    if (it == ladders.end() || !it->second.index_of(q)) return false;
  }
  return true;
}

std::uint64_t count_variants(const BundleBase& base, const LadderMap& ladders) {
  std::uint64_t n = 1;
  for (const auto& [id, q] : base.quantities.items()) {
    const auto& levels = ladders.at(id).levels;
    n *= static_cast<std::uint64_t>(levels.end() - std::lower_bound(levels.begin(), levels.end(), q));
  }
  return n;
}

std::vector<Bundle> enumerate_variants(const BundleBase& base, const LadderMap& ladders) {
  std::vector<std::pair<ProductId, std::vector<int>>> choices;
  for (const auto& [id, q] : base.quantities.items()) {
    auto it = ladders.find(id);
    if (it == ladders.end()) throw ValidationError("no ladder for base product " + id);
    const auto& levels = it->second.levels;
    std::vector<int> allowed(std::lower_bound(levels.begin(), levels.end(), q), levels.end());
    if (allowed.empty() || allowed.front() != q) {
      throw ValidationError("base level " + std::to_string(q) + " of " + id + " is not on the ladder");
    }
    choices.emplace_back(id, std::move(allowed));
  }
  std::vector<Bundle> out;
  std::vector<std::size_t> idx(choices.size(), 0);
  while (true) {
    Bundle b;
    for (std::size_t i = 0; i < choices.size(); ++i) b.set(choices[i].first, choices[i].second[idx[i]]);
    out.push_back(std::move(b));
    std::size_t pos = choices.size();
    while (pos > 0) {
      --pos;
      if (++idx[pos] < choices[pos].second.size()) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
    if (choices.empty()) return out;
  }
}

BundleSpace build_bundle_space(const SmoothedBidLog& log, const BidderId& bidder) {
  BundleSpace space;
  space.bidder = bidder;
  space.ladders = build_ladders(log, bidder);
  space.bases = extract_bases(log, bidder);
  const auto& series = log.history().rounds_of(bidder);
  for (std::size_t r = 0; r < series.size(); ++r) {
    ObservedBid obs{series[r], std::nullopt};
    if (!obs.bundle.empty()) {
      for (const auto& base : space.bases) {
        if (is_variant_of(obs.bundle, base, space.ladders)) {
          obs.base_id = base.base_id;
          break;
        }
      }
      if (!obs.base_id) {
        throw ValidationError("observed bundle " + to_string(obs.bundle) + " of " + bidder +
                              " maps to no base");
      }
    }
    space.observed.emplace(static_cast<int>(r + 1), std::move(obs));
  }
  return space;
}

}  // namespace clockauction
