#include "clockauction/trace_io.hpp"

#include <fstream>
#include <ostream>

#include "clockauction/csv.hpp"
#include "clockauction/error.hpp"

namespace clockauction {
namespace {

using nlohmann::json;

json prices_json(const PriceVector& p) {
  json j = json::object();
  for (const auto& [id, m] : p.items()) j[id] = m.in_cents();
  return j;
}

PriceVector prices_from(const json& j) {
  PriceVector p;
  for (const auto& [id, c] : j.items()) p.set(id, Money::cents(c.get<std::int64_t>()));
  return p;
}

json bundle_json(const Bundle& b) {
  json j = json::object();
  for (const auto& [id, q] : b.items()) j[id] = q;
  return j;
}

Bundle bundle_from(const json& j) {
  Bundle b;
  for (const auto& [id, q] : j.items()) b.set(id, q.get<int>());
  return b;
}

json tiered_bundle_json(const TieredBundle& b) {
  json j = json::object();
  for (const auto& [id, h] : b) j[id] = {{"quantity", h.quantity}, {"tier", std::string(to_string(h.tier))}};
  return j;
}

TieredBundle tiered_bundle_from(const json& j) {
  TieredBundle b;
  for (const auto& [id, h] : j.items()) {
    b[id] = {h.at("quantity").get<int>(), parse_tier(h.at("tier").get<std::string>())};
  }
  return b;
}

json tier_prices_json(const TierPrices& p) {
  json j = json::object();
  for (auto t : kTiers) j[std::string(to_string(t))] = prices_json(p[index(t)]);
  return j;
}

TierPrices tier_prices_from(const json& j) {
  TierPrices p;
  for (auto t : kTiers) p[index(t)] = prices_from(j.at(std::string(to_string(t))));
  return p;
}

template <typename F>
void for_each_line(const std::filesystem::path& path, F&& f) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      f(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(path.string(), lineno, e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(path.string(), lineno, e.what());
    }
  }
}

template <typename Trace>
void check_rounds(const Trace& t, const std::filesystem::path& path) {
  if (t.rounds.empty()) throw ValidationError(path.string() + ": trace has no rounds");
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    if (t.rounds[i].round != static_cast<int>(i) + 1) throw ValidationError(path.string() + ": rounds must run 1..n");
  }
}

}  // namespace

json to_json(const RoundRecord& r) {
  json bids = json::object();
  for (const auto& [bidder, b] : r.bids) bids[bidder] = bundle_json(b);
  return {{"round", r.round},
          {"start_cents", prices_json(r.start)},
          {"clock_cents", prices_json(r.clock)},
          {"posted_cents", prices_json(r.posted)},
          {"aggregate", r.aggregate},
          {"bids", bids},
          {"eligibility", r.eligibility}};
}

RoundRecord round_from_json(const json& j) {
  RoundRecord r;
  r.round = j.at("round").get<int>();
  r.start = prices_from(j.at("start_cents"));
  r.clock = prices_from(j.at("clock_cents"));
  r.posted = prices_from(j.at("posted_cents"));
  r.aggregate = j.at("aggregate").get<std::map<ProductId, int>>();
  for (const auto& [bidder, b] : j.at("bids").items()) r.bids[bidder] = bundle_from(b);
  r.eligibility = j.at("eligibility").get<std::map<BidderId, int>>();
  return r;
}

json to_json(const TieredRoundRecord& r) {
  json bids = json::object();
  for (const auto& [bidder, b] : r.bids) bids[bidder] = tiered_bundle_json(b);
  json aggregate = json::object();
  for (const auto& [id, d] : r.aggregate) {
    aggregate[id] = {{"low", d[0]}, {"medium", d[1]}, {"high", d[2]}};
  }
  return {{"round", r.round},
          {"start_cents", tier_prices_json(r.start)},
          {"clock_cents", tier_prices_json(r.clock)},
          {"posted_cents", tier_prices_json(r.posted)},
          {"aggregate", aggregate},
          {"bids", bids},
          {"eligibility", r.eligibility}};
}

TieredRoundRecord tiered_round_from_json(const json& j) {
  TieredRoundRecord r;
  r.round = j.at("round").get<int>();
  r.start = tier_prices_from(j.at("start_cents"));
  r.clock = tier_prices_from(j.at("clock_cents"));
  r.posted = tier_prices_from(j.at("posted_cents"));
  for (const auto& [id, d] : j.at("aggregate").items()) {
    r.aggregate[id] = {d.at("low").get<int>(), d.at("medium").get<int>(), d.at("high").get<int>()};
  }
  for (const auto& [bidder, b] : j.at("bids").items()) r.bids[bidder] = tiered_bundle_from(b);
  r.eligibility = j.at("eligibility").get<std::map<BidderId, int>>();
  return r;
}

json summary_json(const AuctionTrace& t) {
  json alloc = json::object();
  for (const auto& [bidder, b] : t.final_allocation) alloc[bidder] = bundle_json(b);
  return {{"final_allocation", alloc},
          {"revenue_cents", t.revenue.in_cents()},
          {"revenue", t.revenue.to_string()},
          {"rounds_used", t.rounds_used},
          {"truncated", t.truncated}};
}

json summary_json(const TieredTrace& t) {
  json alloc = json::object();
  for (const auto& [bidder, b] : t.final_allocation) alloc[bidder] = tiered_bundle_json(b);
  return {{"final_allocation", alloc},
          {"revenue_cents", t.revenue.in_cents()},
          {"revenue", t.revenue.to_string()},
          {"rounds_used", t.rounds_used},
          {"truncated", t.truncated}};
}

void write_trace_jsonl(std::ostream& out, const AuctionTrace& t, const std::string& manifest) {
  for (const auto& r : t.rounds) {
    json j = to_json(r);
    if (!manifest.empty()) j["manifest"] = manifest;
    out << j.dump() << '\n';
  }
}

void write_trace_jsonl(std::ostream& out, const TieredTrace& t, const std::string& manifest) {
  for (const auto& r : t.rounds) {
    json j = to_json(r);
    if (!manifest.empty()) j["manifest"] = manifest;
    out << j.dump() << '\n';
  }
}

AuctionTrace read_trace(const std::filesystem::path& path, const ProductCatalog& catalog) {
  AuctionTrace t;
  for_each_line(path, [&](const json& j) { t.rounds.push_back(round_from_json(j)); });
  check_rounds(t, path);
  const auto& last = t.rounds.back();
  t.rounds_used = static_cast<int>(t.rounds.size());
  t.final_allocation = last.bids;
  for (const auto& [bidder, b] : last.bids) t.revenue += payment(b, last.posted);
  for (const auto& p : catalog.products()) {
    auto it = last.aggregate.find(p.id);
    if (it != last.aggregate.end() && it->second > p.supply) t.truncated = true;
  }
  return t;
}

TieredTrace read_tiered_trace(const std::filesystem::path& path, const ProductCatalog& catalog) {
  TieredTrace t;
  for_each_line(path, [&](const json& j) { t.rounds.push_back(tiered_round_from_json(j)); });
  check_rounds(t, path);
  const auto& last = t.rounds.back();
  t.rounds_used = static_cast<int>(t.rounds.size());
  t.final_allocation = last.bids;
  for (const auto& [bidder, b] : last.bids) t.revenue += tiered_payment(b, last.posted);
  for (const auto& p : catalog.products()) {
    auto it = last.aggregate.find(p.id);
    if (it == last.aggregate.end()) continue;
    for (bool over : tier_overdemand(it->second, p.supply)) t.truncated = t.truncated || over;
  }
  return t;
}

std::vector<PriceVector> load_round_prices(const std::filesystem::path& path, const ProductCatalog& catalog) {
  const auto t = csv::Table::read(path);
  const auto c_round = t.column("round");
  const auto c_product = t.column("product_id");
  const auto c_price = t.column("price_cad");
  std::vector<PriceVector> out;
  for (const auto& row : t.rows()) {
    try {
      const auto r = t.integer(row, c_round);
      if (r < 1 || r > 100'000) throw ValidationError("round out of range");
      const auto& id = t.field(row, c_product);
      if (!catalog.contains(id)) throw ValidationError("unknown product '" + id + "'");
      const Money price = Money::parse(t.field(row, c_price));
      if (price < Money{}) throw ValidationError("negative price");
      if (out.size() < static_cast<std::size_t>(r)) out.resize(static_cast<std::size_t>(r));
      auto& pv = out[static_cast<std::size_t>(r) - 1];
      if (pv.find(id)) throw ValidationError("repeated price for " + id + " in round " + std::to_string(r));
      pv.set(id, price);
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(t.source(), row.line, e.what());
    }
  }
  for (std::size_t r = 0; r < out.size(); ++r) {
    if (out[r].size() != catalog.size()) {
      throw ValidationError(t.source() + ": round " + std::to_string(r + 1) + " does not price every product");
    }
  }
  return out;
}

void write_round_prices_csv(std::ostream& out, std::span<const PriceVector> prices) {
  out << "round,product_id,price_cad\n";
  for (std::size_t r = 0; r < prices.size(); ++r) {
    for (const auto& [id, m] : prices[r].items()) out << r + 1 << ',' << csv::escape(id) << ',' << m.to_string() << '\n';
  }
}

AuctionTrace trace_from_log(const RawBidLog& log, std::span<const PriceVector> prices, const ProductCatalog& catalog) {
  const BidHistory h = log.history();
  const auto n = static_cast<std::size_t>(h.num_rounds());
  if (prices.size() < n) {
    throw ValidationError("round prices cover " + std::to_string(prices.size()) + " rounds but the log has " +
                          std::to_string(n));
  }
  AuctionTrace t;
  for (std::size_t r = 0; r < n; ++r) {
    RoundRecord rec;
    rec.round = static_cast<int>(r) + 1;
    rec.start = prices[r];
    rec.posted = r + 1 < prices.size() ? prices[r + 1] : prices[r];
    rec.clock = rec.posted;
    for (const auto& bidder : h.bidders()) rec.bids[bidder] = h.bid(bidder, rec.round);
    for (const auto& p : catalog.products()) {
      int d = 0;
      for (const auto& [bidder, b] : rec.bids) d += b.quantity(p.id);
      rec.aggregate[p.id] = d;
    }
    t.rounds.push_back(std::move(rec));
  }
  if (t.rounds.empty()) throw ValidationError("empty bid log");
  const auto& last = t.rounds.back();
  t.rounds_used = static_cast<int>(n);
  t.final_allocation = last.bids;
  for (const auto& [bidder, b] : last.bids) t.revenue += payment(b, last.posted);
  return t;
}

}  // namespace clockauction
