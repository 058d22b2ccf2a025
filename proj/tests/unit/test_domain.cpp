#include <gtest/gtest.h>

#include <clockauction/csv.hpp>
#include <clockauction/error.hpp>

#include "fixtures.hpp"

using namespace clockauction;
using fixtures::product;

TEST(Money, ParsesAndFormats) {
  EXPECT_EQ(Money::parse("1234").in_cents(), 123400);
  EXPECT_EQ(Money::parse("12.5").in_cents(), 1250);
  EXPECT_EQ(Money::parse("-0.07").in_cents(), -7);
  EXPECT_EQ(Money::cents(123456).to_string(), "1234.56");
  EXPECT_EQ(Money::cents(-5).to_string(), "-0.05");
  EXPECT_THROW(Money::parse("1.234"), ValidationError);
  EXPECT_THROW(Money::parse("abc"), ValidationError);
  EXPECT_THROW(Money::parse(""), ValidationError);
}

TEST(Money, RoundCentsHalfUp) {
  EXPECT_EQ(Money::round_cents(10.5).in_cents(), 11);
  EXPECT_EQ(Money::round_cents(10.49).in_cents(), 10);
}

TEST(ClockPrice, Examples) {
  EXPECT_EQ(clock_price(Money::dollars(100000), 0.10), Money::dollars(110000));
  EXPECT_EQ(clock_price(Money{}, 0.20), Money{});
  EXPECT_EQ(clock_price(Money::dollars(1333), 0.15), Money::dollars(1533));
}

TEST(ClockPrice, RejectsOutOfRangeIncrement) {
  EXPECT_THROW(clock_price(Money::dollars(100), 0.05), ValidationError);
  EXPECT_THROW(clock_price(Money::dollars(100), 0.25), ValidationError);
  EXPECT_THROW(clock_price(Money::dollars(-1), 0.1), ValidationError);
}

TEST(ClockPrice, NeverBelowStartAndWholeDollars) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Money start = Money::cents(std::uniform_int_distribution<std::int64_t>(0, 10'000'000'000)(rng));
    const double delta = std::uniform_real_distribution<double>(0.1, 0.2)(rng);
    const Money c = clock_price(start, delta);
    EXPECT_GE(c, start);
    EXPECT_EQ(c.in_cents() % 100, 0);
  }
}

TEST(AggregateDemand, Examples) {
  const std::vector<Bundle> bids{{{"A", 2}}, {{"A", 3}}, {{"A", 1}}};
  EXPECT_EQ(aggregate_demand(bids, "A"), 6);
  EXPECT_EQ(aggregate_demand({}, "A"), 0);
  const std::vector<Bundle> zeros{Bundle{}, Bundle{}, Bundle{}};
  EXPECT_EQ(aggregate_demand(zeros, "A"), 0);
}

TEST(PostedPrice, Examples) {
  const Money s = Money::dollars(100);
  const Money c = Money::dollars(110);
  EXPECT_EQ(posted_price(s, c, 7, 5), c);
  EXPECT_EQ(posted_price(s, c, 5, 5), s);
  EXPECT_EQ(posted_price(s, c, 0, 5), s);
}

TEST(Payment, Examples) {
  EXPECT_EQ(payment({{"A", 2}}, {{"A", Money::dollars(50)}}), Money::dollars(100));
  EXPECT_EQ(payment({}, {{"A", Money::dollars(50)}}), Money{});
  EXPECT_EQ(payment({{"A", 2}, {"B", 3}}, {{"A", Money::dollars(10)}, {"B", Money::dollars(20)}}), Money::dollars(80));
}

TEST(EligibilityCost, Examples) {
  const ProductCatalog cat({product("A", 9, 2, 1), product("B", 9, 3, 1), product("Z", 9, 0, 1)});
  EXPECT_EQ(eligibility_cost({{"A", 2}, {"B", 1}}, cat), 7);
  EXPECT_EQ(eligibility_cost({}, cat), 0);
  EXPECT_EQ(eligibility_cost({{"Z", 5}}, cat), 0);
}

TEST(Catalog, RejectsDuplicatesAndBadFields) {
  EXPECT_THROW(ProductCatalog({product("A", 1, 1, 1), product("A", 2, 1, 1)}), ValidationError);
  EXPECT_THROW(ProductCatalog({product("A", 0, 1, 1)}), ValidationError);
  EXPECT_THROW(ProductCatalog({product("A", 1, -1, 1)}), ValidationError);
}

TEST(Catalog, LoadsCsvAndReportsLine) {
  const auto ok = fixtures::temp_file("cat_ok.csv",
                                      "product_id,area_id,area_class,supply,eligibility_points,opening_price_cad\n"
                                      "P1,A1,rural,3,2,100.50\n"
                                      "\"P,2\",A2,metro,1,0,0\n");
  const auto cat = load_catalog(ok);
  ASSERT_EQ(cat.size(), 2u);
  EXPECT_EQ(cat.at("P1").opening_price, Money::cents(10050));
  EXPECT_EQ(cat.at("P,2").area_class, AreaClass::kMetro);

  const auto bad = fixtures::temp_file("cat_bad.csv",
                                       "product_id,area_id,area_class,supply,eligibility_points,opening_price_cad\n"
                                       "P1,A1,rural,3,2,100\n"
                                       "P2,A2,suburb,1,0,0\n");
  try {
    load_catalog(bad);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Bundle, ZeroRemovesAndNegativeThrows) {
  Bundle b{{"A", 2}};
  b.set("A", 0);
  EXPECT_TRUE(b.empty());
  EXPECT_THROW(b.set("A", -1), ValidationError);
}

TEST(Increments, PerRoundOverridesPerProduct) {
  IncrementSchedule s(0.1);
  s.set_product("A", 0.15);
  s.set_round("A", 3, 0.2);
  EXPECT_DOUBLE_EQ(s.delta("B", 1), 0.1);
  EXPECT_DOUBLE_EQ(s.delta("A", 1), 0.15);
  EXPECT_DOUBLE_EQ(s.delta("A", 3), 0.2);
  EXPECT_THROW(s.set_product("A", 0.3), ValidationError);
}

TEST(Csv, EscapeRoundTrip) {
  const std::string field = "a,\"b\"";
  const auto t = csv::Table::parse("x,y\n" + csv::escape(field) + ",1\n");
  EXPECT_EQ(t.field(t.rows().at(0), 0), field);
}
