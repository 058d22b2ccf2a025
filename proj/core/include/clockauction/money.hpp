#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace clockauction {

/// Monetary amount held as integer cents.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money cents(std::int64_t c) {
    Money m;
    m.cents_ = c;
    return m;
  }
  static constexpr Money dollars(std::int64_t d) { return cents(d * 100); }

  /// Parses "1234", "-12", "1234.5" or "1234.56". More than two decimals is an error.
  static Money parse(std::string_view text);

  /// Rounds a fractional cent amount half-up (toward +inf on exact halves).
  static Money round_cents(double cents);

  constexpr std::int64_t in_cents() const { return cents_; }
  double to_dollars() const { return static_cast<double>(cents_) / 100.0; }

  /// "1234.56"; negative values carry a leading '-'.
  std::string to_string() const;

  constexpr Money& operator+=(Money o) {
    cents_ += o.cents_;
    return *this;
  }
  constexpr Money& operator-=(Money o) {
    cents_ -= o.cents_;
    return *this;
  }
  friend constexpr Money operator+(Money a, Money b) { return a += b; }
  friend constexpr Money operator-(Money a, Money b) { return a -= b; }
  friend constexpr Money operator-(Money a) { return cents(-a.cents_); }
  friend constexpr Money operator*(Money a, std::int64_t k) { return cents(a.cents_ * k); }
  friend constexpr Money operator*(std::int64_t k, Money a) { return cents(a.cents_ * k); }

  friend constexpr auto operator<=>(Money, Money) = default;
  friend constexpr bool operator==(Money, Money) = default;

 private:
  std::int64_t cents_ = 0;
};

/// Rounds a cent amount half-up to a whole dollar.
std::int64_t round_half_up_to_dollar_cents(std::int64_t cents);

}  // namespace clockauction
