#include "clockauction/money.hpp"

#include <cmath>
#include <cstdlib>

#include "clockauction/error.hpp"

namespace clockauction {

Money Money::parse(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> Money { throw ValidationError("invalid money amount '" + original + "'"); };
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) return fail();
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::int64_t whole = 0;
  std::int64_t frac = 0;
  int frac_digits = 0;
  bool seen_dot = false;
  bool any_digit = false;
  for (char ch : text) {
    if (ch == '.') {
      if (seen_dot) return fail();
      seen_dot = true;
      continue;
    }
    if (ch < '0' || ch > '9') return fail();
    any_digit = true;
    if (seen_dot) {
      if (++frac_digits > 2) return fail();
      frac = frac * 10 + (ch - '0');
    } else {
      if (whole > (INT64_MAX / 1000)) return fail();
      whole = whole * 10 + (ch - '0');
    }
  }
  if (!any_digit) return fail();
  if (frac_digits == 1) frac *= 10;
  const std::int64_t c = whole * 100 + frac;
  return cents(negative ? -c : c);
}

Money Money::round_cents(double c) {
  if (!std::isfinite(c)) throw ValidationError("non-finite money amount");
  return cents(static_cast<std::int64_t>(std::floor(c + 0.5)));
}

std::string Money::to_string() const {
  const bool negative = cents_ < 0;
  const std::uint64_t magnitude =
      negative ? static_cast<std::uint64_t>(-(cents_ + 1)) + 1 : static_cast<std::uint64_t>(cents_);
  std::string out = std::to_string(magnitude / 100);
  const auto rem = magnitude % 100;
  out += '.';
  out += static_cast<char>('0' + rem / 10);
  out += static_cast<char>('0' + rem % 10);
  return negative ? "-" + out : out;
}

std::int64_t round_half_up_to_dollar_cents(std::int64_t c) {
  // floor division keeps half-up behaviour for negative inputs too
  const std::int64_t shifted = c + 50;
  std::int64_t q = shifted / 100;
  if (shifted % 100 != 0 && shifted < 0) --q;
  return q * 100;
}

}  // namespace clockauction
