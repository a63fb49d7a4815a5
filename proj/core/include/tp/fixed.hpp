#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tp {

namespace detail {

template <typename Rep>
constexpr Rep pow10(int exp) {
  Rep r = 1;
  for (int i = 0; i < exp; ++i) r *= 10;
  return r;
}

}  // namespace detail

// Exact decimal fixed-point number. The raw integer counts units of
// 10^-Decimals. Rendering always prints every fractional digit so that the
// textual form of a value is unique.
template <typename Rep, int Decimals>
class Fixed {
 public:
  static constexpr int kDecimals = Decimals;
  static constexpr Rep kScale = detail::pow10<Rep>(Decimals);

  constexpr Fixed() = default;

  static constexpr Fixed from_raw(Rep raw) {
    Fixed f;
    f.raw_ = raw;
    return f;
  }
  static constexpr Fixed from_int(std::int64_t whole) {
    return from_raw(static_cast<Rep>(whole) * kScale);
  }

  // Accepts `[-]digits[.digits]`; at most Decimals fractional digits.
  static std::optional<Fixed> parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
      negative = text.front() == '-';
      text.remove_prefix(1);
    }
    if (text.empty()) return std::nullopt;
    Rep whole = 0;
    Rep frac = 0;
    int frac_digits = 0;
    bool seen_dot = false;
    bool any_digit = false;
    constexpr Rep kMax = std::numeric_limits<Rep>::max();
    for (char c : text) {
      if (c == '.') {
        if (seen_dot) return std::nullopt;
        seen_dot = true;
        continue;
      }
      if (c < '0' || c > '9') return std::nullopt;
      any_digit = true;
      const int d = c - '0';
      if (seen_dot) {
        if (frac_digits == Decimals) return std::nullopt;
        frac = frac * 10 + d;
        ++frac_digits;
      } else {
        if (whole > (kMax / kScale - d) / 10) return std::nullopt;
        whole = whole * 10 + d;
      }
    }
    if (!any_digit) return std::nullopt;
    for (int i = frac_digits; i < Decimals; ++i) frac *= 10;
    Rep raw = whole * kScale + frac;
    return from_raw(negative ? -raw : raw);
  }

  static Fixed parse_or_throw(std::string_view text) {
    auto v = parse(text);
    if (!v) throw std::invalid_argument("malformed decimal: " + std::string(text));
    return *v;
  }

  constexpr Rep raw() const { return raw_; }
  constexpr bool is_zero() const { return raw_ == 0; }
  constexpr bool is_negative() const { return raw_ < 0; }

  double to_double() const {
    const Rep whole = raw_ / kScale;
    const Rep frac = raw_ % kScale;
    return static_cast<double>(whole) +
           static_cast<double>(frac) / static_cast<double>(kScale);
  }

  std::string to_string() const {
    Rep v = raw_;
    const bool negative = v < 0;
    std::string digits;
    // Work on the magnitude digit by digit; avoids overflow on the minimum.
    do {
      Rep d = v % 10;
      if (d < 0) d = -d;
      digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(d)));
      v /= 10;
    } while (v != 0);
    while (static_cast<int>(digits.size()) <= Decimals) digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - Decimals, '.');
    if (negative) digits.insert(digits.begin(), '-');
    return digits;
  }

  constexpr Fixed operator+(Fixed o) const { return from_raw(raw_ + o.raw_); }
  constexpr Fixed operator-(Fixed o) const { return from_raw(raw_ - o.raw_); }
  constexpr Fixed operator-() const { return from_raw(-raw_); }
  constexpr Fixed& operator+=(Fixed o) {
    raw_ += o.raw_;
    return *this;
  }
  constexpr Fixed& operator-=(Fixed o) {
    raw_ -= o.raw_;
    return *this;
  }
  constexpr Fixed operator*(std::int64_t k) const { return from_raw(raw_ * static_cast<Rep>(k)); }
  // Truncating division by a positive integer.
  constexpr Fixed div_floor(std::int64_t k) const { return from_raw(raw_ / static_cast<Rep>(k)); }

  template <typename OtherRep, int OtherDecimals>
  constexpr Fixed scaled_by(Fixed<OtherRep, OtherDecimals> factor) const {
    return from_raw(raw_ * static_cast<Rep>(factor.raw()) /
                    static_cast<Rep>(Fixed<OtherRep, OtherDecimals>::kScale));
  }

  constexpr auto operator<=>(const Fixed&) const = default;

 private:
  Rep raw_ = 0;
};

// Value units: 18 fractional digits (wei granularity).
using Amount = Fixed<__int128, 18>;
// Score points, probabilities, ratios and weights: 9 fractional digits.
using Score = Fixed<std::int64_t, 9>;

inline Score score_from_double(double x) {
  return Score::from_raw(std::llround(x * static_cast<double>(Score::kScale)));
}

}  // namespace tp
