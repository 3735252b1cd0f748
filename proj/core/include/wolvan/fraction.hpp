#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace wolvan {

/// Exact rational number num/den in lowest terms with den > 0.
///
/// Intervals only ever need values in [0, 1], but costs, ratio bounds and
/// intermediate arithmetic use the general form. Results that do not fit
/// in 64-bit numerator/denominator throw std::overflow_error.
class Fraction {
 public:
  constexpr Fraction() = default;
  Fraction(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }

  /// Parses "a/b" or "a" (optional leading '-'). Throws ParseError.
  static Fraction parse(std::string_view text);
  std::string str() const;
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Fraction operator+(const Fraction& a, const Fraction& b);
  friend Fraction operator-(const Fraction& a, const Fraction& b);
  friend Fraction operator*(const Fraction& a, const Fraction& b);
  friend Fraction operator/(const Fraction& a, const Fraction& b);
  Fraction operator-() const { return Fraction(-num_, den_); }
  Fraction& operator+=(const Fraction& o) { return *this = *this + o; }
  Fraction& operator-=(const Fraction& o) { return *this = *this - o; }

  friend bool operator==(const Fraction&, const Fraction&) = default;
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) noexcept {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
  }

 private:
  static Fraction from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace wolvan
