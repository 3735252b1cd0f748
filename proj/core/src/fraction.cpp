#include "wolvan/fraction.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "wolvan/error.hpp"

namespace wolvan {
namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Fraction::Fraction(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("fraction with zero denominator");
  *this = from_wide(num, den);
}

Fraction Fraction::from_wide(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr auto lo = std::numeric_limits<std::int64_t>::min();
  constexpr auto hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) throw std::overflow_error("fraction exceeds 64-bit range");
  Fraction f;
  f.num_ = static_cast<std::int64_t>(num);
  f.den_ = static_cast<std::int64_t>(den);
  return f;
}

Fraction operator+(const Fraction& a, const Fraction& b) {
  if (a.den_ == b.den_) return Fraction::from_wide(static_cast<__int128>(a.num_) + b.num_, a.den_);
  return Fraction::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Fraction operator-(const Fraction& a, const Fraction& b) { return a + (-b); }

Fraction operator*(const Fraction& a, const Fraction& b) {
  return Fraction::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Fraction operator/(const Fraction& a, const Fraction& b) {
  if (b.num_ == 0) throw std::domain_error("fraction division by zero");
  return Fraction::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

Fraction Fraction::parse(std::string_view text) {
  auto parse_int = [&](std::string_view part, std::size_t offset) {
    std::int64_t v = 0;
    const char* begin = part.data();
    const char* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (part.empty() || ec != std::errc() || ptr != end)
      throw ParseError("invalid integer '" + std::string(part) + "'", offset + static_cast<std::size_t>(ptr - begin));
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Fraction(parse_int(text, 0));
  std::int64_t num = parse_int(text.substr(0, slash), 0);
  std::int64_t den = parse_int(text.substr(slash + 1), slash + 1);
  if (den == 0) throw ParseError("zero denominator", slash + 1);
  return Fraction(num, den);
}

std::string Fraction::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace wolvan
