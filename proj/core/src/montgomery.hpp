#pragma once

#include <cstdint>

#include "wolvan/modmath.hpp"

namespace wolvan::detail {

// Montgomery arithmetic with R = 2^64 for odd moduli below 2^63.
class Montgomery64 {
 public:
  explicit Montgomery64(std::uint64_t m) : m_(m), inv_(inverse_pow2(m)) {
    // R^2 mod m, built from R mod m by doubling.
    std::uint64_t r = (~std::uint64_t{0} % m + 1) % m;
    unsigned __int128 r2 = static_cast<unsigned __int128>(r) * r;
    r2_ = static_cast<std::uint64_t>(r2 % m);
  }

  std::uint64_t modulus() const noexcept { return m_; }

  std::uint64_t redc(unsigned __int128 t) const noexcept {
    std::uint64_t q = static_cast<std::uint64_t>(t) * inv_;
    std::uint64_t th = static_cast<std::uint64_t>(t >> 64);
    std::uint64_t uh = static_cast<std::uint64_t>((static_cast<unsigned __int128>(q) * m_) >> 64);
    return th >= uh ? th - uh : th - uh + m_;
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return redc(static_cast<unsigned __int128>(a) * b);
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    std::uint64_t s = a + b;
    return s >= m_ ? s - m_ : s;
  }
  std::uint64_t to(std::uint64_t x) const noexcept { return mul(x % m_, r2_); }
  std::uint64_t from(std::uint64_t x) const noexcept { return redc(x); }

  // m^-1 mod 2^64 by Newton iteration; each step doubles the correct bits.
  static std::uint64_t inverse_pow2(std::uint64_t m) noexcept {
    std::uint64_t x = m;  // correct to 3 bits for odd m
    for (int i = 0; i < 5; ++i) x *= 2 - m * x;
    return x;
  }

 private:
  std::uint64_t m_;
  std::uint64_t inv_;
  std::uint64_t r2_;
};

}  // namespace wolvan::detail
