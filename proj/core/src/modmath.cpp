#include "wolvan/modmath.hpp"

#include <stdexcept>
#include <string>

#include "wolvan/error.hpp"

namespace wolvan {

Modulus::Modulus(std::uint64_t m) : m_(m) {
  if (m < 3 || m >= kLimit || (m & 1) == 0)
    throw std::invalid_argument("modulus must be odd and in [3, 2^63): " + std::to_string(m));
}

Residue Modulus::reduce_signed(std::int64_t x) const noexcept {
  if (x >= 0) return static_cast<std::uint64_t>(x) % m_;
  // -(x + 1) avoids overflow at INT64_MIN
  std::uint64_t mag = static_cast<std::uint64_t>(-(x + 1)) + 1;
  return neg(mag % m_);
}

Residue mulmod(Residue a, Residue b, const Modulus& m) noexcept {
  // Moduli below 2^32 keep the product in one native word; both branches are exact.
  if (m.fits32()) return (a * b) % m.value();
  unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
  return static_cast<Residue>(t % m.value());
}

Residue powmod(Residue b, std::uint64_t e, const Modulus& m) noexcept {
  Residue result = 1 % m.value();
  Residue base = m.reduce(b);
  while (e != 0) {
    if (e & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return result;
}

Residue invmod(Residue a, const Modulus& m) {
  // Signed extended Euclid; all quantities stay within (-m, m).
  std::int64_t r0 = static_cast<std::int64_t>(m.value());
  std::int64_t r1 = static_cast<std::int64_t>(m.reduce(a));
  std::int64_t s0 = 0;
  std::int64_t s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    std::int64_t s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1)
    throw NotInvertible(std::to_string(a) + " is not invertible modulo " + std::to_string(m.value()));
  return m.reduce_signed(s0);
}

SymmetricResidue symres(Residue r, const Modulus& m) noexcept {
  std::uint64_t half = (m.value() - 1) / 2;
  if (r <= half) return static_cast<SymmetricResidue>(r);
  return -static_cast<SymmetricResidue>(m.value() - r);
}

Residue from_symmetric(SymmetricResidue v, const Modulus& m) noexcept { return m.reduce_signed(v); }

}  // namespace wolvan
