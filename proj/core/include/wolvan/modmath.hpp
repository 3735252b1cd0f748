#pragma once

#include <cstdint>

namespace wolvan {

/// A residue reduced modulo some Modulus: 0 <= r < m.
using Residue = std::uint64_t;

/// Representative of a residue in (-m/2, m/2].
using SymmetricResidue = std::int64_t;

/// Odd modulus 3 <= m < 2^63.
///
/// The upper bound keeps every sum of two residues below 2^64, so the
/// additive helpers never need a carry check.
class Modulus {
 public:
  static constexpr std::uint64_t kLimit = std::uint64_t{1} << 63;

  /// Throws std::invalid_argument when m is even or outside [3, 2^63).
  explicit Modulus(std::uint64_t m);

  std::uint64_t value() const noexcept { return m_; }
  bool fits32() const noexcept { return m_ < (std::uint64_t{1} << 32); }

  Residue reduce(std::uint64_t x) const noexcept { return x % m_; }
  Residue reduce_signed(std::int64_t x) const noexcept;

  Residue add(Residue a, Residue b) const noexcept {
    std::uint64_t s = a + b;
    return s >= m_ ? s - m_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + (m_ - b); }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : m_ - a; }

  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  std::uint64_t m_;
};

/// (a * b) mod m, exact for all reduced a, b.
Residue mulmod(Residue a, Residue b, const Modulus& m) noexcept;

/// b^e mod m by square-and-multiply.
Residue powmod(Residue b, std::uint64_t e, const Modulus& m) noexcept;

/// Inverse of a modulo m by the extended Euclidean algorithm, valid for
/// composite m. Throws NotInvertible when gcd(a, m) != 1.
Residue invmod(Residue a, const Modulus& m);

/// Maps r to the representative in [-(m-1)/2, (m-1)/2].
SymmetricResidue symres(Residue r, const Modulus& m) noexcept;

/// Inverse of symres: the reduced residue congruent to v.
Residue from_symmetric(SymmetricResidue v, const Modulus& m) noexcept;

}  // namespace wolvan
