#pragma once

#include <cstdint>

#include "wolvan/modmath.hpp"

namespace wolvan {

/// Constant and linear coefficients mod p of prod(z + s^e) over a set of s.
/// The power sum of s^-e over that set is c1 / c0.
struct PairAccumulator {
  Residue c0 = 1;
  Residue c1 = 0;

  friend bool operator==(const PairAccumulator&, const PairAccumulator&) = default;
};

/// Selects the arithmetic used by power_sum_pair. All choices return
/// identical pairs; the non-automatic ones exist for cross-checking.
enum class KernelPath {
  automatic,
  reference,   ///< one mulmod-based update per s, s^e recomputed each step
  montgomery,  ///< lane-interleaved 64-bit Montgomery with finite differences
  vector32,    ///< AVX-512, moduli below 2^32 only
};

bool vector32_available() noexcept;

/// Pair for s = first, first + stride, ..., <= last. Empty when first > last.
/// Requires 1 <= first, last < p and stride >= 1.
PairAccumulator power_sum_pair(const Modulus& p, unsigned e, std::uint64_t first, std::uint64_t last,
                               std::uint64_t stride = 1, KernelPath path = KernelPath::automatic);

/// (c0 c0', c0 c1' + c1 c0'): the product of two linear polynomials mod z^2.
PairAccumulator combine(const PairAccumulator& a, const PairAccumulator& b, const Modulus& p) noexcept;

/// c1 / c0 mod p.
Residue pair_value(const PairAccumulator& a, const Modulus& p);

}  // namespace wolvan
