#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "wolvan/congruence.hpp"
#include "wolvan/modmath.hpp"

namespace wolvan::oracle {

/// Largest indices the exact tables are built for.
inline constexpr std::size_t kMaxBernoulli = 1200;
inline constexpr std::size_t kMaxEuler = 800;

/// B_n with B_1 = -1/2. Throws std::out_of_range above kMaxBernoulli.
mpq_class bernoulli_exact(std::size_t n);

/// E_n in the secant convention (E_2 = -1). Throws std::out_of_range above
/// kMaxEuler.
mpz_class euler_exact(std::size_t n);

/// x mod p for a rational whose denominator is prime to p.
/// Throws NotInvertible otherwise.
Residue reduce(const mpq_class& x, std::uint64_t p);
Residue reduce(const mpz_class& x, std::uint64_t p);

/// Sum of s^l (times (-1)^s when alternating) over lo*p < s < hi*p, one
/// powmod per term. Negative l uses modular inverses.
Residue naive_power_sum(std::uint64_t p, std::int64_t l, const Interval& iv, bool alternating = false);

/// binom(h p - 1, p - 1) mod p^4.
mpz_class wolstenholme_binomial_test(std::uint64_t p, std::uint64_t h);

/// 1 - (h(h-1)/3) p^3 B_{p-3} mod p^4, the value the binomial takes by
/// Glaisher's relation.
mpz_class glaisher_prediction(std::uint64_t p, std::uint64_t h);

}  // namespace wolvan::oracle
