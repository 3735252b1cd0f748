#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wolvan/congruence.hpp"
#include "wolvan/modmath.hpp"
#include "wolvan/power_sum.hpp"

namespace wolvan {

/// One term of a congruence at a fixed prime: coeff * sum of s^-e over
/// first <= s <= last (with (-1)^s weights when alternating).
struct InstantiatedTerm {
  Residue coeff = 0;
  std::uint64_t first = 1;
  std::uint64_t last = 0;
  bool alternating = false;

  std::uint64_t count() const noexcept { return last >= first ? last - first + 1 : 0; }
};

struct InstantiatedCongruence {
  std::uint64_t p = 0;
  /// 3 for Bernoulli (t = p - 4), 2 for Euler (t = p - 3).
  unsigned exponent = 3;
  Target target = Target::bernoulli;
  Residue left_residue = 0;
  std::vector<InstantiatedTerm> terms;
};

/// Integer range strictly inside (lo*p, hi*p), computed exactly.
std::pair<std::uint64_t, std::uint64_t> integer_range(const Interval& iv, std::uint64_t p);

/// Left factor at k = (p-3)/2 (Bernoulli) or k = 1 (Euler), as a rational.
/// The one-argument form gives the Euler sign for p = 3 (mod 4), the class in
/// which the secant and hyperbolic-secant conventions agree at index p - 3.
Fraction left_factor_value(const LeftFactor& left);
Fraction left_factor_value(const LeftFactor& left, std::uint64_t p);

/// Instantiates c at the prime p (primality is the caller's contract).
/// Throws ValidityViolated when p is below the validity floor, not above
/// every endpoint denominator, divides an exclusion or a coefficient base;
/// LeftFactorVanishes when the left factor is 0 mod p.
InstantiatedCongruence instantiate(const SymbolicCongruence& c, std::uint64_t p);

/// The congruence at k = (p-3)/2 or k = 1 with denominators cleared:
/// left * X == sum coeffs[i] * S(term i), all integers with gcd 1.
struct IntegerRelation {
  std::int64_t left = 0;
  std::vector<std::int64_t> coeffs;
  friend bool operator==(const IntegerRelation&, const IntegerRelation&) = default;
};
IntegerRelation integer_form(const SymbolicCongruence& c);

enum class Chunking { contiguous, progression };

struct EvalOptions {
  unsigned workers = 1;
  Chunking chunking = Chunking::contiguous;
  KernelPath path = KernelPath::automatic;
};

/// Sum of s^-e (or (-1)^s s^-e) for first <= s <= last, mod p.
Residue eval_range(const Modulus& p, unsigned e, std::uint64_t first, std::uint64_t last, bool alternating,
                   const EvalOptions& options = {});

/// Sum over lo*p < s < hi*p. Requires p above the endpoint denominators.
Residue eval_sum(std::uint64_t p, unsigned e, const Interval& iv, bool alternating, const EvalOptions& options = {});

/// Right side of an instantiated congruence.
Residue evaluate_right_side(const InstantiatedCongruence& ic, const EvalOptions& options = {});

/// B_{p-3} mod p (resp. E_{p-3}) from a congruence of the matching target.
/// Throws std::invalid_argument on a target mismatch; instantiate's errors
/// propagate.
SymmetricResidue residue_B(std::uint64_t p, const SymbolicCongruence& c, const EvalOptions& options = {});
SymmetricResidue residue_E(std::uint64_t p, const SymbolicCongruence& c, const EvalOptions& options = {});
SymmetricResidue residue(std::uint64_t p, const SymbolicCongruence& c, const EvalOptions& options = {});

struct ResidueResult {
  SymmetricResidue value = 0;
  std::string congruence_id;
};

/// Tries the catalog entry `preferred`, then the fallback chain of its
/// target, and reports which one was used.
ResidueResult residue_with_fallback(std::uint64_t p, std::string_view preferred, const EvalOptions& options = {});

}  // namespace wolvan
