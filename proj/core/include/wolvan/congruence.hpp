#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "wolvan/fraction.hpp"

namespace wolvan {

/// Signed combination sum_i count_i * base_i^t for a symbolic exponent t.
///
/// Stored as (base, count) pairs sorted by base with count != 0, so equal
/// coefficients have equal representations. A power such as 2^{3t} is the
/// single base 8.
class PowerCoefficient {
 public:
  using Entry = std::pair<std::uint64_t, std::int64_t>;

  PowerCoefficient() = default;
  /// The coefficient sign * base^t.
  static PowerCoefficient monomial(std::uint64_t base, std::int64_t sign = 1);

  bool is_zero() const noexcept { return entries_.empty(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  PowerCoefficient operator-() const;
  PowerCoefficient& operator+=(const PowerCoefficient& o);
  PowerCoefficient& operator-=(const PowerCoefficient& o);
  friend PowerCoefficient operator+(PowerCoefficient a, const PowerCoefficient& b) { return a += b; }
  friend PowerCoefficient operator-(PowerCoefficient a, const PowerCoefficient& b) { return a -= b; }

  /// Multiplies every base by d (the d^t factor of a subdivision).
  /// Throws std::overflow_error when a base leaves the 64-bit range.
  PowerCoefficient scaled(std::uint64_t d) const;

  /// "1+2^t-10^t" style rendering; "0" for the zero coefficient.
  std::string str() const;

  friend bool operator==(const PowerCoefficient&, const PowerCoefficient&) = default;
  friend auto operator<=>(const PowerCoefficient& a, const PowerCoefficient& b) { return a.entries_ <=> b.entries_; }

 private:
  std::vector<Entry> entries_;
};

/// Open real interval (lo, hi) with 0 <= lo < hi <= 1.
struct Interval {
  Fraction lo;
  Fraction hi;

  Fraction length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// coeff * S_t(lo, hi), or coeff * S~_t(lo, hi) when alternating.
struct SumTerm {
  PowerCoefficient coeff;
  Interval interval;
  bool alternating = false;

  friend bool operator==(const SumTerm&, const SumTerm&) = default;
};

/// Order used for canonical term lists: by interval, then plain before
/// alternating, then coefficient.
std::strong_ordering canonical_order(const SumTerm& a, const SumTerm& b);

/// C_k(a,b,c) * B_{2k}.
struct BernoulliCkabc {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t c = 0;
  friend bool operator==(const BernoulliCkabc&, const BernoulliCkabc&) = default;
};

/// (-1)^k 4^{2k-1} * E_{p-1-2k}.
struct EulerGlaisher {
  friend bool operator==(const EulerGlaisher&, const EulerGlaisher&) = default;
};

/// (-1)^k 4^{k-1} (9^k + 1) * E_{p-1-2k}.
struct EulerMcIntosh {
  friend bool operator==(const EulerMcIntosh&, const EulerMcIntosh&) = default;
};

using LeftFactor = std::variant<BernoulliCkabc, EulerGlaisher, EulerMcIntosh>;

enum class Target { bernoulli, euler };
/// Parity of the symbolic exponent t: odd for Bernoulli, even for Euler.
enum class Parity { odd, even };

Target target_of(const LeftFactor& left) noexcept;
Parity parity_of(Target target) noexcept;

/// Conditions on p beyond primality.
struct Validity {
  std::uint64_t min_prime = 5;
  /// p must divide none of these integers.
  std::vector<std::uint64_t> exclusions;
  friend bool operator==(const Validity&, const Validity&) = default;
};

struct SymbolicCongruence {
  LeftFactor left;
  Parity parity = Parity::odd;
  Validity validity;
  std::vector<SumTerm> terms;

  Target target() const noexcept { return target_of(left); }
  friend bool operator==(const SymbolicCongruence&, const SymbolicCongruence&) = default;
};

/// Sum of interval lengths.
Fraction cost(const SymbolicCongruence& c);

/// Splits term `term` at `point`. Throws PointOutOfRange unless lo < point < hi,
/// PathNotFound for a bad index.
SymbolicCongruence separate(const SymbolicCongruence& c, std::size_t term, const Fraction& point);

/// Maps term `term` from (x, y) to (1-y, 1-x). A plain term picks up (-1)^t,
/// an alternating one -(-1)^t (s -> p - s flips the weight since p is odd).
SymbolicCongruence reflect(const SymbolicCongruence& c, std::size_t term);

/// Replaces term `term` by its d children ((x+i)/d, (y+i)/d), i = 0..d-1,
/// each base multiplied by d. Alternating children carry (-1)^i and stay
/// alternating only when d is odd.
SymbolicCongruence subdivide(const SymbolicCongruence& c, std::size_t term, std::uint64_t d);

/// Folds every interval into [0, 1/2], sums coefficients over each maximal
/// piece, drops zero pieces, merges equal neighbours and sorts.
SymbolicCongruence canonicalize(const SymbolicCongruence& c);
std::vector<SumTerm> canonicalize_terms(std::vector<SumTerm> terms, Parity parity);

/// Largest interval-endpoint denominator.
std::int64_t max_denominator(const SymbolicCongruence& c);

/// 128-bit digest of the term list, used as a deduplication key.
struct TermsDigest {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  friend bool operator==(const TermsDigest&, const TermsDigest&) = default;
  friend auto operator<=>(const TermsDigest&, const TermsDigest&) = default;
};
TermsDigest digest(const std::vector<SumTerm>& terms);

/// Compact term notation, e.g. "(1+2)S(1/6,1/5) - (2)S(3/10,1/3) + (1)~S(0,1/6)".
/// Each base b inside the parentheses stands for b^t; "~S" is the alternating sum.
std::string format_terms(const std::vector<SumTerm>& terms);
/// Inverse of format_terms. Throws ParseError.
std::vector<SumTerm> parse_terms(std::string_view text);

/// Human-readable left side, e.g. "C_k(2,5,6) B_2k".
std::string describe(const LeftFactor& left);

}  // namespace wolvan
