#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wolvan/congruence.hpp"
#include "wolvan/derivation.hpp"
#include "wolvan/fraction.hpp"

namespace wolvan {

/// A subdivision of term `term` (canonical index) by d.
struct Move {
  std::uint32_t term = 0;
  std::uint32_t d = 0;
  friend bool operator==(const Move&, const Move&) = default;
  friend auto operator<=>(const Move&, const Move&) = default;
};

struct LedgerEntry {
  Fraction cost;
  SymbolicCongruence congruence;
  Derivation derivation;
};

/// Best congruence found for each term count m.
///
/// Entries are ranked by cost, then canonical terms, then the number of
/// stages, then the derivation text, so the result does not depend on the
/// order in which candidates arrive.
class SearchLedger {
 public:
  /// Offers a congruence reached from `base` by `moves`; keeps it if it ranks
  /// first for its term count.
  void offer(const SymbolicCongruence& c, const Derivation& base, const std::vector<Move>& moves);
  void offer(const LedgerEntry& e);

  /// Keeps the better of the two entries for every m.
  void merge(const SearchLedger& other);

  const std::map<std::size_t, LedgerEntry>& best() const noexcept { return best_; }

  bool partial = false;
  std::uint64_t nodes = 0;

 private:
  std::map<std::size_t, LedgerEntry> best_;
};

/// One line per m: `m cost derivation`.
std::string format_ledger(const SearchLedger& ledger);
/// Reads a ledger file, replaying every derivation. Throws ParseError.
SearchLedger parse_ledger(std::string_view text);

struct ExhaustiveParams {
  /// Any catalog id; derived entries warm-start the search.
  std::string seed_id;
  /// Step i subdivides by 2 <= d <= bounds[i].
  std::vector<std::uint64_t> bounds;
  std::uint64_t budget = 10'000'000;
  unsigned workers = 1;
  /// Drops canonical forms already reached with at least as much room left.
  bool prune = true;
};

/// Breadth-first enumeration of every congruence reachable by the bounded
/// subdivision sequence, canonicalizing after each step. Sets `partial` when
/// the node budget stops the search early.
SearchLedger exhaustive_search(const ExhaustiveParams& params);

struct GreedyParams {
  std::string seed_id;
  std::uint64_t max_d = 8;
  std::uint64_t lookahead = 1;
  std::uint64_t rounds = 100;
  unsigned workers = 1;
};

struct GreedyResult {
  SymbolicCongruence congruence;
  Derivation derivation;
  /// Cost before the first round and after each round.
  std::vector<Fraction> history;
};

/// Each round picks, among all congruences reachable with `lookahead`
/// subdivisions of 2 <= d <= max_d, one of least cost; ties go to fewer
/// terms, then the least canonical form.
GreedyResult greedy_search(const GreedyParams& params);

/// Upper bound on the ratio of distinct to total leaf nodes in a
/// transformation graph from tw(b) reaching cost eps with at most N leaves
/// per tree. Throws std::invalid_argument outside b >= 2, N >= 1, 0 < eps <= 1.
Fraction ratio_bound(std::uint64_t b, std::uint64_t n, const Fraction& eps);

/// Parses "D=8,lambda=1,rounds=100" (any subset, any order) onto defaults.
GreedyParams parse_greedy_spec(std::string_view text, GreedyParams defaults = {});

}  // namespace wolvan
