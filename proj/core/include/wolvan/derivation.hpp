#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wolvan/congruence.hpp"
#include "wolvan/fraction.hpp"

namespace wolvan {

/// One node of a transformation tree.
///
/// identity ends a branch; reflect has one child; separate (at the relative
/// position f, i.e. at x + f(y - x)) has two; subdivide has d.
struct Step {
  enum class Kind { identity, reflect, separate, subdivide };

  Kind kind = Kind::identity;
  Fraction f;
  std::uint64_t d = 0;

  static Step identity() { return {}; }
  static Step reflect() { return {Kind::reflect, {}, 0}; }
  static Step separate(Fraction f) { return {Kind::separate, f, 0}; }
  static Step subdivide(std::uint64_t d) { return {Kind::subdivide, {}, d}; }

  std::size_t arity() const noexcept;
  friend bool operator==(const Step&, const Step&) = default;
};

/// A tree in depth-first pre-order.
using Tree = std::vector<Step>;

/// Trees applied to the terms of the current congruence, first tree to the
/// first term. Terms without a tree are left alone. The result is
/// canonicalized before the next stage runs.
using Stage = std::vector<Tree>;

/// A seed plus the stages that regenerate a congruence from it.
///
/// Text form: `seed_id:script`, where script is stages separated by ';' and
/// each stage is a sequence of trees, e.g.
/// `vandiver:(i)(t2ii);(i)(i)(t2ii)`. Step letters: i, r, s<num/den>, t<d>.
struct Derivation {
  std::string seed_id;
  std::vector<Stage> stages;

  bool empty() const noexcept { return stages.empty(); }
  friend bool operator==(const Derivation&, const Derivation&) = default;
};

/// Parses a script (no seed prefix). Throws ParseError with the offending
/// position.
std::vector<Stage> parse_script(std::string_view text);
std::string serialize_script(const std::vector<Stage>& stages);

/// Parses `seed_id:script` or a bare seed id.
Derivation parse_derivation(std::string_view text);
std::string serialize(const Derivation& d);

/// Applies one stage to c and canonicalizes. Throws PathNotFound when the
/// stage has more trees than c has terms, MalformedScript on an invalid
/// step (separation outside (0,1), subdivision by 0, incomplete tree).
SymbolicCongruence apply_stage(const SymbolicCongruence& c, const Stage& stage);

/// Replays all stages starting from the catalog entry named by seed_id.
SymbolicCongruence replay(const Derivation& d);

/// Stage that subdivides term `term` by d and leaves the others alone.
Stage subdivision_stage(std::size_t term, std::uint64_t d);

/// Appends the stages of `more` to `base` (seed of `base` is kept).
Derivation extend(Derivation base, const std::vector<Stage>& more);

}  // namespace wolvan
