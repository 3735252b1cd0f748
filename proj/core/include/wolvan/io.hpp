#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "wolvan/congruence.hpp"

namespace wolvan {

/// Self-describing congruence file (JSON):
///
///   {"format": "wolvan-congruence", "version": 1, "id": "...",
///    "left": {"kind": "bernoulli", "a": "2", "b": "5", "c": "6"},
///    "parity": "odd", "validity": {"min_prime": "7", "exclusions": []},
///    "terms": [{"coeff": [[1, "2"], [-1, "5"]], "lo": "1/6", "hi": "1/5",
///               "alternating": false}]}
///
/// A coefficient is a multiset of [sign, base] pairs standing for
/// sum sign * base^t. Integers are decimal strings.
std::string congruence_to_json(const SymbolicCongruence& c, std::string_view id = {});
/// Throws ParseError on malformed text or an inconsistent congruence.
SymbolicCongruence congruence_from_json(std::string_view text);

/// A congruence named by a catalog id, a derivation (`seed:script`), or
/// `@path` to a file holding either a congruence file or a derivation.
struct NamedCongruence {
  std::string id;
  SymbolicCongruence congruence;
};
NamedCongruence resolve_congruence(std::string_view ref);

/// Whole file as a string. Throws std::runtime_error when unreadable.
std::string read_file(const std::filesystem::path& path);

}  // namespace wolvan
