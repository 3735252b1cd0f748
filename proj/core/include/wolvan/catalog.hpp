#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wolvan/congruence.hpp"
#include "wolvan/derivation.hpp"

namespace wolvan {

struct CatalogEntry {
  std::string id;
  SymbolicCongruence congruence;
  /// How the entry is regenerated; seeds derive from themselves with no stages.
  Derivation derivation;
  bool seed = false;
};

/// Seeds: stafford_vandiver, vandiver, tw(2)..tw(13), voronoi_one_term,
/// voronoi_two_term, glaisher_euler, mcintosh_euler, mcintosh_euler_d2.
const std::vector<CatalogEntry>& seed_catalog();

/// Seeds followed by the derived congruences bern2, bern6, bern9, bern16,
/// bern22, bern30, euler3, euler5, euler9, euler16, euler24, euler33.
const std::vector<CatalogEntry>& catalog();

/// Looks up an id; "tw5" is accepted for "tw(5)". Throws UnknownSeed.
const CatalogEntry& catalog_entry(std::string_view id);

/// C_k(2,b,b+1) B_2k == sum_{m=1}^{floor(b/2)} S(m/(b+1), m/b). Throws
/// UnknownSeed unless 2 <= b <= 13.
SymbolicCongruence tanner_wagstaff(std::uint64_t b);

/// Congruences tried in order when the preferred one is unusable at some p.
/// The last entry is valid for every prime p >= 5.
const std::vector<std::string>& fallback_chain(Target target);

}  // namespace wolvan
