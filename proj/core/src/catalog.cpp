#include "wolvan/catalog.hpp"

#include <algorithm>
#include <stdexcept>

#include "wolvan/error.hpp"

namespace wolvan {
namespace {

SumTerm plain(std::int64_t lo_n, std::int64_t lo_d, std::int64_t hi_n, std::int64_t hi_d) {
  return SumTerm{PowerCoefficient::monomial(1), Interval{Fraction(lo_n, lo_d), Fraction(hi_n, hi_d)}, false};
}

SymbolicCongruence bernoulli(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t min_prime,
                             std::vector<SumTerm> terms) {
  SymbolicCongruence s;
  s.left = BernoulliCkabc{a, b, c};
  s.parity = Parity::odd;
  s.validity.min_prime = min_prime;
  s.terms = std::move(terms);
  return s;
}

CatalogEntry seed_entry(std::string id, SymbolicCongruence c) {
  CatalogEntry e;
  e.derivation.seed_id = id;
  e.id = std::move(id);
  e.congruence = std::move(c);
  e.seed = true;
  return e;
}

struct Move {
  Fraction lo;
  Fraction hi;
  std::uint64_t d;
};

// Each inner list is applied as one stage; a move names its target term by
// interval in the congruence produced by the previous stage.
using Recipe = std::vector<std::vector<Move>>;

Move mv(std::int64_t ln, std::int64_t ld, std::int64_t hn, std::int64_t hd, std::uint64_t d) {
  return Move{Fraction(ln, ld), Fraction(hn, hd), d};
}

const CatalogEntry& find_in(const std::vector<CatalogEntry>& entries, std::string_view id) {
  for (const auto& e : entries)
    if (e.id == id) return e;
  throw UnknownSeed("unknown congruence '" + std::string(id) + "'");
}

CatalogEntry derived_entry(std::string id, const CatalogEntry& base, const Recipe& recipe) {
  SymbolicCongruence c = base.congruence;
  std::vector<Stage> stages;
  for (const auto& group : recipe) {
    Stage stage;
    for (const auto& m : group) {
      auto it = std::find_if(c.terms.begin(), c.terms.end(), [&](const SumTerm& t) {
        return t.interval.lo == m.lo && t.interval.hi == m.hi;
      });
      if (it == c.terms.end())
        throw std::logic_error(id + ": recipe interval (" + m.lo.str() + ", " + m.hi.str() + ") not found");
      auto j = static_cast<std::size_t>(it - c.terms.begin());
      if (stage.size() <= j) stage.resize(j + 1, Tree{Step::identity()});
      Tree tree{Step::subdivide(m.d)};
      tree.insert(tree.end(), m.d, Step::identity());
      stage[j] = std::move(tree);
    }
    c = apply_stage(c, stage);
    stages.push_back(std::move(stage));
  }
  CatalogEntry e;
  e.id = std::move(id);
  e.congruence = std::move(c);
  e.derivation = extend(base.derivation, stages);
  return e;
}

CatalogEntry scripted_entry(std::string id, const CatalogEntry& base, std::string_view script) {
  CatalogEntry e;
  e.id = std::move(id);
  e.derivation = extend(base.derivation, parse_script(script));
  e.congruence = base.congruence;
  for (std::size_t i = base.derivation.stages.size(); i < e.derivation.stages.size(); ++i)
    e.congruence = apply_stage(e.congruence, e.derivation.stages[i]);
  return e;
}

std::vector<CatalogEntry> build_seeds() {
  std::vector<CatalogEntry> s;
  s.push_back(seed_entry("stafford_vandiver", bernoulli(3, 4, 6, 5, {plain(1, 6, 1, 4)})));
  s.push_back(seed_entry("vandiver", bernoulli(2, 5, 6, 7, {plain(1, 6, 1, 5), plain(1, 3, 2, 5)})));
  for (std::uint64_t b = 2; b <= 13; ++b)
    s.push_back(seed_entry("tw(" + std::to_string(b) + ")", tanner_wagstaff(b)));
  s.push_back(seed_entry("voronoi_one_term", bernoulli(2, 3, 4, 5, {plain(1, 4, 1, 3)})));
  s.push_back(seed_entry("voronoi_two_term", bernoulli(4, 5, 8, 7, {plain(1, 8, 1, 5), plain(3, 8, 2, 5)})));

  SymbolicCongruence glaisher;
  glaisher.left = EulerGlaisher{};
  glaisher.parity = Parity::even;
  glaisher.validity.min_prime = 5;
  glaisher.terms = {plain(0, 1, 1, 4)};
  s.push_back(seed_entry("glaisher_euler", glaisher));

  SymbolicCongruence mcintosh;
  mcintosh.left = EulerMcIntosh{};
  mcintosh.parity = Parity::even;
  mcintosh.validity.min_prime = 5;
  // 9^k + 1 at k = 1, the only index instantiated here.
  mcintosh.validity.exclusions = {10};
  SumTerm alt = plain(0, 1, 1, 6);
  alt.alternating = true;
  mcintosh.terms = {alt};
  s.push_back(seed_entry("mcintosh_euler", mcintosh));

  CatalogEntry d2 = scripted_entry("mcintosh_euler_d2", s.back(), "(t2ii)");
  d2.seed = true;
  s.push_back(std::move(d2));
  return s;
}

std::vector<CatalogEntry> build_all() {
  std::vector<CatalogEntry> all = seed_catalog();
  auto add = [&](std::string id, std::string_view base, const Recipe& recipe) {
    CatalogEntry e = derived_entry(std::move(id), find_in(all, base), recipe);
    all.push_back(std::move(e));
  };

  add("bern2", "vandiver", {{mv(1, 3, 2, 5, 2)}});
  add("bern6", "bern2",
      {{mv(3, 10, 1, 3, 2)}, {mv(1, 3, 7, 20, 2)}, {mv(13, 40, 1, 3, 2)}, {mv(1, 3, 27, 80, 2)}});
  // The nine-term form is recorded as its transformation graph on the seed.
  all.push_back(scripted_entry("bern9", find_in(all, "vandiver"),
                               "(t3s1/2iit2irirt2iri)(t2t3s1/2iit2irirt2irirs1/6it5iiiriri)"));
  add("bern16", "bern9",
      {{mv(7, 36, 1, 5, 3)},
       {mv(3, 10, 11, 36, 3)},
       {mv(47, 180, 4, 15, 2)},
       {mv(47, 360, 2, 15, 2)},
       {mv(83, 180, 7, 15, 2)}});
  add("bern22", "bern16",
      {{mv(1, 3, 61, 180, 3)},
       {mv(1, 9, 61, 540, 2)},
       {mv(4, 15, 29, 108, 2)},
       {mv(29, 108, 97, 360, 2)},
       {mv(479, 1080, 4, 9, 2)}});
  add("bern30", "bern22",
      {{mv(43, 108, 2, 5, 6)}, {mv(4, 15, 173, 648, 2)}, {mv(4, 9, 241, 540, 2)}, {mv(299, 1080, 5, 18, 2)}});

  add("euler3", "glaisher_euler", {{mv(0, 1, 1, 4, 2)}, {mv(0, 1, 1, 8, 2)}});
  add("euler5", "euler3", {{mv(0, 1, 1, 16, 2)}, {mv(0, 1, 1, 32, 2)}});
  add("euler9", "euler5", {{mv(0, 1, 1, 64, 2)}, {mv(3, 8, 7, 16, 3)}});
  add("euler16", "euler9",
      {{mv(3, 16, 5, 24, 3)},
       {mv(7, 16, 11, 24, 3)},
       {mv(0, 1, 1, 128, 2)},
       {mv(1, 8, 7, 48, 2)},
       {mv(11, 24, 15, 32, 2)}});
  add("euler24", "euler16",
      {{mv(0, 1, 1, 256, 2)},
       {mv(1, 16, 5, 72, 4)},
       {mv(41, 96, 7, 16, 3)},
       {mv(41, 288, 7, 48, 2)},
       {mv(15, 32, 137, 288, 2)}});

  Recipe e33;
  for (std::int64_t k = 2; k <= 8; ++k) e33.push_back({mv(0, 1, 1, (std::int64_t{1} << k) * 3, 2)});
  for (auto m : {mv(5, 12, 11, 24, 3), mv(11, 24, 17, 36, 3), mv(17, 36, 23, 48, 3), mv(23, 48, 35, 72, 3),
                 mv(5, 36, 11, 72, 2), mv(5, 72, 11, 144, 2), mv(61, 144, 31, 72, 3), mv(133, 288, 67, 144, 3),
                 mv(205, 432, 103, 216, 3)})
    e33.push_back({m});
  add("euler33", "mcintosh_euler_d2", e33);
  return all;
}

}  // namespace

SymbolicCongruence tanner_wagstaff(std::uint64_t b) {
  if (b < 2 || b > 13) throw UnknownSeed("tw(" + std::to_string(b) + ") outside 2 <= b <= 13");
  std::vector<SumTerm> terms;
  auto bb = static_cast<std::int64_t>(b);
  for (std::int64_t m = 1; m <= bb / 2; ++m) terms.push_back(plain(m, bb + 1, m, bb));
  return bernoulli(2, b, b + 1, std::max<std::uint64_t>(5, b + 2), std::move(terms));
}

const std::vector<CatalogEntry>& seed_catalog() {
  static const std::vector<CatalogEntry> seeds = build_seeds();
  return seeds;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> all = build_all();
  return all;
}

const CatalogEntry& catalog_entry(std::string_view id) {
  std::string key(id);
  if (key.size() > 2 && key.compare(0, 2, "tw") == 0 && key[2] != '(') key = "tw(" + key.substr(2) + ")";
  if (key.compare(0, 3, "tw(") == 0) {
    // Validate the range here so the error names the parameter.
    try {
      std::size_t used = 0;
      unsigned long b = std::stoul(key.substr(3), &used);
      if (key.substr(3 + used) != ")") throw UnknownSeed("malformed seed id '" + std::string(id) + "'");
      if (b < 2 || b > 13) throw UnknownSeed("tw(" + std::to_string(b) + ") outside 2 <= b <= 13");
    } catch (const std::logic_error&) {
      throw UnknownSeed("malformed seed id '" + std::string(id) + "'");
    }
  }
  // Seeds are enough for replaying seed-based derivations and avoid building
  // the derived entries while they are themselves being constructed.
  for (const auto& e : seed_catalog())
    if (e.id == key) return e;
  return find_in(catalog(), key);
}

const std::vector<std::string>& fallback_chain(Target target) {
  static const std::vector<std::string> bern{"bern2", "stafford_vandiver", "voronoi_one_term", "tw(2)"};
  static const std::vector<std::string> euler{"euler3", "glaisher_euler"};
  return target == Target::bernoulli ? bern : euler;
}

}  // namespace wolvan
