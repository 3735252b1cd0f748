#include <algorithm>
#include <optional>
#include <random>

#include "common/primes.hpp"
#include "common/printed_forms.hpp"
#include "doctest.h"
#include "wolvan/catalog.hpp"
#include "wolvan/derivation.hpp"
#include "wolvan/error.hpp"
#include "wolvan/eval.hpp"
#include "wolvan/oracle.hpp"

using namespace wolvan;

namespace {

Fraction F(std::int64_t n, std::int64_t d = 1) { return Fraction(n, d); }

Residue reference_pair_value(std::uint64_t p, unsigned e, std::uint64_t first, std::uint64_t last,
                             std::uint64_t stride) {
  Modulus m(p);
  Residue total = 0;
  for (std::uint64_t s = first; s <= last; s += stride) total = m.add(total, invmod(powmod(s % p, e, m), m));
  return total;
}

Interval random_interval(std::mt19937_64& rng) {
  std::int64_t d1 = 1 + static_cast<std::int64_t>(rng() % 60);
  std::int64_t d2 = 1 + static_cast<std::int64_t>(rng() % 60);
  Fraction a(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(d1 + 1)), d1);
  Fraction b(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(d2 + 1)), d2);
  if (b < a) std::swap(a, b);
  if (a == b) b = a + (F(1) - a) * F(1, 2);
  if (a == b) a = F(1, 2);
  return Interval{a, b};
}

// Stage that applies `tree` to term j and leaves the others alone.
Stage at(std::size_t j, Tree tree) {
  Stage s(j, Tree{Step::identity()});
  s.push_back(std::move(tree));
  return s;
}

Derivation random_derivation(std::mt19937_64& rng, const CatalogEntry& seed, std::size_t steps) {
  Derivation d{seed.id, {}};
  SymbolicCongruence c = seed.congruence;
  for (std::size_t k = 0; k < steps && !c.terms.empty(); ++k) {
    std::size_t j = rng() % c.terms.size();
    Tree tree;
    switch (rng() % 3) {
      case 0:
        tree = {Step::separate(F(1 + static_cast<std::int64_t>(rng() % 2), 3)), Step::identity(), Step::identity()};
        break;
      case 1:
        tree = {Step::reflect(), Step::identity()};
        break;
      default: {
        std::uint64_t dd = 1 + rng() % 6;
        tree = {Step::subdivide(dd)};
        tree.insert(tree.end(), dd, Step::identity());
      }
    }
    Stage s = at(j, tree);
    c = apply_stage(c, s);
    d.stages.push_back(std::move(s));
  }
  return d;
}

bool valid_at(const SymbolicCongruence& c, std::uint64_t p) {
  try {
    instantiate(c, p);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("pair accumulator") {
    Modulus p(10007);
    PairAccumulator empty = power_sum_pair(p, 3, 5, 4);
    CHECK(empty == PairAccumulator{1, 0});
    CHECK(pair_value(empty, p) == 0);
    PairAccumulator one = power_sum_pair(p, 3, 17, 17);
    CHECK(one == PairAccumulator{17 * 17 * 17 % 10007, 1});
    CHECK(pair_value(one, p) == invmod(17 * 17 * 17 % 10007, p));
    CHECK(pair_value(power_sum_pair(p, 3, 1, 10006), p) == 0);
    CHECK(pair_value(power_sum_pair(p, 2, 1, 10006), p) == 0);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
      std::uint64_t q = fixtures::random_prime(rng, 5, i % 2 ? 100000 : 5000000000ULL);
      Modulus m(q);
      unsigned e = 2 + static_cast<unsigned>(rng() % 2);
      std::uint64_t a = 1 + rng() % (q - 1);
      std::uint64_t b = std::min(q - 1, a + rng() % 3000);
      std::uint64_t stride = 1 + rng() % 4;
      PairAccumulator whole = power_sum_pair(m, e, a, b, stride);
      CHECK(pair_value(whole, m) == reference_pair_value(q, e, a, b, stride));
      CHECK(combine(whole, PairAccumulator{}, m) == whole);
      // Residue classes mod 3 of the progression, combined in either order.
      PairAccumulator parts[3];
      for (std::uint64_t r = 0; r < 3; ++r)
        parts[r] = power_sum_pair(m, e, a + r * stride, b, 3 * stride);
      CHECK(combine(combine(parts[0], parts[1], m), parts[2], m) == whole);
      CHECK(combine(parts[2], combine(parts[1], parts[0], m), m) == whole);
      for (KernelPath path : {KernelPath::reference, KernelPath::montgomery, KernelPath::vector32}) {
        if (path == KernelPath::vector32 && !(vector32_available() && m.fits32())) continue;
        CHECK(power_sum_pair(m, e, a, b, stride, path) == whole);
      }
    }
  }

  TEST_CASE("kernel paths agree at the modulus band edges") {
    // The vector kernel switches arithmetic at 2^30 and 2^31.
    std::mt19937_64 rng(14);
    for (std::uint64_t edge : {std::uint64_t{1} << 30, std::uint64_t{1} << 31, std::uint64_t{1} << 32}) {
      for (bool below : {true, false}) {
        if (!below && edge == (std::uint64_t{1} << 32)) continue;
        std::uint64_t q = below ? edge - 1 : edge + 1;
        while (!fixtures::is_prime(q)) q = below ? q - 2 : q + 2;
        Modulus m(q);
        for (unsigned e = 1; e <= 4; ++e) {
          for (int i = 0; i < 4; ++i) {
            std::uint64_t len = 300 + rng() % 2000;
            std::uint64_t stride = 1 + rng() % 5;
            // Starts near q put the largest residues into the difference tables.
            std::uint64_t a = i % 2 ? q - 1 - len * stride : 1 + rng() % (q / 2);
            std::uint64_t b = a + (len - 1) * stride;
            CAPTURE(q);
            CAPTURE(e);
            PairAccumulator ref = power_sum_pair(m, e, a, b, stride, KernelPath::reference);
            CHECK(power_sum_pair(m, e, a, b, stride, KernelPath::montgomery) == ref);
            if (vector32_available() && m.fits32()) CHECK(power_sum_pair(m, e, a, b, stride, KernelPath::vector32) == ref);
          }
        }
      }
    }
  }

  TEST_CASE("eval_sum agrees with the naive loop") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 200; ++i) {
      std::uint64_t p = fixtures::random_prime(rng, 67, 100000);
      Interval iv = random_interval(rng);
      bool alt = rng() % 2;
      unsigned e = 2 + static_cast<unsigned>(rng() % 2);
      CAPTURE(p);
      CHECK(eval_sum(p, e, iv, alt) == oracle::naive_power_sum(p, -static_cast<std::int64_t>(e), iv, alt));
    }
    CHECK(eval_sum(10007, 3, Interval{F(0), F(1)}, false) == 0);
    CHECK_THROWS_AS(eval_sum(59, 3, Interval{F(1, 60), F(1, 2)}, false), ValidityViolated);
  }

  TEST_CASE("evaluation does not depend on workers or chunking") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
      std::uint64_t p = fixtures::random_prime(rng, 1000000, 50000000);
      Interval iv = random_interval(rng);
      bool alt = rng() % 2;
      unsigned e = 2 + static_cast<unsigned>(rng() % 2);
      Residue base = eval_sum(p, e, iv, alt, EvalOptions{1});
      CHECK(eval_sum(p, e, iv, alt, EvalOptions{64}) == base);
      CHECK(eval_sum(p, e, iv, alt, EvalOptions{7, Chunking::progression}) == base);
      CHECK(eval_sum(p, e, iv, alt, EvalOptions{3, Chunking::contiguous, KernelPath::montgomery}) == base);
    }
  }

  TEST_CASE("coefficient powers") {
    for (std::uint64_t p : {11ULL, 10007ULL, 1025793739ULL}) {
      Modulus m(p);
      for (Residue d : {2ULL, 3ULL, 10ULL, 48ULL}) {
        CHECK(powmod(d, p - 4, m) == invmod(powmod(d, 3, m), m));
        CHECK(powmod(d, p - 3, m) == invmod(powmod(d, 2, m), m));
      }
    }
  }

  TEST_CASE("instantiation") {
    const auto& sv = catalog_entry("stafford_vandiver").congruence;
    auto ic = instantiate(sv, 1000003);
    CHECK(ic.exponent == 3);
    CHECK(ic.left_residue == 21);
    REQUIRE(ic.terms.size() == 1);
    CHECK(ic.terms[0].first == 1000003 / 6 + 1);
    CHECK(ic.terms[0].last == 1000003 / 4);
    CHECK(ic.terms[0].coeff == 1);

    auto e3 = instantiate(catalog_entry("euler3").congruence, 101);
    CHECK(e3.exponent == 2);
    CHECK(e3.target == Target::euler);

    CHECK_THROWS_AS(instantiate(catalog_entry("vandiver").congruence, 7), LeftFactorVanishes);
    CHECK_THROWS_AS(instantiate(catalog_entry("vandiver").congruence, 5), ValidityViolated);
    CHECK_THROWS_AS(instantiate(catalog_entry("bern30").congruence, 1009), ValidityViolated);
    CHECK_THROWS_AS(instantiate(catalog_entry("mcintosh_euler").congruence, 5), ValidityViolated);
    CHECK_THROWS_AS(residue_E(101, sv), std::invalid_argument);
    CHECK_THROWS_AS(residue_B(101, catalog_entry("euler3").congruence), std::invalid_argument);
  }

  TEST_CASE("integer forms match the printed relations up to sign") {
    for (const auto& form : fixtures::printed_integer_forms()) {
      CAPTURE(form.id);
      IntegerRelation r = integer_form(catalog_entry(form.id).congruence);
      IntegerRelation expect{form.left, form.coeffs};
      IntegerRelation negated{-form.left, {}};
      for (auto v : form.coeffs) negated.coeffs.push_back(-v);
      CHECK((r == expect || r == negated));
    }
  }

  TEST_CASE("one-term rule against exact Bernoulli numbers") {
    const auto& sv = catalog_entry("stafford_vandiver").congruence;
    for (std::uint64_t p : fixtures::primes_between(11, 600)) {
      CAPTURE(p);
      Modulus m(p);
      Residue s = eval_sum(p, 3, Interval{F(1, 6), F(1, 4)}, false);
      CHECK(mulmod(s, invmod(21, m), m) == oracle::reduce(oracle::bernoulli_exact(p - 3), p));
      CHECK(residue_B(p, sv) == symres(oracle::reduce(oracle::bernoulli_exact(p - 3), p), m));
    }
  }

  TEST_CASE("every catalog entry agrees with the exact oracle where valid") {
    std::size_t checked = 0;
    for (std::uint64_t p : fixtures::primes_between(7, 600)) {
      Modulus m(p);
      SymmetricResidue b = symres(oracle::reduce(oracle::bernoulli_exact(p - 3), p), m);
      CHECK(residue_with_fallback(p, "bern30").value == b);
      SymmetricResidue e = p <= 400 ? symres(oracle::reduce(oracle::euler_exact(p - 3), p), m) : 0;
      if (p <= 400) CHECK(residue_with_fallback(p, "euler33").value == e);
      for (const auto& entry : catalog()) {
        if (!valid_at(entry.congruence, p)) continue;
        if (entry.congruence.target() == Target::euler && p > 400) continue;
        CAPTURE(entry.id);
        CAPTURE(p);
        CHECK(residue(p, entry.congruence) == (entry.congruence.target() == Target::bernoulli ? b : e));
        ++checked;
      }
    }
    CHECK(checked > 1000);
  }

  TEST_CASE("Euler sign agrees with the oracle in both classes mod 4") {
    const auto& g = catalog_entry("glaisher_euler").congruence;
    int classes[4] = {};
    for (std::uint64_t p : fixtures::primes_between(7, 400)) {
      Modulus m(p);
      CHECK(residue_E(p, g) == symres(oracle::reduce(oracle::euler_exact(p - 3), p), m));
      ++classes[p % 4];
    }
    CHECK(classes[1] > 10);
    CHECK(classes[3] > 10);
  }

  TEST_CASE("small known hits") {
    CHECK(residue_B(16843, catalog_entry("bern2").congruence) == 0);
    CHECK(residue_B(16843, catalog_entry("stafford_vandiver").congruence) == 0);
    CHECK(residue_E(149, catalog_entry("euler3").congruence) == 0);
    CHECK(residue_E(241, catalog_entry("euler9").congruence) == 0);
  }

  TEST_CASE("random derivations preserve the value of every seed") {
    std::mt19937_64 rng(14);
    std::size_t evaluated = 0;
    for (const auto& seed : seed_catalog()) {
      for (int trial = 0; trial < 6; ++trial) {
        Derivation d = random_derivation(rng, seed, 1 + rng() % 8);
        SymbolicCongruence c = replay(d);
        CAPTURE(serialize(d));
        CHECK(cost(c) <= cost(seed.congruence));
        std::int64_t den = std::max<std::int64_t>(max_denominator(c), max_denominator(seed.congruence));
        if (den > 50000) continue;
        std::uint64_t lo = std::max<std::uint64_t>(1000, static_cast<std::uint64_t>(den) + 1);
        int primes = 0;
        for (int attempt = 0; primes < 20 && attempt < 200; ++attempt) {
          std::uint64_t p = fixtures::random_prime(rng, lo, 100000);
          if (!valid_at(seed.congruence, p)) continue;
          CAPTURE(p);
          CHECK(evaluate_right_side(instantiate(c, p)) == evaluate_right_side(instantiate(seed.congruence, p)));
          ++primes;
        }
        CHECK(primes == 20);
        ++evaluated;
      }
    }
    CHECK(evaluated > 60);
  }

  TEST_CASE("uncanonicalized transformations preserve the value") {
    // Direct application without folding exercises reflected intervals above
    // 1/2 and alternating terms in both parities.
    std::mt19937_64 rng(15);
    SymbolicCongruence bern_alt = catalog_entry("vandiver").congruence;
    bern_alt.terms = parse_terms("(1)~S(1/7,2/9) + (3)S(1/5,4/9)");
    SymbolicCongruence euler_alt = catalog_entry("mcintosh_euler").congruence;
    euler_alt.terms = parse_terms("(1)~S(1/7,2/9) - (2)S(2/5,5/9)");
    for (const auto& start : {bern_alt, euler_alt, catalog_entry("mcintosh_euler").congruence}) {
      for (int trial = 0; trial < 40; ++trial) {
        SymbolicCongruence c = start;
        for (int k = 0; k < 4; ++k) {
          std::size_t j = rng() % c.terms.size();
          switch (rng() % 3) {
            case 0:
              c = reflect(c, j);
              break;
            case 1: {
              const auto& iv = c.terms[j].interval;
              c = separate(c, j, iv.lo + iv.length() * F(1, 2));
              break;
            }
            default:
              c = subdivide(c, j, 1 + rng() % 6);
          }
        }
        if (max_denominator(c) > 20000) continue;
        for (int i = 0; i < 20; ++i) {
          std::uint64_t p = fixtures::random_prime(rng, static_cast<std::uint64_t>(max_denominator(c)) + 20, 100000);
          if (!valid_at(start, p)) continue;
          CHECK(evaluate_right_side(instantiate(c, p)) == evaluate_right_side(instantiate(start, p)));
        }
      }
    }
  }

  TEST_CASE("catalog entries agree with each other") {
    std::mt19937_64 rng(16);
    for (int i = 0; i < 20; ++i) {
      std::uint64_t p = fixtures::random_prime(rng, 10000, 1000000);
      CAPTURE(p);
      std::optional<SymmetricResidue> b, e;
      for (const auto& entry : catalog()) {
        if (!valid_at(entry.congruence, p)) continue;
        auto& slot = entry.congruence.target() == Target::bernoulli ? b : e;
        SymmetricResidue v = residue(p, entry.congruence, EvalOptions{2});
        if (!slot) slot = v;
        CHECK(*slot == v);
      }
    }
  }
}
