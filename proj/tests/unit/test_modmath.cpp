#include <gmpxx.h>

#include <random>

#include "doctest.h"
#include "wolvan/error.hpp"
#include "wolvan/modmath.hpp"

using namespace wolvan;

namespace {

mpz_class big(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof v, 0, 0, &v);
  return z;
}

std::uint64_t small(const mpz_class& z) {
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, 1, sizeof v, 0, 0, z.get_mpz_t());
  return v;
}

std::uint64_t random_odd_near(std::mt19937_64& rng, std::uint64_t center, std::uint64_t spread) {
  std::uint64_t m = center - spread + rng() % (2 * spread);
  if (m >= Modulus::kLimit) m = Modulus::kLimit - 1;
  return m | 1;
}

}  // namespace

TEST_SUITE("modmath") {
  TEST_CASE("modulus bounds") {
    CHECK_THROWS_AS(Modulus(2), std::invalid_argument);
    CHECK_THROWS_AS(Modulus(1), std::invalid_argument);
    CHECK_THROWS_AS(Modulus(Modulus::kLimit + 1), std::invalid_argument);
    CHECK_NOTHROW(Modulus(Modulus::kLimit - 1));
    CHECK(Modulus(7).reduce_signed(-1) == 6);
    CHECK(Modulus(7).reduce_signed(INT64_MIN) == small(((big(0) - big(std::uint64_t{1} << 63)) % 7 + 7) % 7));
  }

  TEST_CASE("mulmod examples") {
    CHECK(mulmod(2, 3, Modulus(7)) == 6);
    Modulus m(60000000011ULL);
    CHECK(mulmod(1, 123456789012ULL % m.value(), m) == 123456789012ULL % m.value());
  }

  TEST_CASE("mulmod agrees with arbitrary precision") {
    std::mt19937_64 rng(1);
    const std::uint64_t centers[] = {std::uint64_t{1} << 32, std::uint64_t{1} << 34, 60000000000ULL,
                                     Modulus::kLimit - (std::uint64_t{1} << 20)};
    std::size_t cases = 0;
    for (std::uint64_t center : centers) {
      for (int moduli = 0; moduli < 50; ++moduli) {
        Modulus m(random_odd_near(rng, center, std::min<std::uint64_t>(center / 4, std::uint64_t{1} << 19)));
        mpz_class mz = big(m.value());
        for (int i = 0; i < 5000; ++i) {
          Residue a = rng() % m.value();
          Residue b = rng() % m.value();
          if (i < 4) a = m.value() - 1 - static_cast<Residue>(i);
          Residue r = mulmod(a, b, m);
          mpz_class expect = big(a) * big(b) % mz;
          REQUIRE(r == small(expect));
          REQUIRE(mulmod(b, a, m) == r);
          ++cases;
        }
      }
    }
    CHECK(cases >= 1000000);
  }

  TEST_CASE("powmod") {
    Modulus m(101);
    CHECK(powmod(3, 10, m) == 59049 % 101);
    CHECK(powmod(17, 0, m) == 1);
    for (std::uint64_t p : {5ULL, 10007ULL, 1000000007ULL, 2305843009213693951ULL}) {
      CHECK(powmod(2, p - 1, Modulus(p)) == 1);
    }
    std::mt19937_64 rng(2);
    for (int i = 0; i < 2000; ++i) {
      Modulus mm(random_odd_near(rng, std::uint64_t{1} << 62, std::uint64_t{1} << 61));
      Residue b = rng() % mm.value();
      std::uint64_t e = rng() % 100000;
      mpz_class expect;
      mpz_powm_ui(expect.get_mpz_t(), big(b).get_mpz_t(), e, big(mm.value()).get_mpz_t());
      REQUIRE(powmod(b, e, mm) == small(expect));
    }
  }

  TEST_CASE("invmod") {
    CHECK(invmod(1, Modulus(7)) == 1);
    CHECK(invmod(2, Modulus(7)) == 4);
    CHECK_THROWS_AS(invmod(14 % 7, Modulus(7)), NotInvertible);
    CHECK_THROWS_AS(invmod(6, Modulus(9)), NotInvertible);
    // Composite moduli such as p^4.
    Modulus p4(16843ULL * 16843 * 16843 * 16843);
    CHECK(mulmod(invmod(2, p4), 2, p4) == 1);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20000; ++i) {
      Modulus m(random_odd_near(rng, std::uint64_t{1} << 40, std::uint64_t{1} << 39));
      Residue a = rng() % m.value();
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), big(a).get_mpz_t(), big(m.value()).get_mpz_t());
      if (g == 1) {
        REQUIRE(mulmod(a, invmod(a, m), m) == 1);
      } else {
        REQUIRE_THROWS_AS(invmod(a, m), NotInvertible);
      }
    }
  }

  TEST_CASE("symmetric residues") {
    const std::uint64_t p = 1025793739;
    Modulus m(p);
    CHECK(symres(0, m) == 0);
    CHECK(symres(p - 9, m) == -9);
    CHECK(symres((p - 1) / 2, m) == static_cast<std::int64_t>((p - 1) / 2));
    CHECK(symres((p + 1) / 2, m) == -static_cast<std::int64_t>((p - 1) / 2));
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100000; ++i) {
      Modulus mm(random_odd_near(rng, std::uint64_t{1} << 62, std::uint64_t{1} << 61));
      Residue r = rng() % mm.value();
      SymmetricResidue v = symres(r, mm);
      REQUIRE(from_symmetric(v, mm) == r);
      REQUIRE(static_cast<std::uint64_t>(v < 0 ? -v : v) <= (mm.value() - 1) / 2);
    }
  }
}
