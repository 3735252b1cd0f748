#include "doctest.h"
#include "wolvan/catalog.hpp"
#include "wolvan/error.hpp"
#include "wolvan/search.hpp"

using namespace wolvan;

namespace {

Fraction F(std::int64_t n, std::int64_t d = 1) { return Fraction(n, d); }

SearchLedger run(const char* seed, std::vector<std::uint64_t> bounds, unsigned workers = 1, bool prune = true,
                 std::uint64_t budget = 10'000'000) {
  ExhaustiveParams p;
  p.seed_id = seed;
  p.bounds = std::move(bounds);
  p.workers = workers;
  p.prune = prune;
  p.budget = budget;
  return exhaustive_search(p);
}

void check_replays(const SearchLedger& ledger) {
  for (const auto& [m, e] : ledger.best()) {
    CAPTURE(m);
    SymbolicCongruence c = replay(e.derivation);
    CHECK(c.terms.size() == m);
    CHECK(cost(c) == e.cost);
    CHECK(c == e.congruence);
  }
}

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("small ledgers") {
    auto sv = run("stafford_vandiver", {});
    REQUIRE(sv.best().count(1));
    CHECK(sv.best().at(1).cost == F(1, 12));

    auto two = run("vandiver", {2});
    CHECK(two.best().at(2).cost == F(1, 15));
    CHECK(replay(two.best().at(2).derivation) == catalog_entry("bern2").congruence);

    auto five = run("vandiver", {2, 2, 2, 2, 2});
    CHECK(five.best().at(3).cost == F(1, 15));
    CHECK(five.best().at(4).cost == F(7, 120));
    CHECK(five.best().at(5).cost == F(13, 240));
    CHECK(five.best().at(6).cost == F(5, 96));
    check_replays(five);
    CHECK_FALSE(five.partial);
  }

  TEST_CASE("pruning, workers and bounds") {
    for (auto bounds : {std::vector<std::uint64_t>{2, 2, 2, 2}, {3, 2, 3}, {2, 4, 2}}) {
      auto pruned = run("vandiver", bounds);
      CHECK(format_ledger(run("vandiver", bounds, 1, false)) == format_ledger(pruned));
      CHECK(format_ledger(run("vandiver", bounds, 4)) == format_ledger(pruned));
      check_replays(pruned);
    }
    CHECK(format_ledger(run("tw(7)", {2, 3}, 1, false)) == format_ledger(run("tw(7)", {2, 3}, 3)));

    // Larger bounds never do worse.
    auto small = run("vandiver", {2, 2, 2});
    for (auto bigger : {std::vector<std::uint64_t>{3, 2, 2}, {2, 2, 2, 2}, {2, 3, 3}}) {
      auto big = run("vandiver", bigger);
      for (const auto& [m, e] : small.best()) {
        CAPTURE(m);
        REQUIRE(big.best().count(m));
        CHECK(big.best().at(m).cost <= e.cost);
      }
    }
  }

  TEST_CASE("budget") {
    auto cut = run("vandiver", {3, 3, 3, 3}, 1, true, 500);
    CHECK(cut.partial);
    CHECK(cut.nodes == 500);
    check_replays(cut);
    CHECK_THROWS_AS(run("vandiver", {1}), std::invalid_argument);
    CHECK_THROWS_AS(run("nonesuch", {2}), UnknownSeed);
  }

  TEST_CASE("warm start") {
    auto warm = run("bern2", {2, 2});
    for (const auto& [m, e] : warm.best()) CHECK(e.derivation.seed_id == "vandiver");
    check_replays(warm);
    CHECK(warm.best().at(4).cost == F(7, 120));
  }

  TEST_CASE("ledger files") {
    auto ledger = run("vandiver", {2, 2, 2});
    std::string text = format_ledger(ledger);
    CHECK(text.find("2 1/15 vandiver:") == 0);
    CHECK(format_ledger(parse_ledger(text)) == text);
    CHECK_THROWS_AS(parse_ledger("2 1/14 vandiver:(i)(t2ii)\n"), ParseError);
    CHECK_THROWS_AS(parse_ledger("3 1/15 vandiver:(i)(t2ii)\n"), ParseError);
    CHECK_THROWS_AS(parse_ledger("2 1/15\n"), ParseError);
    CHECK(parse_ledger("# comment\n\n2 1/15 vandiver:(i)(t2ii)\n").best().at(2).cost == F(1, 15));
  }

  TEST_CASE("greedy search") {
    GreedyParams p;
    p.seed_id = "vandiver";
    p.max_d = 6;
    p.rounds = 12;
    auto r = greedy_search(p);
    REQUIRE(r.history.size() == 13);
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1]);
    CHECK(r.history.back() == cost(r.congruence));
    CHECK(replay(r.derivation) == r.congruence);
    CHECK(r.history.back() < F(1, 20));

    p.workers = 3;
    auto again = greedy_search(p);
    CHECK(serialize(again.derivation) == serialize(r.derivation));

    GreedyParams two;
    two.seed_id = "glaisher_euler";
    two.max_d = 4;
    two.lookahead = 2;
    two.rounds = 3;
    auto e = greedy_search(two);
    for (std::size_t i = 1; i < e.history.size(); ++i) CHECK(e.history[i] <= e.history[i - 1]);
    CHECK(replay(e.derivation) == e.congruence);

    GreedyParams bad;
    bad.seed_id = "vandiver";
    bad.max_d = 1;
    CHECK_THROWS_AS(greedy_search(bad), std::invalid_argument);
  }

  TEST_CASE("greedy parameter text") {
    auto p = parse_greedy_spec("D=6,lambda=2,rounds=40");
    CHECK(p.max_d == 6);
    CHECK(p.lookahead == 2);
    CHECK(p.rounds == 40);
    CHECK(parse_greedy_spec("rounds=5").max_d == 8);
    CHECK_THROWS_AS(parse_greedy_spec("D=x"), ParseError);
    CHECK_THROWS_AS(parse_greedy_spec("depth=3"), ParseError);
  }

  TEST_CASE("leaf ratio bound") {
    // beta = 2, eps b (b+1) = 30: max{2, 1/30 + 1} = 2.
    CHECK(ratio_bound(5, 1, F(1)) == F(15));
    // beta = 2, eps b (b+1) = 3/100: max{5, 2/(3/50) + 4} = 112/3.
    CHECK(ratio_bound(5, 4, F(1, 1000)) == F(4) * F(3, 100) / F(112, 3));
    CHECK(ratio_bound(5, 4, F(1, 1000)) < ratio_bound(5, 4, F(1, 10)));
    for (std::uint64_t b = 2; b <= 13; ++b)
      for (std::uint64_t n = 1; n <= 8; ++n) {
        Fraction prev(0);
        for (std::int64_t k = 1; k <= 50; ++k) {
          Fraction v = ratio_bound(b, n, F(k, 50));
          CHECK(v >= prev);
          prev = v;
        }
      }
    Fraction shrinking = ratio_bound(13, 3, F(1, 10));
    for (std::int64_t k = 100; k <= 100000; k *= 10) {
      Fraction v = ratio_bound(13, 3, F(1, k));
      CHECK(v < shrinking);
      shrinking = v;
    }
    CHECK_THROWS_AS(ratio_bound(1, 1, F(1)), std::invalid_argument);
    CHECK_THROWS_AS(ratio_bound(5, 0, F(1)), std::invalid_argument);
    CHECK_THROWS_AS(ratio_bound(5, 1, F(0)), std::invalid_argument);
    CHECK_THROWS_AS(ratio_bound(5, 1, F(3, 2)), std::invalid_argument);
  }
}
