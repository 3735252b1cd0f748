#include "wolvan/eval.hpp"

#include <numeric>
#include <stdexcept>
#include <thread>

#include "wolvan/catalog.hpp"
#include "wolvan/error.hpp"

namespace wolvan {

std::pair<std::uint64_t, std::uint64_t> integer_range(const Interval& iv, std::uint64_t p) {
  using i128 = __int128;
  i128 lo = static_cast<i128>(iv.lo.num()) * p;
  i128 hi = static_cast<i128>(iv.hi.num()) * p;
  i128 first = lo / iv.lo.den() + 1;
  // ceil(hi/den) - 1
  i128 last = (hi + iv.hi.den() - 1) / iv.hi.den() - 1;
  return {static_cast<std::uint64_t>(first), static_cast<std::uint64_t>(last)};
}

Fraction left_factor_value(const LeftFactor& left) {
  if (auto* b = std::get_if<BernoulliCkabc>(&left)) {
    auto cube = [](std::uint64_t v) { return static_cast<std::int64_t>(v * v * v); };
    return Fraction(cube(b->c) - cube(b->a) - cube(b->b) + 1, 6);
  }
  if (std::holds_alternative<EulerGlaisher>(left)) return Fraction(-4);
  return Fraction(-10);
}

Fraction left_factor_value(const LeftFactor& left, std::uint64_t p) {
  Fraction v = left_factor_value(left);
  // Secant convention: the Euler left sides carry (-1)^((p-1)/2) at every k.
  if (!std::holds_alternative<BernoulliCkabc>(left) && p % 4 == 1) v = -v;
  return v;
}

namespace {

Residue fraction_residue(const Fraction& f, const Modulus& m) {
  Residue num = m.reduce_signed(f.num());
  return mulmod(num, invmod(m.reduce(static_cast<std::uint64_t>(f.den())), m), m);
}

}  // namespace

InstantiatedCongruence instantiate(const SymbolicCongruence& c, std::uint64_t p) {
  const std::string where = " at p = " + std::to_string(p);
  if (p < c.validity.min_prime) throw ValidityViolated("below the validity floor " + std::to_string(c.validity.min_prime) + where);
  if (p % 2 == 0) throw ValidityViolated("even modulus" + where);
  if (p <= static_cast<std::uint64_t>(max_denominator(c)))
    throw ValidityViolated("p must exceed every endpoint denominator" + where);
  for (auto x : c.validity.exclusions)
    if (x % p == 0) throw ValidityViolated("p divides " + std::to_string(x) + where);

  Modulus m(p);
  InstantiatedCongruence ic;
  ic.p = p;
  ic.target = c.target();
  ic.exponent = ic.target == Target::bernoulli ? 3 : 2;
  const Fraction left = left_factor_value(c.left, p);
  ic.left_residue = fraction_residue(left, m);
  if (ic.left_residue == 0) throw LeftFactorVanishes("left factor " + left.str() + " vanishes" + where);

  ic.terms.reserve(c.terms.size());
  for (const auto& t : c.terms) {
    Residue coeff = 0;
    for (auto [base, count] : t.coeff.entries()) {
      Residue b = m.reduce(base);
      if (b == 0) throw ValidityViolated("p divides coefficient base " + std::to_string(base) + where);
      Residue inv = invmod(powmod(b, ic.exponent, m), m);
      coeff = m.add(coeff, mulmod(m.reduce_signed(count), inv, m));
    }
    auto [first, last] = integer_range(t.interval, p);
    ic.terms.push_back(InstantiatedTerm{coeff, first, last, t.alternating});
  }
  return ic;
}

IntegerRelation integer_form(const SymbolicCongruence& c) {
  const std::int64_t e = c.target() == Target::bernoulli ? 3 : 2;
  std::vector<Fraction> values;
  values.push_back(left_factor_value(c.left));
  for (const auto& t : c.terms) {
    Fraction v;
    for (auto [base, count] : t.coeff.entries()) {
      std::int64_t power = 1;
      for (std::int64_t i = 0; i < e; ++i) {
        if (__builtin_mul_overflow(power, static_cast<std::int64_t>(base), &power))
          throw std::overflow_error("coefficient base too large for an integer form");
      }
      v += Fraction(count, power);
    }
    values.push_back(v);
  }
  std::int64_t scale = 1;
  for (const auto& v : values) {
    std::int64_t g = std::gcd(scale, v.den());
    if (__builtin_mul_overflow(scale / g, v.den(), &scale)) throw std::overflow_error("integer form overflow");
  }
  std::vector<std::int64_t> ints;
  std::int64_t content = 0;
  for (const auto& v : values) {
    std::int64_t x = 0;
    if (__builtin_mul_overflow(v.num(), scale / v.den(), &x)) throw std::overflow_error("integer form overflow");
    ints.push_back(x);
    content = std::gcd(content, x);
  }
  if (content == 0) content = 1;
  IntegerRelation r;
  r.left = ints[0] / content;
  for (std::size_t i = 1; i < ints.size(); ++i) r.coeffs.push_back(ints[i] / content);
  return r;
}

namespace {

// Pair over the progression first, first+stride, ..., <= last, split among
// the requested workers. Chunk results are combined in chunk order, and
// combine is exact, so the result does not depend on the split.
PairAccumulator parallel_pair(const Modulus& p, unsigned e, std::uint64_t first, std::uint64_t last,
                              std::uint64_t stride, const EvalOptions& options) {
  if (first > last) return {};
  const std::uint64_t count = (last - first) / stride + 1;
  std::uint64_t workers = std::max(1u, options.workers);
  if (workers > count) workers = count;
  if (workers == 1) return power_sum_pair(p, e, first, last, stride, options.path);

  std::vector<PairAccumulator> parts(workers);
  auto job = [&](std::uint64_t w) {
    if (options.chunking == Chunking::progression) {
      std::uint64_t start = first + w * stride;
      std::uint64_t n = count / workers + (w < count % workers ? 1 : 0);
      parts[w] = power_sum_pair(p, e, start, start + (n - 1) * workers * stride, workers * stride, options.path);
    } else {
      std::uint64_t base = count / workers;
      std::uint64_t extra = count % workers;
      std::uint64_t begin = w * base + std::min(w, extra);
      std::uint64_t n = base + (w < extra ? 1 : 0);
      parts[w] = power_sum_pair(p, e, first + begin * stride, first + (begin + n - 1) * stride, stride, options.path);
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (std::uint64_t w = 1; w < workers; ++w) threads.emplace_back(job, w);
  job(0);
  for (auto& t : threads) t.join();

  PairAccumulator total;
  for (const auto& part : parts) total = combine(total, part, p);
  return total;
}

}  // namespace

Residue eval_range(const Modulus& p, unsigned e, std::uint64_t first, std::uint64_t last, bool alternating,
                   const EvalOptions& options) {
  if (first > last) return 0;
  if (!alternating) return pair_value(parallel_pair(p, e, first, last, 1, options), p);
  std::uint64_t even = first % 2 == 0 ? first : first + 1;
  std::uint64_t odd = first % 2 == 1 ? first : first + 1;
  Residue s_even = even <= last ? pair_value(parallel_pair(p, e, even, last, 2, options), p) : 0;
  Residue s_odd = odd <= last ? pair_value(parallel_pair(p, e, odd, last, 2, options), p) : 0;
  return p.sub(s_even, s_odd);
}

Residue eval_sum(std::uint64_t p, unsigned e, const Interval& iv, bool alternating, const EvalOptions& options) {
  if (p <= static_cast<std::uint64_t>(std::max(iv.lo.den(), iv.hi.den())))
    throw ValidityViolated("p must exceed the endpoint denominators");
  auto [first, last] = integer_range(iv, p);
  return eval_range(Modulus(p), e, first, last, alternating, options);
}

Residue evaluate_right_side(const InstantiatedCongruence& ic, const EvalOptions& options) {
  Modulus m(ic.p);
  Residue total = 0;
  for (const auto& t : ic.terms) {
    if (t.coeff == 0 || t.first > t.last) continue;
    Residue s = eval_range(m, ic.exponent, t.first, t.last, t.alternating, options);
    total = m.add(total, mulmod(t.coeff, s, m));
  }
  return total;
}

SymmetricResidue residue(std::uint64_t p, const SymbolicCongruence& c, const EvalOptions& options) {
  InstantiatedCongruence ic = instantiate(c, p);
  Modulus m(p);
  Residue rhs = evaluate_right_side(ic, options);
  return symres(mulmod(rhs, invmod(ic.left_residue, m), m), m);
}

SymmetricResidue residue_B(std::uint64_t p, const SymbolicCongruence& c, const EvalOptions& options) {
  if (c.target() != Target::bernoulli) throw std::invalid_argument("residue_B needs a Bernoulli congruence");
  return residue(p, c, options);
}

SymmetricResidue residue_E(std::uint64_t p, const SymbolicCongruence& c, const EvalOptions& options) {
  if (c.target() != Target::euler) throw std::invalid_argument("residue_E needs an Euler congruence");
  return residue(p, c, options);
}

ResidueResult residue_with_fallback(std::uint64_t p, std::string_view preferred, const EvalOptions& options) {
  const CatalogEntry& first = catalog_entry(preferred);
  std::vector<std::string> order{first.id};
  for (const auto& id : fallback_chain(first.congruence.target()))
    if (id != first.id) order.push_back(id);
  for (const auto& id : order) {
    const auto& entry = catalog_entry(id);
    try {
      return ResidueResult{residue(p, entry.congruence, options), entry.id};
    } catch (const LeftFactorVanishes&) {
    } catch (const ValidityViolated&) {
    }
  }
  throw ValidityViolated("no congruence in the fallback chain is valid at p = " + std::to_string(p));
}

}  // namespace wolvan
