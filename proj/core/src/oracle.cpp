#include "wolvan/oracle.hpp"

#include <mutex>
#include <stdexcept>
#include <string>

#include "wolvan/error.hpp"

namespace wolvan::oracle {
namespace {

// Tables grow on demand and are shared between threads.
std::mutex table_mutex;

// unsigned long and long are 64 bits on every supported target.
static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));

mpz_class z(std::uint64_t v) { return mpz_class(static_cast<unsigned long>(v)); }
mpz_class zs(std::int64_t v) { return mpz_class(static_cast<long>(v)); }
std::uint64_t u64(const mpz_class& v) { return mpz_get_ui(v.get_mpz_t()); }

mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace

mpq_class bernoulli_exact(std::size_t n) {
  if (n > kMaxBernoulli) throw std::out_of_range("bernoulli_exact is capped at n = " + std::to_string(kMaxBernoulli));
  if (n == 1) return mpq_class(-1, 2);
  if (n % 2 == 1) return 0;

  // Even-index table from sum_{j=0}^{m} binom(m+1, j) B_j = 0.
  static std::vector<mpq_class> even{mpq_class(1)};
  std::lock_guard lock(table_mutex);
  while (even.size() <= n / 2) {
    const unsigned long m = 2 * even.size();
    mpq_class sum = 1 - mpq_class(m + 1, 2);
    for (std::size_t j = 1; j < even.size(); ++j) sum += binomial(m + 1, 2 * j) * even[j];
    mpq_class b = -sum / (m + 1);
    b.canonicalize();
    even.push_back(b);
  }
  return even[n / 2];
}

mpz_class euler_exact(std::size_t n) {
  if (n > kMaxEuler) throw std::out_of_range("euler_exact is capped at n = " + std::to_string(kMaxEuler));
  if (n % 2 == 1) return 0;

  // sum_{k=0}^{m} binom(2m, 2k) E_{2k} = 0.
  static std::vector<mpz_class> even{mpz_class(1)};
  std::lock_guard lock(table_mutex);
  while (even.size() <= n / 2) {
    const unsigned long m = even.size();
    mpz_class sum = 0;
    for (std::size_t k = 0; k < m; ++k) sum += binomial(2 * m, 2 * k) * even[k];
    even.push_back(-sum);
  }
  return even[n / 2];
}

Residue reduce(const mpz_class& x, std::uint64_t p) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), z(p).get_mpz_t());
  return u64(r);
}

Residue reduce(const mpq_class& x, std::uint64_t p) {
  Modulus m(p);
  Residue den = reduce(x.get_den(), p);
  if (den == 0) throw NotInvertible("denominator divisible by " + std::to_string(p));
  return mulmod(reduce(x.get_num(), p), invmod(den, m), m);
}

Residue naive_power_sum(std::uint64_t p, std::int64_t l, const Interval& iv, bool alternating) {
  Modulus m(p);
  mpz_class P = z(p);
  // First and last integers strictly inside (lo p, hi p).
  mpz_class lo = zs(iv.lo.num()) * P;
  mpz_class hi = zs(iv.hi.num()) * P;
  mpz_class first, last;
  mpz_fdiv_q(first.get_mpz_t(), lo.get_mpz_t(), zs(iv.lo.den()).get_mpz_t());
  first += 1;
  mpz_cdiv_q(last.get_mpz_t(), hi.get_mpz_t(), zs(iv.hi.den()).get_mpz_t());
  last -= 1;
  if (first > last) return 0;

  const std::uint64_t a = u64(first);
  const std::uint64_t b = u64(last);
  const std::uint64_t e = static_cast<std::uint64_t>(l < 0 ? -l : l);
  Residue total = 0;
  for (std::uint64_t s = a; s <= b; ++s) {
    Residue term = powmod(m.reduce(s), e, m);
    if (l < 0) term = invmod(term, m);
    if (alternating && s % 2 == 1) term = m.neg(term);
    total = m.add(total, term);
  }
  return total;
}

mpz_class wolstenholme_binomial_test(std::uint64_t p, std::uint64_t h) {
  mpz_class P = z(p);
  mpz_class mod = P * P * P * P;
  mpz_class H = z(h);
  mpz_class num = 1, den = 1;
  // binom(hp-1, p-1) = prod_{k=1}^{p-1} (hp - k) / k, every factor prime to p.
  for (std::uint64_t k = 1; k < p; ++k) {
    mpz_class K = z(k);
    num = num * (H * P - K) % mod;
    den = den * K % mod;
  }
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
    throw NotInvertible("(p-1)! is not invertible mod p^4");
  mpz_class r = num * inv % mod;
  if (r < 0) r += mod;
  return r;
}

mpz_class glaisher_prediction(std::uint64_t p, std::uint64_t h) {
  if (p < 5) throw std::invalid_argument("glaisher_prediction needs p >= 5");
  mpz_class P = z(p);
  mpz_class mod = P * P * P * P;
  mpz_class b = z(reduce(bernoulli_exact(p - 3), p));
  mpz_class H = z(h);
  mpz_class three_inv;
  mpz_invert(three_inv.get_mpz_t(), mpz_class(3).get_mpz_t(), mod.get_mpz_t());
  mpz_class r = (1 - H * (H - 1) * three_inv % mod * P * P * P * b) % mod;
  if (r < 0) r += mod;
  return r;
}

}  // namespace wolvan::oracle
