#include "wolvan/congruence.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include "wolvan/error.hpp"

namespace wolvan {

// ---------------------------------------------------------------------------
// PowerCoefficient

PowerCoefficient PowerCoefficient::monomial(std::uint64_t base, std::int64_t sign) {
  if (base == 0) throw std::invalid_argument("coefficient base must be positive");
  PowerCoefficient c;
  if (sign != 0) c.entries_.emplace_back(base, sign);
  return c;
}

PowerCoefficient PowerCoefficient::operator-() const {
  PowerCoefficient r = *this;
  for (auto& e : r.entries_) e.second = -e.second;
  return r;
}

PowerCoefficient& PowerCoefficient::operator+=(const PowerCoefficient& o) {
  if (o.entries_.empty()) return *this;
  if (entries_.empty()) {
    entries_ = o.entries_;
    return *this;
  }
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + o.entries_.size());
  auto a = entries_.begin();
  auto b = o.entries_.begin();
  while (a != entries_.end() || b != o.entries_.end()) {
    if (b == o.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == entries_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      std::int64_t s = a->second + b->second;
      if (s != 0) merged.emplace_back(a->first, s);
      ++a;
      ++b;
    }
  }
  entries_ = std::move(merged);
  return *this;
}

PowerCoefficient& PowerCoefficient::operator-=(const PowerCoefficient& o) { return *this += -o; }

PowerCoefficient PowerCoefficient::scaled(std::uint64_t d) const {
  PowerCoefficient r = *this;
  for (auto& e : r.entries_) {
    if (__builtin_mul_overflow(e.first, d, &e.first)) throw std::overflow_error("coefficient base overflow");
  }
  return r;
}

std::string PowerCoefficient::str() const {
  if (entries_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto [base, count] : entries_) {
    std::int64_t mag = count < 0 ? -count : count;
    if (count < 0) out += "-";
    else if (!first) out += "+";
    first = false;
    if (mag != 1) out += std::to_string(mag) + "*";
    out += base == 1 ? "1" : std::to_string(base) + "^t";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Left factors

Target target_of(const LeftFactor& left) noexcept {
  return std::holds_alternative<BernoulliCkabc>(left) ? Target::bernoulli : Target::euler;
}

Parity parity_of(Target target) noexcept { return target == Target::bernoulli ? Parity::odd : Parity::even; }

std::string describe(const LeftFactor& left) {
  if (auto* b = std::get_if<BernoulliCkabc>(&left))
    return "C_k(" + std::to_string(b->a) + "," + std::to_string(b->b) + "," + std::to_string(b->c) + ") B_2k";
  if (std::holds_alternative<EulerGlaisher>(left)) return "(-1)^k 4^(2k-1) E_(p-1-2k)";
  return "(-1)^k 4^(k-1) (9^k+1) E_(p-1-2k)";
}

// ---------------------------------------------------------------------------
// Transformations

std::strong_ordering canonical_order(const SumTerm& a, const SumTerm& b) {
  if (auto c = a.interval <=> b.interval; c != 0) return c;
  if (auto c = a.alternating <=> b.alternating; c != 0) return c;
  return a.coeff <=> b.coeff;
}

Fraction cost(const SymbolicCongruence& c) {
  Fraction total;
  for (const auto& t : c.terms) total += t.interval.length();
  return total;
}

namespace {

const Fraction kHalf(1, 2);
const Fraction kOne(1);

void check_index(const SymbolicCongruence& c, std::size_t term) {
  if (term >= c.terms.size())
    throw PathNotFound("term " + std::to_string(term) + " does not exist (" + std::to_string(c.terms.size()) +
                       " terms)");
}

SumTerm reflected(const SumTerm& t, Parity parity) {
  // s -> p - s: s^t picks up (-1)^t; (-1)^s picks up -1 because p is odd.
  bool negate = (parity == Parity::odd) != t.alternating;
  return SumTerm{negate ? -t.coeff : t.coeff, Interval{kOne - t.interval.hi, kOne - t.interval.lo}, t.alternating};
}

// Appends the pieces of t folded into [0, 1/2].
void fold(const SumTerm& t, Parity parity, std::vector<SumTerm>& out) {
  if (t.interval.hi <= kHalf) {
    out.push_back(t);
  } else if (t.interval.lo >= kHalf) {
    out.push_back(reflected(t, parity));
  } else {
    out.push_back(SumTerm{t.coeff, Interval{t.interval.lo, kHalf}, t.alternating});
    out.push_back(reflected(SumTerm{t.coeff, Interval{kHalf, t.interval.hi}, t.alternating}, parity));
  }
}

// Piecewise sum of one class of terms (all plain or all alternating).
void sweep(const std::vector<const SumTerm*>& terms, bool alternating, std::vector<SumTerm>& out) {
  if (terms.empty()) return;
  struct Event {
    Fraction at;
    const SumTerm* term;
    bool open;
  };
  std::vector<Event> events;
  events.reserve(2 * terms.size());
  for (const auto* t : terms) {
    events.push_back({t->interval.lo, t, true});
    events.push_back({t->interval.hi, t, false});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.at < b.at; });

  PowerCoefficient current;
  std::size_t first_new = out.size();
  for (std::size_t i = 0; i < events.size();) {
    Fraction at = events[i].at;
    for (; i < events.size() && events[i].at == at; ++i) {
      if (events[i].open) current += events[i].term->coeff;
      else current -= events[i].term->coeff;
    }
    if (i == events.size() || current.is_zero()) continue;
    Fraction next = events[i].at;
    if (out.size() > first_new && out.back().interval.hi == at && out.back().coeff == current) {
      out.back().interval.hi = next;
    } else {
      out.push_back(SumTerm{current, Interval{at, next}, alternating});
    }
  }
}

}  // namespace

SymbolicCongruence separate(const SymbolicCongruence& c, std::size_t term, const Fraction& point) {
  check_index(c, term);
  const SumTerm& t = c.terms[term];
  if (!(t.interval.lo < point && point < t.interval.hi))
    throw PointOutOfRange("separation point " + point.str() + " outside (" + t.interval.lo.str() + ", " +
                          t.interval.hi.str() + ")");
  SymbolicCongruence r = c;
  SumTerm upper{t.coeff, Interval{point, t.interval.hi}, t.alternating};
  r.terms[term].interval.hi = point;
  r.terms.insert(r.terms.begin() + static_cast<std::ptrdiff_t>(term) + 1, std::move(upper));
  return r;
}

SymbolicCongruence reflect(const SymbolicCongruence& c, std::size_t term) {
  check_index(c, term);
  SymbolicCongruence r = c;
  r.terms[term] = reflected(c.terms[term], c.parity);
  return r;
}

SymbolicCongruence subdivide(const SymbolicCongruence& c, std::size_t term, std::uint64_t d) {
  check_index(c, term);
  if (d == 0) throw std::invalid_argument("subdivision by zero");
  if (d == 1) return c;
  const SumTerm& t = c.terms[term];
  PowerCoefficient base = t.coeff.scaled(d);
  PowerCoefficient neg = -base;
  bool child_alternating = t.alternating && d % 2 == 1;
  auto dd = static_cast<std::int64_t>(d);

  std::vector<SumTerm> children;
  children.reserve(d);
  for (std::int64_t i = 0; i < dd; ++i) {
    bool negative = t.alternating && i % 2 == 1;
    children.push_back(SumTerm{negative ? neg : base,
                               Interval{(t.interval.lo + Fraction(i)) / Fraction(dd),
                                        (t.interval.hi + Fraction(i)) / Fraction(dd)},
                               child_alternating});
  }
  SymbolicCongruence r = c;
  r.terms.erase(r.terms.begin() + static_cast<std::ptrdiff_t>(term));
  r.terms.insert(r.terms.begin() + static_cast<std::ptrdiff_t>(term), children.begin(), children.end());
  return r;
}

std::vector<SumTerm> canonicalize_terms(std::vector<SumTerm> terms, Parity parity) {
  std::vector<SumTerm> folded;
  folded.reserve(terms.size() + 4);
  for (const auto& t : terms) {
    if (!t.coeff.is_zero()) fold(t, parity, folded);
  }
  std::vector<const SumTerm*> plain;
  std::vector<const SumTerm*> alternating;
  for (const auto& t : folded) (t.alternating ? alternating : plain).push_back(&t);

  std::vector<SumTerm> out;
  sweep(plain, false, out);
  sweep(alternating, true, out);
  std::sort(out.begin(), out.end(), [](const SumTerm& a, const SumTerm& b) { return canonical_order(a, b) < 0; });
  return out;
}

SymbolicCongruence canonicalize(const SymbolicCongruence& c) {
  SymbolicCongruence r;
  r.left = c.left;
  r.parity = c.parity;
  r.validity = c.validity;
  r.terms = canonicalize_terms(c.terms, c.parity);
  return r;
}

std::int64_t max_denominator(const SymbolicCongruence& c) {
  std::int64_t m = 1;
  for (const auto& t : c.terms) m = std::max({m, t.interval.lo.den(), t.interval.hi.den()});
  return m;
}

TermsDigest digest(const std::vector<SumTerm>& terms) {
  // Two independent splitmix-style lanes.
  std::uint64_t h1 = 0x9e3779b97f4a7c15ULL;
  std::uint64_t h2 = 0xc2b2ae3d27d4eb4fULL;
  auto mix = [](std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  };
  auto feed = [&](std::uint64_t v) {
    h1 = mix(h1 ^ v) + 0x632be59bd9b4e019ULL;
    h2 = mix(h2 + v * 0xff51afd7ed558ccdULL) ^ (h2 >> 17);
  };
  feed(terms.size());
  for (const auto& t : terms) {
    feed(static_cast<std::uint64_t>(t.interval.lo.num()));
    feed(static_cast<std::uint64_t>(t.interval.lo.den()));
    feed(static_cast<std::uint64_t>(t.interval.hi.num()));
    feed(static_cast<std::uint64_t>(t.interval.hi.den()));
    feed(t.alternating ? 0xa1 : 0x5e);
    feed(t.coeff.entries().size());
    for (auto [base, count] : t.coeff.entries()) {
      feed(base);
      feed(static_cast<std::uint64_t>(count));
    }
  }
  return {h1, h2};
}

// ---------------------------------------------------------------------------
// Text notation

std::string format_terms(const std::vector<SumTerm>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    bool negative = !t.coeff.is_zero() && t.coeff.entries().front().second < 0;
    const PowerCoefficient shown = negative ? -t.coeff : t.coeff;
    if (i == 0) out += negative ? "-" : "";
    else out += negative ? " - " : " + ";
    out += "(";
    bool first = true;
    for (auto [base, count] : shown.entries()) {
      std::int64_t mag = count < 0 ? -count : count;
      if (!first) out += count < 0 ? "-" : "+";
      else if (count < 0) out += "-";
      first = false;
      if (mag != 1) out += std::to_string(mag) + "*";
      out += std::to_string(base);
    }
    out += ")";
    out += t.alternating ? "~S(" : "S(";
    out += t.interval.lo.str() + "," + t.interval.hi.str() + ")";
  }
  return out;
}

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : s_(text) {}

  std::vector<SumTerm> run() {
    std::vector<SumTerm> terms;
    skip();
    if (pos_ < s_.size() && s_[pos_] == '0') {
      ++pos_;
      skip();
      if (pos_ != s_.size()) fail("trailing input");
      return terms;
    }
    bool first = true;
    while (true) {
      skip();
      if (pos_ == s_.size()) {
        if (first) return terms;
        fail("expected a term");
      }
      int sign = 1;
      if (peek('+') || peek('-')) {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      terms.push_back(term(sign));
      first = false;
      skip();
      if (pos_ == s_.size()) return terms;
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos_); }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip();
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::uint64_t number() {
    skip();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }
  Fraction fraction() {
    std::uint64_t num = number();
    std::uint64_t den = 1;
    skip();
    if (peek('/')) {
      ++pos_;
      den = number();
      if (den == 0) fail("zero denominator");
    }
    return Fraction(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
  }
  SumTerm term(int sign) {
    expect('(');
    PowerCoefficient coeff;
    bool first = true;
    while (true) {
      skip();
      if (peek(')')) {
        if (first) fail("empty coefficient");
        ++pos_;
        break;
      }
      std::int64_t s = 1;
      if (peek('+') || peek('-')) {
        s = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+', '-' or ')'");
      }
      std::uint64_t v = number();
      std::uint64_t count = 1;
      skip();
      if (peek('*')) {
        ++pos_;
        count = v;
        v = number();
      }
      if (v == 0) fail("zero base");
      coeff += PowerCoefficient::monomial(v, s * static_cast<std::int64_t>(count));
      first = false;
    }
    skip();
    bool alternating = false;
    if (peek('~')) {
      alternating = true;
      ++pos_;
    }
    expect('S');
    expect('(');
    Fraction lo = fraction();
    expect(',');
    Fraction hi = fraction();
    expect(')');
    if (!(Fraction(0) <= lo && lo < hi && hi <= Fraction(1))) fail("interval must satisfy 0 <= lo < hi <= 1");
    return SumTerm{sign < 0 ? -coeff : coeff, Interval{lo, hi}, alternating};
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<SumTerm> parse_terms(std::string_view text) { return TermParser(text).run(); }

}  // namespace wolvan
