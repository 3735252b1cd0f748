#include "wolvan/search.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "wolvan/catalog.hpp"
#include "wolvan/error.hpp"

namespace wolvan {
namespace {

std::strong_ordering compare_terms(const std::vector<SumTerm>& a, const std::vector<SumTerm>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = canonical_order(a[i], b[i]); c != 0) return c;
  return a.size() <=> b.size();
}

std::vector<Stage> stages_of(const std::vector<Move>& moves) {
  std::vector<Stage> stages;
  stages.reserve(moves.size());
  for (const auto& m : moves) stages.push_back(subdivision_stage(m.term, m.d));
  return stages;
}

// Order of the serialized stages of two moves. A larger term index puts
// "(t" where the other has "(i", so it sorts first.
std::strong_ordering stage_order(const Move& a, const Move& b) {
  if (a.term != b.term) return b.term <=> a.term;
  if (a.d == b.d) return std::strong_ordering::equal;
  std::string x = std::to_string(a.d) + "i";
  std::string y = std::to_string(b.d) + "i";
  return x.compare(y) < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

// Serialized stages are self-delimiting, so comparing move sequences of equal
// length stage by stage agrees with comparing their derivation text.
bool moves_less(const std::vector<Move>& a, const std::vector<Move>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (auto c = stage_order(a[i], b[i]); c != 0) return c < 0;
  return false;
}

bool ranks_before(const LedgerEntry& a, const LedgerEntry& b) {
  if (auto c = a.cost <=> b.cost; c != 0) return c < 0;
  if (auto c = compare_terms(a.congruence.terms, b.congruence.terms); c != 0) return c < 0;
  if (a.derivation.stages.size() != b.derivation.stages.size())
    return a.derivation.stages.size() < b.derivation.stages.size();
  return serialize(a.derivation) < serialize(b.derivation);
}

// Open-addressing set of 128-bit digests with the BFS layer each was
// accepted at. Slots with hi == lo == 0 are empty; digest() never yields it
// in practice and a real zero digest is remapped.
class VisitedTable {
 public:
  VisitedTable() { rehash(1 << 16); }

  // Returns the stored layer, or -1 when absent.
  int find(const TermsDigest& d) const {
    for (std::size_t i = slot(d);; i = (i + 1) & mask_) {
      if (empty(i)) return -1;
      if (keys_[i] == key(d)) return layers_[i];
    }
  }

  void put(const TermsDigest& d, int layer) {
    if ((size_ + 1) * 10 > keys_.size() * 7) rehash(keys_.size() * 2);
    for (std::size_t i = slot(d);; i = (i + 1) & mask_) {
      if (empty(i)) {
        keys_[i] = key(d);
        layers_[i] = static_cast<std::uint8_t>(layer);
        ++size_;
        return;
      }
      if (keys_[i] == key(d)) {
        layers_[i] = static_cast<std::uint8_t>(layer);
        return;
      }
    }
  }

 private:
  static TermsDigest key(const TermsDigest& d) { return (d.hi | d.lo) == 0 ? TermsDigest{1, 0} : d; }
  std::size_t slot(const TermsDigest& d) const { return static_cast<std::size_t>(key(d).hi) & mask_; }
  bool empty(std::size_t i) const { return (keys_[i].hi | keys_[i].lo) == 0; }

  void rehash(std::size_t capacity) {
    std::vector<TermsDigest> keys(capacity);
    std::vector<std::uint8_t> layers(capacity);
    std::swap(keys, keys_);
    std::swap(layers, layers_);
    mask_ = capacity - 1;
    size_ = 0;
    for (std::size_t i = 0; i < keys.size(); ++i)
      if ((keys[i].hi | keys[i].lo) != 0) put(keys[i], layers[i]);
  }

  std::vector<TermsDigest> keys_;
  std::vector<std::uint8_t> layers_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

struct Node {
  std::vector<SumTerm> terms;
  std::vector<Move> moves;
};

// Runs job(i) for i in [0, n) on `workers` threads, each index exactly once.
template <class Job>
void parallel_for(std::size_t n, unsigned workers, const Job& job) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) job(i);
  };
  std::vector<std::thread> threads;
  for (unsigned w = 1; w < workers; ++w) threads.emplace_back(run);
  run();
  for (auto& t : threads) t.join();
}

// All single subdivisions of `terms` with 2 <= d <= max_d, canonicalized.
// Moves whose coefficient bases would overflow are skipped.
std::vector<Node> children(const SymbolicCongruence& shape, const Node& parent, std::uint64_t max_d) {
  std::vector<Node> out;
  SymbolicCongruence c = shape;
  c.terms = parent.terms;
  for (std::size_t j = 0; j < parent.terms.size(); ++j) {
    for (std::uint64_t d = 2; d <= max_d; ++d) {
      SymbolicCongruence next;
      try {
        next = subdivide(c, j, d);
      } catch (const std::overflow_error&) {
        continue;
      }
      Node child;
      child.terms = canonicalize_terms(std::move(next.terms), shape.parity);
      child.moves = parent.moves;
      child.moves.push_back(Move{static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(d)});
      out.push_back(std::move(child));
    }
  }
  return out;
}

}  // namespace

void SearchLedger::offer(const LedgerEntry& e) {
  const std::size_t m = e.congruence.terms.size();
  auto it = best_.find(m);
  if (it == best_.end() || ranks_before(e, it->second)) best_[m] = e;
}

void SearchLedger::offer(const SymbolicCongruence& c, const Derivation& base, const std::vector<Move>& moves) {
  const std::size_t m = c.terms.size();
  auto it = best_.find(m);
  if (it != best_.end()) {
    // Cheap rejections before materializing the derivation.
    Fraction k = cost(c);
    if (k > it->second.cost) return;
    if (k == it->second.cost && compare_terms(c.terms, it->second.congruence.terms) > 0) return;
  }
  offer(LedgerEntry{cost(c), c, extend(base, stages_of(moves))});
}

void SearchLedger::merge(const SearchLedger& other) {
  for (const auto& [m, e] : other.best_) offer(e);
  partial = partial || other.partial;
  nodes += other.nodes;
}

std::string format_ledger(const SearchLedger& ledger) {
  std::string out;
  for (const auto& [m, e] : ledger.best())
    out += std::to_string(m) + " " + e.cost.str() + " " + serialize(e.derivation) + "\n";
  return out;
}

SearchLedger parse_ledger(std::string_view text) {
  SearchLedger ledger;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    std::size_t line_start = pos;
    pos = end + 1;
    if (line.empty() || line[0] == '#') continue;

    std::size_t a = line.find(' ');
    std::size_t b = a == std::string_view::npos ? a : line.find(' ', a + 1);
    if (b == std::string_view::npos) throw ParseError("ledger line needs 'm cost derivation'", line_start);
    std::size_t m = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + a, m);
    if (ec != std::errc() || ptr != line.data() + a) throw ParseError("bad term count", line_start);
    LedgerEntry e;
    e.cost = Fraction::parse(line.substr(a + 1, b - a - 1));
    e.derivation = parse_derivation(line.substr(b + 1));
    e.congruence = replay(e.derivation);
    if (e.congruence.terms.size() != m) throw ParseError("derivation does not have the recorded term count", line_start);
    if (cost(e.congruence) != e.cost) throw ParseError("derivation does not have the recorded cost", line_start);
    ledger.offer(e);
  }
  return ledger;
}

SearchLedger exhaustive_search(const ExhaustiveParams& params) {
  for (auto d : params.bounds)
    if (d < 2) throw std::invalid_argument("exhaustive search bounds must be at least 2");
  if (params.bounds.size() > 250) throw std::invalid_argument("at most 250 exhaustive steps");
  const CatalogEntry& start = catalog_entry(params.seed_id);
  const SymbolicCongruence& shape = start.congruence;
  const auto& bounds = params.bounds;
  const int depth = static_cast<int>(bounds.size());

  SearchLedger ledger;
  VisitedTable visited;
  auto as_congruence = [&](const Node& n) {
    SymbolicCongruence c = shape;
    c.terms = n.terms;
    return c;
  };

  // A form first accepted at layer `earlier` can replay every continuation
  // available from layer `later` when its remaining bounds are no smaller.
  auto dominates = [&](int earlier, int later) {
    for (int t = 0; later + t < depth; ++t)
      if (bounds[static_cast<std::size_t>(earlier + t)] < bounds[static_cast<std::size_t>(later + t)]) return false;
    return true;
  };

  std::vector<Node> layer{Node{shape.terms, {}}};
  visited.put(digest(shape.terms), 0);
  ledger.nodes = 1;
  ledger.offer(shape, start.derivation, {});

  constexpr std::size_t kBatch = 2048;
  for (int i = 0; i < depth && !ledger.partial; ++i) {
    const bool last = i + 1 == depth;
    std::vector<Node> next;
    // Index into `next` of each form accepted in this layer.
    std::unordered_map<TermsDigest, std::size_t, decltype([](const TermsDigest& d) { return d.hi; })> here;

    for (std::size_t begin = 0; begin < layer.size() && !ledger.partial; begin += kBatch) {
      const std::size_t end = std::min(layer.size(), begin + kBatch);
      std::vector<std::vector<Node>> expanded(end - begin);
      parallel_for(end - begin, params.workers,
                   [&](std::size_t k) { expanded[k] = children(shape, layer[begin + k], bounds[i]); });

      for (auto& group : expanded) {
        for (auto& child : group) {
          TermsDigest dg = digest(child.terms);
          if (params.prune) {
            if (auto it = here.find(dg); it != here.end()) {
              // Same form, other route: the ledger and the kept node both
              // take the route that ranks first.
              ledger.offer(as_congruence(child), start.derivation, child.moves);
              if (!last && moves_less(child.moves, next[it->second].moves)) next[it->second] = std::move(child);
              continue;
            }
            int seen = visited.find(dg);
            if (seen >= 0 && seen <= i && dominates(seen, i + 1)) continue;
            visited.put(dg, i + 1);
          }
          ledger.offer(as_congruence(child), start.derivation, child.moves);
          if (++ledger.nodes >= params.budget) {
            ledger.partial = true;
            break;
          }
          if (params.prune) here.emplace(dg, last ? 0 : next.size());
          if (!last) next.push_back(std::move(child));
        }
        if (ledger.partial) break;
      }
    }
    layer = std::move(next);
  }
  return ledger;
}

GreedyResult greedy_search(const GreedyParams& params) {
  if (params.max_d < 2 || params.lookahead < 1 || params.rounds < 1)
    throw std::invalid_argument("greedy search needs D >= 2, lambda >= 1, rounds >= 1");
  const CatalogEntry& start = catalog_entry(params.seed_id);
  GreedyResult result;
  result.congruence = start.congruence;
  result.derivation = start.derivation;
  result.history.push_back(cost(start.congruence));

  for (std::uint64_t round = 0; round < params.rounds; ++round) {
    std::vector<Node> frontier{Node{result.congruence.terms, {}}};
    for (std::uint64_t step = 0; step < params.lookahead; ++step) {
      std::vector<std::vector<Node>> expanded(frontier.size());
      parallel_for(frontier.size(), params.workers,
                   [&](std::size_t k) { expanded[k] = children(result.congruence, frontier[k], params.max_d); });
      std::vector<Node> next;
      for (auto& group : expanded)
        for (auto& child : group) next.push_back(std::move(child));
      frontier = std::move(next);
    }
    if (frontier.empty()) break;

    // Least cost, then fewer terms, then the least canonical form, then the
    // least derivation.
    std::vector<Fraction> costs(frontier.size());
    parallel_for(frontier.size(), params.workers, [&](std::size_t k) {
      Fraction total;
      for (const auto& t : frontier[k].terms) total += t.interval.length();
      costs[k] = total;
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < frontier.size(); ++k) {
      const Node& a = frontier[k];
      const Node& b = frontier[best];
      auto c = costs[k] <=> costs[best];
      if (c == 0) c = a.terms.size() <=> b.terms.size();
      if (c == 0) c = compare_terms(a.terms, b.terms);
      if (c < 0 || (c == 0 && moves_less(a.moves, b.moves))) best = k;
    }
    result.congruence.terms = std::move(frontier[best].terms);
    auto stages = stages_of(frontier[best].moves);
    result.derivation.stages.insert(result.derivation.stages.end(), stages.begin(), stages.end());
    result.history.push_back(costs[best]);
  }
  return result;
}

Fraction ratio_bound(std::uint64_t b, std::uint64_t n, const Fraction& eps) {
  if (b < 2 || n < 1 || !(eps > Fraction(0)) || eps > Fraction(1))
    throw std::invalid_argument("ratio_bound needs b >= 2, N >= 1, 0 < eps <= 1");
  const auto B = static_cast<std::int64_t>(b);
  const auto N = static_cast<std::int64_t>(n);
  const std::int64_t beta = B / 2;
  const Fraction scale = eps * Fraction(B * (B + 1));
  const Fraction first(beta - 1 + N);
  const Fraction second = Fraction(beta * (beta - 1)) / (Fraction(2) * scale) + Fraction(N);
  return Fraction(N) * scale / std::max(first, second);
}

GreedyParams parse_greedy_spec(std::string_view text, GreedyParams p) {
  std::size_t pos = 0;
  while (pos <= text.size() && !text.empty()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", pos);
    std::string_view key = item.substr(0, eq);
    std::string_view val = item.substr(eq + 1);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc() || ptr != val.data() + val.size()) throw ParseError("expected an integer", pos + eq + 1);
    if (key == "D") p.max_d = v;
    else if (key == "lambda") p.lookahead = v;
    else if (key == "rounds") p.rounds = v;
    else throw ParseError("unknown greedy parameter '" + std::string(key) + "'", pos);
    pos = end + 1;
    if (end == text.size()) break;
  }
  return p;
}

}  // namespace wolvan
