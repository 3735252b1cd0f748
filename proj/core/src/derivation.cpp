#include "wolvan/derivation.hpp"

#include <cctype>
#include <charconv>

#include "wolvan/catalog.hpp"
#include "wolvan/error.hpp"

namespace wolvan {

std::size_t Step::arity() const noexcept {
  switch (kind) {
    case Kind::identity:
      return 0;
    case Kind::reflect:
      return 1;
    case Kind::separate:
      return 2;
    case Kind::subdivide:
      return static_cast<std::size_t>(d);
  }
  return 0;
}

namespace {

class ScriptParser {
 public:
  ScriptParser(std::string_view text, std::size_t offset) : s_(text), offset_(offset) {}

  std::vector<Stage> run() {
    std::vector<Stage> stages;
    skip();
    if (pos_ == s_.size()) return stages;
    while (true) {
      stages.push_back(stage());
      skip();
      if (pos_ == s_.size()) return stages;
      if (s_[pos_] != ';') fail("expected ';' or '('");
      ++pos_;
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, offset_ + pos_); }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Stage stage() {
    Stage st;
    skip();
    while (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      Tree tree;
      node(tree);
      skip();
      if (pos_ == s_.size() || s_[pos_] != ')') fail("expected ')' after a complete tree");
      ++pos_;
      st.push_back(std::move(tree));
      skip();
    }
    if (st.empty()) fail("expected '('");
    return st;
  }

  std::uint64_t number() {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  // Recursion depth equals tree depth, which is bounded by script length.
  void node(Tree& tree) {
    skip();
    if (pos_ == s_.size()) fail("incomplete tree");
    char c = s_[pos_];
    std::size_t at = pos_;
    ++pos_;
    Step step;
    switch (c) {
      case 'i':
        step = Step::identity();
        break;
      case 'r':
        step = Step::reflect();
        break;
      case 's': {
        std::uint64_t num = number();
        if (pos_ == s_.size() || s_[pos_] != '/') fail("expected '/' in separation fraction");
        ++pos_;
        std::uint64_t den = number();
        if (den == 0 || num == 0 || num >= den) {
          pos_ = at;
          fail("separation fraction must lie strictly between 0 and 1");
        }
        step = Step::separate(Fraction(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)));
        break;
      }
      case 't': {
        std::uint64_t d = number();
        if (d == 0) {
          pos_ = at;
          fail("subdivision count must be positive");
        }
        step = Step::subdivide(d);
        break;
      }
      default:
        pos_ = at;
        fail(std::string("unexpected character '") + c + "'");
    }
    tree.push_back(step);
    for (std::size_t k = 0; k < step.arity(); ++k) node(tree);
  }

  std::string_view s_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

void append_step(std::string& out, const Step& s) {
  switch (s.kind) {
    case Step::Kind::identity:
      out += 'i';
      break;
    case Step::Kind::reflect:
      out += 'r';
      break;
    case Step::Kind::separate:
      out += 's' + std::to_string(s.f.num()) + '/' + std::to_string(s.f.den());
      break;
    case Step::Kind::subdivide:
      out += 't' + std::to_string(s.d);
      break;
  }
}

// Expands the subtree rooted at tree[pos] applied to term, appending leaves.
void expand(const Tree& tree, std::size_t& pos, const SumTerm& term, Parity parity, std::vector<SumTerm>& leaves) {
  if (pos >= tree.size()) throw MalformedScript("incomplete transformation tree");
  const Step& step = tree[pos++];
  SymbolicCongruence one;
  one.parity = parity;
  one.terms = {term};
  switch (step.kind) {
    case Step::Kind::identity:
      leaves.push_back(term);
      return;
    case Step::Kind::reflect:
      expand(tree, pos, reflect(one, 0).terms[0], parity, leaves);
      return;
    case Step::Kind::separate: {
      if (!(Fraction(0) < step.f && step.f < Fraction(1)))
        throw MalformedScript("separation fraction " + step.f.str() + " outside (0, 1)");
      const Interval& iv = term.interval;
      auto split = separate(one, 0, iv.lo + step.f * iv.length());
      expand(tree, pos, split.terms[0], parity, leaves);
      expand(tree, pos, split.terms[1], parity, leaves);
      return;
    }
    case Step::Kind::subdivide: {
      if (step.d == 0) throw MalformedScript("subdivision by zero");
      auto children = subdivide(one, 0, step.d);
      for (const auto& child : children.terms) expand(tree, pos, child, parity, leaves);
      return;
    }
  }
}

}  // namespace

std::vector<Stage> parse_script(std::string_view text) { return ScriptParser(text, 0).run(); }

std::string serialize_script(const std::vector<Stage>& stages) {
  std::string out;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (i > 0) out += ';';
    for (const auto& tree : stages[i]) {
      out += '(';
      for (const auto& step : tree) append_step(out, step);
      out += ')';
    }
  }
  return out;
}

Derivation parse_derivation(std::string_view text) {
  Derivation d;
  auto colon = text.find(':');
  std::string_view seed = text.substr(0, colon);
  while (!seed.empty() && std::isspace(static_cast<unsigned char>(seed.front()))) seed.remove_prefix(1);
  while (!seed.empty() && std::isspace(static_cast<unsigned char>(seed.back()))) seed.remove_suffix(1);
  if (seed.empty()) throw ParseError("missing seed identifier", 0);
  d.seed_id = std::string(seed);
  if (colon != std::string_view::npos) d.stages = ScriptParser(text.substr(colon + 1), colon + 1).run();
  return d;
}

std::string serialize(const Derivation& d) {
  if (d.stages.empty()) return d.seed_id;
  return d.seed_id + ":" + serialize_script(d.stages);
}

SymbolicCongruence apply_stage(const SymbolicCongruence& c, const Stage& stage) {
  if (stage.size() > c.terms.size())
    throw PathNotFound("stage has " + std::to_string(stage.size()) + " trees but the congruence has " +
                       std::to_string(c.terms.size()) + " terms");
  std::vector<SumTerm> leaves;
  leaves.reserve(c.terms.size() + 8);
  for (std::size_t j = 0; j < c.terms.size(); ++j) {
    if (j >= stage.size()) {
      leaves.push_back(c.terms[j]);
      continue;
    }
    std::size_t pos = 0;
    expand(stage[j], pos, c.terms[j], c.parity, leaves);
    if (pos != stage[j].size()) throw MalformedScript("tree " + std::to_string(j) + " has unused steps");
  }
  SymbolicCongruence r;
  r.left = c.left;
  r.parity = c.parity;
  r.validity = c.validity;
  r.terms = canonicalize_terms(std::move(leaves), c.parity);
  return r;
}

SymbolicCongruence replay(const Derivation& d) {
  SymbolicCongruence c = catalog_entry(d.seed_id).congruence;
  for (const auto& stage : d.stages) c = apply_stage(c, stage);
  return c;
}

Stage subdivision_stage(std::size_t term, std::uint64_t d) {
  Stage st(term + 1, Tree{Step::identity()});
  Tree& tree = st.back();
  tree.assign(1, Step::subdivide(d));
  tree.insert(tree.end(), d, Step::identity());
  return st;
}

Derivation extend(Derivation base, const std::vector<Stage>& more) {
  base.stages.insert(base.stages.end(), more.begin(), more.end());
  return base;
}

}  // namespace wolvan
