#include "wolvan/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wolvan/catalog.hpp"
#include "wolvan/derivation.hpp"
#include "wolvan/error.hpp"

namespace wolvan {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) { throw ParseError("congruence file: " + what, 0); }

std::uint64_t to_u64(const ordered_json& v, const char* field) {
  if (!v.is_string()) fail(std::string(field) + " must be a decimal string");
  const std::string& s = v.get_ref<const std::string&>();
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) fail(std::string(field) + ": bad integer '" + s + "'");
  return out;
}

const ordered_json& at(const ordered_json& obj, const char* field) {
  if (!obj.is_object() || !obj.contains(field)) fail(std::string("missing field '") + field + "'");
  return obj.at(field);
}

Fraction to_fraction(const ordered_json& v, const char* field) {
  if (!v.is_string()) fail(std::string(field) + " must be a fraction string");
  try {
    return Fraction::parse(v.get_ref<const std::string&>());
  } catch (const std::exception& e) {
    fail(std::string(field) + ": " + e.what());
  }
}

}  // namespace

std::string congruence_to_json(const SymbolicCongruence& c, std::string_view id) {
  ordered_json j;
  j["format"] = "wolvan-congruence";
  j["version"] = 1;
  if (!id.empty()) j["id"] = std::string(id);
  ordered_json left;
  if (auto* b = std::get_if<BernoulliCkabc>(&c.left)) {
    left["kind"] = "bernoulli";
    left["a"] = std::to_string(b->a);
    left["b"] = std::to_string(b->b);
    left["c"] = std::to_string(b->c);
  } else if (std::holds_alternative<EulerGlaisher>(c.left)) {
    left["kind"] = "euler_glaisher";
  } else {
    left["kind"] = "euler_mcintosh";
  }
  j["left"] = left;
  j["parity"] = c.parity == Parity::odd ? "odd" : "even";
  ordered_json excl = ordered_json::array();
  for (auto e : c.validity.exclusions) excl.push_back(std::to_string(e));
  j["validity"] = {{"min_prime", std::to_string(c.validity.min_prime)}, {"exclusions", excl}};
  ordered_json terms = ordered_json::array();
  for (const auto& t : c.terms) {
    ordered_json coeff = ordered_json::array();
    for (const auto& [base, count] : t.coeff.entries())
      for (std::int64_t i = 0; i < (count < 0 ? -count : count); ++i)
        coeff.push_back(ordered_json::array({count < 0 ? -1 : 1, std::to_string(base)}));
    ordered_json term;
    term["coeff"] = coeff;
    term["lo"] = t.interval.lo.str();
    term["hi"] = t.interval.hi.str();
    term["alternating"] = t.alternating;
    terms.push_back(term);
  }
  j["terms"] = terms;
  return j.dump(1) + "\n";
}

SymbolicCongruence congruence_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("congruence file: ") + e.what(), e.byte);
  }
  if (at(j, "format") != "wolvan-congruence") fail("unknown format");
  if (at(j, "version") != 1) fail("unsupported version");

  SymbolicCongruence c;
  const auto& left = at(j, "left");
  const auto& kind = at(left, "kind");
  if (kind == "bernoulli")
    c.left = BernoulliCkabc{to_u64(at(left, "a"), "a"), to_u64(at(left, "b"), "b"), to_u64(at(left, "c"), "c")};
  else if (kind == "euler_glaisher")
    c.left = EulerGlaisher{};
  else if (kind == "euler_mcintosh")
    c.left = EulerMcIntosh{};
  else
    fail("unknown left factor kind");

  const auto& parity = at(j, "parity");
  if (parity == "odd")
    c.parity = Parity::odd;
  else if (parity == "even")
    c.parity = Parity::even;
  else
    fail("parity must be odd or even");
  if (c.parity != parity_of(c.target())) fail("parity does not match the left factor");

  const auto& validity = at(j, "validity");
  c.validity.min_prime = to_u64(at(validity, "min_prime"), "min_prime");
  const auto& excl = at(validity, "exclusions");
  if (!excl.is_array()) fail("exclusions must be an array");
  for (const auto& e : excl) c.validity.exclusions.push_back(to_u64(e, "exclusion"));

  const auto& terms = at(j, "terms");
  if (!terms.is_array()) fail("terms must be an array");
  for (const auto& t : terms) {
    SumTerm term;
    const auto& coeff = at(t, "coeff");
    if (!coeff.is_array()) fail("coeff must be an array");
    for (const auto& pair : coeff) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer()) fail("coeff entries are [sign, base]");
      std::int64_t sign = pair[0].get<std::int64_t>();
      if (sign != 1 && sign != -1) fail("coefficient sign must be 1 or -1");
      std::uint64_t base = to_u64(pair[1], "base");
      if (base == 0) fail("coefficient base must be positive");
      term.coeff += PowerCoefficient::monomial(base, sign);
    }
    term.interval = Interval{to_fraction(at(t, "lo"), "lo"), to_fraction(at(t, "hi"), "hi")};
    if (term.interval.lo < Fraction(0) || term.interval.hi > Fraction(1) || !(term.interval.lo < term.interval.hi))
      fail("interval must satisfy 0 <= lo < hi <= 1");
    const auto& alt = at(t, "alternating");
    if (!alt.is_boolean()) fail("alternating must be true or false");
    term.alternating = alt.get<bool>();
    c.terms.push_back(std::move(term));
  }
  return c;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

NamedCongruence resolve_congruence(std::string_view ref) {
  if (ref.starts_with("@")) {
    std::filesystem::path path(ref.substr(1));
    std::string text = read_file(path);
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
      auto j = ordered_json::parse(text, nullptr, false);
      std::string id = path.filename().string();
      if (j.is_object() && j.contains("id") && j["id"].is_string()) id = j["id"].get<std::string>();
      return {id, congruence_from_json(text)};
    }
    std::string body;
    for (char ch : text)
      if (ch != ' ' && ch != '\t' && ch != '\r' && ch != '\n') body += ch;
    Derivation d = parse_derivation(body);
    return {path.filename().string(), replay(d)};
  }
  if (ref.find(':') != std::string_view::npos) return {std::string(ref), replay(parse_derivation(ref))};
  const auto& entry = catalog_entry(ref);
  return {entry.id, entry.congruence};
}

}  // namespace wolvan
