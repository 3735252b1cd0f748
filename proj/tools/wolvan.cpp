// wolvan: search for congruences, evaluate them, and scan prime ranges.

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "wolvan/catalog.hpp"
#include "wolvan/error.hpp"
#include "wolvan/eval.hpp"
#include "wolvan/io.hpp"
#include "wolvan/oracle.hpp"
#include "wolvan/scanner.hpp"
#include "wolvan/search.hpp"

using namespace wolvan;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInterrupted = 3;

std::atomic<bool> g_stop{false};
static_assert(std::atomic<bool>::is_always_lock_free);

extern "C" void on_signal(int) { g_stop = true; }

Target parse_target(const std::string& s) {
  if (s == "bernoulli") return Target::bernoulli;
  if (s == "euler") return Target::euler;
  throw ConfigInvalid("target must be bernoulli or euler");
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigInvalid("range must be LO:HI");
  try {
    std::size_t a = 0, b = 0;
    std::uint64_t lo = std::stoull(s.substr(0, colon), &a);
    std::uint64_t hi = std::stoull(s.substr(colon + 1), &b);
    if (a != colon || b != s.size() - colon - 1) throw std::invalid_argument("trailing text");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ConfigInvalid("range must be LO:HI with decimal integers");
  }
}

std::vector<std::uint64_t> parse_bounds(const std::string& s) {
  std::vector<std::uint64_t> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    try {
      out.push_back(std::stoull(s.substr(pos, comma - pos)));
    } catch (const std::logic_error&) {
      throw ConfigInvalid("bounds must be a comma-separated list of integers");
    }
    pos = comma + 1;
  }
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!(out << text)) throw std::runtime_error("cannot write " + path);
}

std::string describe_congruence(const NamedCongruence& n) {
  const auto& c = n.congruence;
  std::ostringstream s;
  s << "id: " << n.id << '\n'
    << "left: " << describe(c.left) << '\n'
    << "terms: " << c.terms.size() << '\n'
    << "cost: " << cost(c).str() << '\n'
    << "max denominator: " << max_denominator(c) << '\n'
    << "valid for p >= " << c.validity.min_prime;
  for (auto e : c.validity.exclusions) s << ", p not dividing " << e;
  s << '\n' << format_terms(c.terms) << '\n';
  try {
    auto rel = integer_form(c);
    s << "integer form: " << rel.left << " X =";
    for (auto k : rel.coeffs) s << ' ' << k;
    s << '\n';
  } catch (const std::exception&) {
  }
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Congruences for B_{p-3} and E_{p-3} mod p, and prime-range scans"};
  app.require_subcommand(1);

  // search
  auto* search = app.add_subcommand("search", "Search for low-cost congruences");
  std::string seed = "vandiver", bounds_text, greedy_text, search_out;
  std::uint64_t budget = 10'000'000;
  unsigned search_workers = 1;
  bool no_prune = false;
  search->add_option("--seed", seed, "Catalog id to start from")->capture_default_str();
  search->add_option("--bounds", bounds_text, "Exhaustive search: per-step subdivision bounds, e.g. 2,3,2,2,5");
  search->add_option("--greedy", greedy_text, "Greedy search, e.g. D=8,lambda=1,rounds=100");
  search->add_option("--budget", budget, "Node budget for the exhaustive search")->capture_default_str();
  search->add_option("--workers", search_workers, "Worker threads")->capture_default_str();
  search->add_flag("--no-prune", no_prune, "Disable cross-layer pruning");
  search->add_option("--out", search_out, "Output file (ledger or derivation); stdout by default");

  // show
  auto* show = app.add_subcommand("show", "Describe a congruence");
  std::string show_ref;
  bool show_json = false;
  show->add_option("congruence", show_ref, "Catalog id, seed:script derivation or @file")->required();
  show->add_flag("--json", show_json, "Print the congruence file format");

  // residue
  auto* res = app.add_subcommand("residue", "Symmetric residue of B_{p-3} or E_{p-3} mod p");
  std::string res_ref;
  std::vector<std::uint64_t> res_primes;
  bool res_oracle = false;
  res->add_option("--congruence", res_ref, "Congruence to use; default is the fallback chain of the target");
  std::string res_target = "bernoulli";
  res->add_option("--target", res_target, "bernoulli or euler")->capture_default_str();
  res->add_flag("--oracle", res_oracle, "Also compute the value from the exact recurrence (small p)");
  res->add_option("primes", res_primes, "Primes")->required();

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "Scan a prime range");
  std::string target_text = "bernoulli", range_text, schedule_text = "default", checkpoint, out;
  ScanConfig cfg;
  bool resume = false;
  scan_cmd->add_option("--target", target_text, "bernoulli or euler")->capture_default_str();
  scan_cmd->add_option("--range", range_text, "LO:HI, primes in [LO, HI)")->required();
  scan_cmd->add_option("--schedule", schedule_text, "Schedule file or 'default'")->capture_default_str();
  scan_cmd->add_option("--near-miss", cfg.near_miss_threshold, "Record primes with |residue| below this")
      ->capture_default_str();
  scan_cmd->add_option("--bins", cfg.histogram_bins, "Histogram bins")->capture_default_str();
  scan_cmd->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
  scan_cmd->add_option("--checkpoint-every", cfg.checkpoint_every, "Primes per checkpoint")->capture_default_str();
  scan_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  scan_cmd->add_option("--out", out, "JSON-lines record file")->required();
  scan_cmd->add_flag("--resume", resume, "Continue from the checkpoint");
  scan_cmd->add_flag("--log-all", cfg.log_all, "Record every prime");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*search) {
      if (bounds_text.empty() == greedy_text.empty()) throw ConfigInvalid("give exactly one of --bounds and --greedy");
      if (!greedy_text.empty()) {
        GreedyParams p = parse_greedy_spec(greedy_text);
        p.seed_id = seed;
        p.workers = search_workers;
        auto r = greedy_search(p);
        for (std::size_t i = 0; i < r.history.size(); ++i) std::cerr << "round " << i << " cost " << r.history[i].str() << '\n';
        write_output(search_out, serialize(r.derivation) + "\n");
      } else {
        ExhaustiveParams p;
        p.seed_id = seed;
        p.bounds = parse_bounds(bounds_text);
        p.budget = budget;
        p.workers = search_workers;
        p.prune = !no_prune;
        auto ledger = exhaustive_search(p);
        std::cerr << ledger.nodes << " nodes" << (ledger.partial ? ", budget exhausted" : "") << '\n';
        write_output(search_out, format_ledger(ledger));
      }
      return 0;
    }
    if (*show) {
      auto n = resolve_congruence(show_ref);
      std::cout << (show_json ? congruence_to_json(n.congruence, n.id) : describe_congruence(n));
      return 0;
    }
    if (*res) {
      Target target = parse_target(res_target);
      std::optional<NamedCongruence> named;
      if (!res_ref.empty()) {
        named = resolve_congruence(res_ref);
        target = named->congruence.target();
      }
      for (auto p : res_primes) {
        ResidueResult r;
        if (named) {
          r = {residue(p, named->congruence), named->id};
        } else {
          r = residue_with_fallback(p, fallback_chain(target).front());
        }
        std::cout << p << ' ' << r.value << ' ' << r.congruence_id;
        std::uint64_t cap = target == Target::bernoulli ? oracle::kMaxBernoulli : oracle::kMaxEuler;
        if (res_oracle && p - 3 > cap) {
          std::cout << " oracle -";
        } else if (res_oracle) {
          Residue exact = target == Target::bernoulli ? oracle::reduce(oracle::bernoulli_exact(p - 3), p)
                                                      : oracle::reduce(oracle::euler_exact(p - 3), p);
          std::cout << " oracle " << symres(exact, Modulus(p));
        }
        std::cout << '\n';
      }
      return 0;
    }
    if (*scan_cmd) {
      cfg.target = parse_target(target_text);
      std::tie(cfg.lo, cfg.hi) = parse_range(range_text);
      cfg.schedule = load_schedule(schedule_text, cfg.target);
      cfg.checkpoint_path = checkpoint;
      cfg.output_path = out;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      auto r = run_scan(cfg, resume, &g_stop);
      if (r.interrupted) {
        std::cerr << "interrupted after p = " << r.last_prime << "; rerun with --resume\n";
        return kExitInterrupted;
      }
      std::cerr << r.processed << " primes, " << r.hits.size() << " hits, " << r.notable.size() - r.hits.size()
                << " near misses\n";
      return 0;
    }
  } catch (const ConfigInvalid& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigDrift& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ChecksumMismatch& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnknownSeed& e) {
    std::cerr << "configuration error: unknown congruence " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
