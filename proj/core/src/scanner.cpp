#include "wolvan/scanner.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "wolvan/catalog.hpp"
#include "wolvan/error.hpp"
#include "wolvan/eval.hpp"

namespace wolvan {

namespace {

using nlohmann::ordered_json;

constexpr std::uint64_t kSieveLimit = std::uint64_t{1} << 63;
constexpr std::uint64_t kSegmentOdds = std::uint64_t{1} << 18;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Odd primes up to n (inclusive), by a plain odd-only sieve.
std::vector<std::uint32_t> small_odd_primes(std::uint64_t n) {
  std::vector<std::uint32_t> out;
  if (n < 3) return out;
  std::vector<bool> composite((n - 1) / 2, false);  // index i <-> 2i + 3
  for (std::uint64_t i = 0; i < composite.size(); ++i) {
    if (composite[i]) continue;
    std::uint64_t q = 2 * i + 3;
    out.push_back(static_cast<std::uint32_t>(q));
    for (std::uint64_t j = (q * q - 3) / 2; j < composite.size(); j += q) composite[j] = true;
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

const char* target_name(Target t) { return t == Target::bernoulli ? "bernoulli" : "euler"; }

std::uint64_t parse_u64(std::string_view s, std::size_t pos, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'", pos);
  return v;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::size_t pos) {
  unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
  if (r >> 64) throw ParseError("threshold out of range", pos);
  return static_cast<std::uint64_t>(r);
}

// "16000000000", "2^32", "1.6e10".
std::uint64_t parse_threshold(std::string_view s, std::size_t pos) {
  if (auto caret = s.find('^'); caret != std::string_view::npos) {
    std::uint64_t base = parse_u64(s.substr(0, caret), pos, "threshold base");
    std::uint64_t exp = parse_u64(s.substr(caret + 1), pos, "threshold exponent");
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < exp; ++i) v = checked_mul(v, base, pos);
    return v;
  }
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view mant = s.substr(0, e);
    std::uint64_t exp = parse_u64(s.substr(e + 1), pos, "threshold exponent");
    std::string digits;
    std::uint64_t frac = 0;
    if (auto dot = mant.find('.'); dot != std::string_view::npos) {
      digits = std::string(mant.substr(0, dot)) + std::string(mant.substr(dot + 1));
      frac = mant.size() - dot - 1;
    } else {
      digits = std::string(mant);
    }
    if (frac > exp) throw ParseError("threshold is not an integer", pos);
    std::uint64_t v = parse_u64(digits, pos, "threshold mantissa");
    for (std::uint64_t i = 0; i < exp - frac; ++i) v = checked_mul(v, 10, pos);
    return v;
  }
  return parse_u64(s, pos, "threshold");
}

ordered_json record_json(const ScanRecord& r) {
  ordered_json j;
  j["p"] = std::to_string(r.p);
  j["residue"] = std::to_string(r.residue);
  j["congruence"] = r.congruence_id;
  j["hit"] = r.hit;
  j["near_miss"] = r.near_miss;
  if (!r.confirmed_by.empty()) j["confirmed_by"] = r.confirmed_by;
  return j;
}

std::uint64_t json_u64(const ordered_json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_string()) throw ChecksumMismatch(std::string("checkpoint: bad ") + field);
  const auto& s = j.at(field).get_ref<const std::string&>();
  try {
    return parse_u64(s, 0, field);
  } catch (const ParseError&) {
    throw ChecksumMismatch(std::string("checkpoint: bad ") + field);
  }
}

ScanRecord record_from_json(const ordered_json& j) {
  ScanRecord r;
  r.p = json_u64(j, "p");
  const auto& v = j.at("residue").get_ref<const std::string&>();
  std::int64_t residue = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), residue);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ChecksumMismatch("checkpoint: bad residue");
  r.residue = residue;
  r.congruence_id = j.at("congruence").get<std::string>();
  r.hit = j.at("hit").get<bool>();
  r.near_miss = j.at("near_miss").get<bool>();
  if (j.contains("confirmed_by")) r.confirmed_by = j.at("confirmed_by").get<std::string>();
  return r;
}

struct Outcome {
  bool used = false;
  SymmetricResidue value = 0;
  std::string id;
  std::string confirmed_by;
};

Outcome evaluate_prime(const ScanConfig& cfg, std::uint64_t p) {
  Outcome o;
  o.used = scan_residue(cfg.schedule, p, o.value, o.id);
  if (o.used && o.value == 0) o.confirmed_by = confirm_hit(cfg.target, p, o.id);
  return o;
}

void evaluate_block(const ScanConfig& cfg, const std::vector<std::uint64_t>& primes, std::vector<Outcome>& out) {
  out.assign(primes.size(), Outcome{});
  unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(primes.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < primes.size(); ++i) out[i] = evaluate_prime(cfg, primes[i]);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= primes.size()) return;
      try {
        out[i] = evaluate_prime(cfg, primes[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = primes.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct ScanState {
  Histogram histogram;
  std::vector<ScanRecord> notable;
  std::uint64_t last_prime = 0;
  std::uint64_t processed = 0;
};

// Scans primes in [from, cfg.hi) in blocks. After every block the records go
// to `sink` in order of p and `on_block` sees the updated state. Returns
// false when stopped early.
bool scan_blocks(const ScanConfig& cfg, ScanState& state, std::uint64_t from,
                 const std::function<void(const ScanRecord&)>& sink, const std::function<void(const ScanState&)>& on_block,
                 const std::atomic<bool>* stop) {
  std::uint64_t first_threshold = cfg.schedule.entries.front().threshold;
  from = std::max(from, first_threshold);
  if (from >= cfg.hi) return true;
  std::vector<std::uint64_t> block;
  std::vector<Outcome> outcomes;
  bool stopped = false;

  auto flush = [&] {
    evaluate_block(cfg, block, outcomes);
    for (std::size_t i = 0; i < block.size(); ++i) {
      const auto& o = outcomes[i];
      if (!o.used) continue;
      state.histogram.add(o.value, block[i]);
      ++state.processed;
      ScanRecord r;
      r.p = block[i];
      r.residue = o.value;
      r.congruence_id = o.id;
      r.hit = o.value == 0;
      std::uint64_t mag = o.value < 0 ? static_cast<std::uint64_t>(-o.value) : static_cast<std::uint64_t>(o.value);
      r.near_miss = !r.hit && mag < cfg.near_miss_threshold;
      r.confirmed_by = o.confirmed_by;
      if (r.hit || r.near_miss) state.notable.push_back(r);
      if ((r.hit || r.near_miss || cfg.log_all) && sink) sink(r);
    }
    state.last_prime = block.back();
    block.clear();
    if (on_block) on_block(state);
  };

  for_each_prime(from, cfg.hi, [&](std::uint64_t p) {
    block.push_back(p);
    if (block.size() >= cfg.checkpoint_every) {
      flush();
      if (stop && stop->load()) {
        stopped = true;
        return false;
      }
    }
    return true;
  });
  if (stopped) return false;
  if (!block.empty()) flush();
  return true;
}

ScanResult result_of(const ScanState& state, bool interrupted) {
  ScanResult r;
  r.histogram = state.histogram;
  r.notable = state.notable;
  for (const auto& rec : state.notable)
    if (rec.hit) r.hits.push_back(rec);
  r.processed = state.processed;
  r.last_prime = state.last_prime;
  r.interrupted = interrupted;
  return r;
}

void sync_file(std::FILE* f, const std::filesystem::path& path) {
  if (std::fflush(f) != 0 || ::fsync(::fileno(f)) != 0) throw std::runtime_error("cannot write " + path.string());
}

// Writes through a temporary file and a rename, so a crash leaves either the
// old or the new content.
void write_atomically(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot write " + tmp.string());
  bool ok = std::fwrite(content.data(), 1, content.size(), f) == content.size();
  ok = ok && std::fflush(f) == 0 && ::fsync(::fileno(f)) == 0;
  ok = (std::fclose(f) == 0) && ok;
  if (!ok) throw std::runtime_error("cannot write " + tmp.string());
  std::filesystem::rename(tmp, path);
}

std::string summary_text(const ScanConfig& cfg, const ScanState& state) {
  ordered_json j;
  j["target"] = target_name(cfg.target);
  j["lo"] = std::to_string(cfg.lo);
  j["hi"] = std::to_string(cfg.hi);
  j["primes"] = std::to_string(state.processed);
  ordered_json hits = ordered_json::array();
  ordered_json near = ordered_json::array();
  for (const auto& r : state.notable) (r.hit ? hits : near).push_back(record_json(r));
  j["hits"] = hits;
  j["near_misses"] = near;
  return j.dump(1) + "\n";
}

void write_final_outputs(const ScanConfig& cfg, const ScanState& state) {
  write_atomically(histogram_path(cfg), histogram_report(state.histogram));
  write_atomically(summary_path(cfg), summary_text(cfg, state));
}

}  // namespace

// ---------------------------------------------------------------------------
// Sieve

void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<bool(std::uint64_t)>& f) {
  if (hi > kSieveLimit) throw std::invalid_argument("sieve: hi must not exceed 2^63");
  lo = std::max<std::uint64_t>(lo, 2);
  if (lo >= hi) return;
  if (lo == 2) {
    if (!f(2)) return;
    lo = 3;
  }
  if (lo % 2 == 0) ++lo;
  if (lo >= hi) return;
  const std::vector<std::uint32_t> base = small_odd_primes(isqrt(hi - 1));
  std::vector<unsigned char> composite(kSegmentOdds);

  // Odd numbers lo, lo + 2, ... in segments of kSegmentOdds.
  for (std::uint64_t seg = lo; seg < hi;) {
    std::uint64_t count = std::min<std::uint64_t>(kSegmentOdds, (hi - seg + 1) / 2);
    std::uint64_t last = seg + 2 * (count - 1);
    std::fill(composite.begin(), composite.begin() + static_cast<std::ptrdiff_t>(count), 0);
    for (std::uint32_t q32 : base) {
      std::uint64_t q = q32;
      if (q * q > last) break;
      std::uint64_t start = q * q;
      if (start < seg) {
        start = (seg + q - 1) / q * q;
        if (start % 2 == 0) start += q;
      }
      for (std::uint64_t j = (start - seg) / 2; j < count; j += q) composite[j] = 1;
    }
    for (std::uint64_t j = 0; j < count; ++j)
      if (!composite[j] && !f(seg + 2 * j)) return;
    if (last + 2 < last) break;
    seg = last + 2;
  }
}

std::vector<std::uint64_t> sieve(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for_each_prime(lo, hi, [&](std::uint64_t p) {
    out.push_back(p);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Schedules

Schedule default_schedule(Target target) {
  const std::vector<std::pair<std::uint64_t, const char*>> bern{
      {5, "stafford_vandiver"}, {16'000'000'000, "bern6"},  {20'000'000'000, "bern9"},
      {28'000'000'000, "bern16"}, {36'000'000'000, "bern22"}, {50'000'000'000, "bern30"}};
  const std::vector<std::pair<std::uint64_t, const char*>> euler{
      {5, "euler3"},           {1'000'000'000, "euler5"},  {std::uint64_t{1} << 32, "euler9"},
      {std::uint64_t{1} << 33, "euler16"}, {std::uint64_t{1} << 34, "euler24"}, {20'000'000'000, "euler33"}};
  Schedule s;
  s.target = target;
  for (const auto& [threshold, id] : target == Target::bernoulli ? bern : euler)
    s.entries.push_back({threshold, id, resolve_congruence(id)});
  return s;
}

Schedule parse_schedule(std::string_view text, Target target) {
  Schedule s;
  s.target = target;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::istringstream in{std::string(line)};
    std::string threshold, ref, extra;
    if (in >> threshold) {
      if (!(in >> ref)) throw ParseError("schedule line needs THRESHOLD REF", pos);
      if (in >> extra) throw ParseError("unexpected text '" + extra + "' in schedule", pos);
      ScheduleEntry e;
      e.threshold = parse_threshold(threshold, pos);
      e.ref = ref;
      e.congruence = resolve_congruence(ref);
      s.entries.push_back(std::move(e));
    }
    pos = eol + 1;
  }
  return s;
}

Schedule load_schedule(std::string_view spec, Target target) {
  if (spec == "default") return default_schedule(target);
  return parse_schedule(read_file(std::filesystem::path(spec)), target);
}

// ---------------------------------------------------------------------------
// Configuration

void validate(const ScanConfig& cfg) {
  if (cfg.lo >= cfg.hi) throw ConfigInvalid("range must satisfy lo < hi");
  if (cfg.hi > kSieveLimit) throw ConfigInvalid("range must end at or below 2^63");
  if (cfg.histogram_bins == 0) throw ConfigInvalid("histogram needs at least one bin");
  if (cfg.workers == 0) throw ConfigInvalid("workers must be positive");
  if (cfg.checkpoint_every == 0) throw ConfigInvalid("checkpoint interval must be positive");
  if (cfg.schedule.target != cfg.target) throw ConfigInvalid("schedule target differs from scan target");
  if (cfg.schedule.entries.empty()) throw ConfigInvalid("schedule is empty");
  std::uint64_t prev = 0;
  for (const auto& e : cfg.schedule.entries) {
    if (e.threshold < 5) throw ConfigInvalid("schedule thresholds start at 5");
    if (e.threshold <= prev && &e != &cfg.schedule.entries.front())
      throw ConfigInvalid("schedule thresholds must be strictly increasing");
    if (e.congruence.congruence.target() != cfg.target)
      throw ConfigInvalid("congruence " + e.congruence.id + " has the wrong target");
    if (e.congruence.congruence.terms.empty()) throw ConfigInvalid("congruence " + e.congruence.id + " has no terms");
    prev = e.threshold;
  }
}

std::string config_digest(const ScanConfig& cfg) {
  std::ostringstream s;
  s << "wolvan-scan " << Checkpoint::kVersion << '\n'
    << "target " << target_name(cfg.target) << '\n'
    << "range " << cfg.lo << ' ' << cfg.hi << '\n'
    << "near_miss " << cfg.near_miss_threshold << '\n'
    << "bins " << cfg.histogram_bins << '\n'
    << "log_all " << cfg.log_all << '\n';
  for (const auto& e : cfg.schedule.entries) {
    const auto& c = e.congruence.congruence;
    s << "entry " << e.threshold << ' ' << e.congruence.id << '\n'
      << "  left " << describe(c.left);
    if (auto* b = std::get_if<BernoulliCkabc>(&c.left)) s << ' ' << b->a << ' ' << b->b << ' ' << b->c;
    s << "\n  validity " << c.validity.min_prime;
    for (auto x : c.validity.exclusions) s << ' ' << x;
    s << "\n  terms " << format_terms(c.terms) << '\n';
  }
  return sha256_hex(s.str());
}

// ---------------------------------------------------------------------------
// Records and histogram

std::string to_json_line(const ScanRecord& r) { return record_json(r).dump(); }

Histogram::Histogram(std::uint64_t bins) : counts_(bins, 0) {}

std::uint64_t Histogram::bin_of(SymmetricResidue v, std::uint64_t p) const {
  // floor((v/p + 1/2) * bins) = floor((2v + p) * bins / 2p).
  __int128 num = (static_cast<__int128>(2) * v + p) * static_cast<__int128>(counts_.size());
  __int128 den = static_cast<__int128>(2) * p;
  __int128 idx = num / den;
  if (idx < 0) idx = 0;
  if (idx >= static_cast<__int128>(counts_.size())) idx = static_cast<__int128>(counts_.size()) - 1;
  return static_cast<std::uint64_t>(idx);
}

void Histogram::add(SymmetricResidue v, std::uint64_t p) {
  ++counts_[bin_of(v, p)];
  ++total_;
}

std::string histogram_report(const Histogram& h) {
  std::string out = "bin_lo,bin_hi,count,frequency\n";
  const double bins = static_cast<double>(h.bins());
  char line[128];
  for (std::uint64_t i = 0; i < h.bins(); ++i) {
    double lo = static_cast<double>(i) / bins - 0.5;
    double hi = static_cast<double>(i + 1) / bins - 0.5;
    double freq = h.total() ? static_cast<double>(h.counts()[i]) / static_cast<double>(h.total()) : 0.0;
    std::snprintf(line, sizeof line, "%.10g,%.10g,%llu,%.12g\n", lo, hi,
                  static_cast<unsigned long long>(h.counts()[i]), freq);
    out += line;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoints

std::string serialize_checkpoint(const Checkpoint& c) {
  ordered_json j;
  j["format"] = "wolvan-checkpoint";
  j["version"] = Checkpoint::kVersion;
  j["config_digest"] = c.config_digest;
  j["last_prime"] = std::to_string(c.last_prime);
  j["processed"] = std::to_string(c.processed);
  j["complete"] = c.complete;
  j["output_bytes"] = std::to_string(c.output_bytes);
  j["total"] = std::to_string(c.histogram.total());
  ordered_json counts = ordered_json::array();
  for (auto n : c.histogram.counts()) counts.push_back(std::to_string(n));
  j["counts"] = counts;
  ordered_json notable = ordered_json::array();
  for (const auto& r : c.notable) notable.push_back(record_json(r));
  j["notable"] = notable;
  std::string body = j.dump();
  j["checksum"] = sha256_hex(body);
  return j.dump(1) + "\n";
}

Checkpoint parse_checkpoint(std::string_view text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("checksum") || !j["checksum"].is_string())
    throw ChecksumMismatch("checkpoint is not readable");
  std::string checksum = j["checksum"].get<std::string>();
  j.erase("checksum");
  if (sha256_hex(j.dump()) != checksum) throw ChecksumMismatch("checkpoint checksum does not match its content");
  try {
    if (j.at("format") != "wolvan-checkpoint") throw ChecksumMismatch("not a checkpoint");
    if (j.at("version") != Checkpoint::kVersion) throw ChecksumMismatch("unsupported checkpoint version");
    Checkpoint c;
    c.config_digest = j.at("config_digest").get<std::string>();
    c.last_prime = json_u64(j, "last_prime");
    c.processed = json_u64(j, "processed");
    c.complete = j.at("complete").get<bool>();
    c.output_bytes = json_u64(j, "output_bytes");
    const auto& counts = j.at("counts");
    c.histogram = Histogram(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const auto& s = counts[i].get_ref<const std::string&>();
      c.histogram.counts()[i] = parse_u64(s, 0, "count");
    }
    c.histogram.set_total(json_u64(j, "total"));
    for (const auto& r : j.at("notable")) c.notable.push_back(record_from_json(r));
    return c;
  } catch (const ChecksumMismatch&) {
    throw;
  } catch (const std::exception& e) {
    throw ChecksumMismatch(std::string("checkpoint is malformed: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Scanning

bool scan_residue(const Schedule& schedule, std::uint64_t p, SymmetricResidue& value, std::string& id) {
  const ScheduleEntry* entry = nullptr;
  for (const auto& e : schedule.entries) {
    if (e.threshold > p) break;
    entry = &e;
  }
  if (!entry) return false;
  EvalOptions options;
  try {
    value = residue(p, entry->congruence.congruence, options);
    id = entry->congruence.id;
    return true;
  } catch (const LeftFactorVanishes&) {
  } catch (const ValidityViolated&) {
  }
  auto r = residue_with_fallback(p, fallback_chain(schedule.target).front(), options);
  value = r.value;
  id = r.congruence_id;
  return true;
}

std::string confirm_hit(Target target, std::uint64_t p, const std::string& used) {
  std::vector<std::string> order = fallback_chain(target);
  for (const auto& e : catalog())
    if (e.congruence.target() == target) order.push_back(e.id);
  const SymbolicCongruence* used_congruence = nullptr;
  for (const auto& e : catalog())
    if (e.id == used) used_congruence = &e.congruence;
  for (const auto& id : order) {
    const auto& entry = catalog_entry(id);
    if (entry.id == used || (used_congruence && entry.congruence == *used_congruence)) continue;
    SymmetricResidue v = 0;
    try {
      v = residue(p, entry.congruence);
    } catch (const LeftFactorVanishes&) {
      continue;
    } catch (const ValidityViolated&) {
      continue;
    }
    if (v != 0)
      throw std::logic_error("zero at p = " + std::to_string(p) + " from " + used + " not confirmed by " + entry.id);
    return entry.id;
  }
  throw std::logic_error("no second congruence is valid at p = " + std::to_string(p));
}

ScanResult scan(const ScanConfig& cfg, const std::function<void(const ScanRecord&)>& sink,
                const std::atomic<bool>* stop) {
  validate(cfg);
  ScanState state{Histogram(cfg.histogram_bins), {}, 0, 0};
  bool done = scan_blocks(cfg, state, cfg.lo, sink, {}, stop);
  return result_of(state, !done);
}

std::filesystem::path histogram_path(const ScanConfig& cfg) {
  auto p = cfg.output_path;
  p += ".histogram.csv";
  return p;
}

std::filesystem::path summary_path(const ScanConfig& cfg) {
  auto p = cfg.output_path;
  p += ".summary.json";
  return p;
}

ScanResult run_scan(const ScanConfig& cfg, bool resume, const std::atomic<bool>* stop) {
  validate(cfg);
  if (cfg.output_path.empty()) throw ConfigInvalid("an output path is required");
  if (cfg.checkpoint_path.empty()) throw ConfigInvalid("a checkpoint path is required");
  const std::string digest = config_digest(cfg);

  ScanState state{Histogram(cfg.histogram_bins), {}, 0, 0};
  std::uint64_t output_bytes = 0;
  std::uint64_t from = cfg.lo;
  if (resume) {
    Checkpoint c = parse_checkpoint(read_file(cfg.checkpoint_path));
    if (c.config_digest != digest) throw ConfigDrift("checkpoint was written for a different configuration");
    if (c.histogram.bins() != cfg.histogram_bins) throw ChecksumMismatch("checkpoint histogram has the wrong size");
    state.histogram = c.histogram;
    state.notable = c.notable;
    state.last_prime = c.last_prime;
    state.processed = c.processed;
    output_bytes = c.output_bytes;
    std::error_code ec;
    auto size = std::filesystem::file_size(cfg.output_path, ec);
    if (ec || size < output_bytes) throw ChecksumMismatch("record file is shorter than the checkpoint says");
    std::filesystem::resize_file(cfg.output_path, output_bytes);
    if (c.complete) {
      write_final_outputs(cfg, state);
      return result_of(state, false);
    }
    if (c.last_prime) from = c.last_prime + 1;
  }

  std::FILE* out = std::fopen(cfg.output_path.c_str(), resume ? "ab" : "wb");
  if (!out) throw std::runtime_error("cannot write " + cfg.output_path.string());
  struct Closer {
    std::FILE* f;
    ~Closer() { std::fclose(f); }
  } closer{out};

  auto checkpoint = [&](const ScanState& s, bool complete) {
    sync_file(out, cfg.output_path);
    Checkpoint c;
    c.config_digest = digest;
    c.last_prime = s.last_prime;
    c.processed = s.processed;
    c.complete = complete;
    c.output_bytes = output_bytes;
    c.histogram = s.histogram;
    c.notable = s.notable;
    write_atomically(cfg.checkpoint_path, serialize_checkpoint(c));
  };
  if (!resume) checkpoint(state, false);

  auto sink = [&](const ScanRecord& r) {
    std::string line = to_json_line(r) + "\n";
    if (std::fwrite(line.data(), 1, line.size(), out) != line.size())
      throw std::runtime_error("cannot write " + cfg.output_path.string());
    output_bytes += line.size();
  };
  bool done = scan_blocks(cfg, state, from, sink, [&](const ScanState& s) { checkpoint(s, false); }, stop);
  if (!done) return result_of(state, true);
  checkpoint(state, true);
  write_final_outputs(cfg, state);
  return result_of(state, false);
}

}  // namespace wolvan
