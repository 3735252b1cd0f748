#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wolvan/congruence.hpp"
#include "wolvan/io.hpp"
#include "wolvan/modmath.hpp"

namespace wolvan {

/// Primes in [lo, hi) in increasing order, by a segmented sieve.
/// lo below 2 is treated as 2. Throws std::invalid_argument for hi > 2^63.
std::vector<std::uint64_t> sieve(std::uint64_t lo, std::uint64_t hi);
/// Streams the primes of [lo, hi) to f in order; stops when f returns false.
void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<bool(std::uint64_t)>& f);

struct ScheduleEntry {
  /// First prime the entry applies to.
  std::uint64_t threshold = 5;
  /// Catalog id, derivation or @file as given.
  std::string ref;
  NamedCongruence congruence;
};

/// Congruences by activation threshold; each applies until the next one.
struct Schedule {
  Target target = Target::bernoulli;
  std::vector<ScheduleEntry> entries;
};

/// Bernoulli: stafford_vandiver from 5, then bern6 at 1.6e10, bern9 at 2e10,
/// bern16 at 2.8e10, bern22 at 3.6e10, bern30 at 5e10.
/// Euler: euler3 from 5, then euler5 at 1e9, euler9 at 2^32, euler16 at 2^33,
/// euler24 at 2^34, euler33 at 2e10.
Schedule default_schedule(Target target);

/// One `THRESHOLD REF` pair per line; '#' starts a comment. THRESHOLD is a
/// decimal integer, `B^E` or `M e E` written as e.g. 1.6e10 (must be an
/// integer). Throws ParseError.
Schedule parse_schedule(std::string_view text, Target target);
/// "default" or a schedule file path.
Schedule load_schedule(std::string_view spec, Target target);

struct ScanConfig {
  /// Primes in [lo, hi).
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  Target target = Target::bernoulli;
  Schedule schedule;
  std::uint64_t near_miss_threshold = 50;
  std::uint64_t histogram_bins = 2000;
  unsigned workers = 1;
  /// Primes per ordered block; a checkpoint is written after each block.
  std::uint64_t checkpoint_every = 1000;
  std::filesystem::path checkpoint_path;
  /// JSON-lines records. The histogram goes to `<out>.histogram.csv` and
  /// the hit and near-miss summary to `<out>.summary.json`.
  std::filesystem::path output_path;
  /// Record every prime, not only hits and near misses.
  bool log_all = false;
};

/// Throws ConfigInvalid.
void validate(const ScanConfig& cfg);

/// SHA-256 (hex) of the canonical serialization of everything that affects
/// the outputs. Workers, block size and paths are excluded.
std::string config_digest(const ScanConfig& cfg);

struct ScanRecord {
  std::uint64_t p = 0;
  SymmetricResidue residue = 0;
  std::string congruence_id;
  bool hit = false;
  bool near_miss = false;
  /// For hits, the second congruence that confirmed the zero.
  std::string confirmed_by;
  friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

/// One JSON object, no trailing newline; integers as decimal strings.
std::string to_json_line(const ScanRecord& r);

/// Equal-width bins of symres/p over (-1/2, 1/2).
class Histogram {
 public:
  explicit Histogram(std::uint64_t bins = 2000);

  /// Bin holding v/p; for odd p, bin i is [i/bins - 1/2, (i+1)/bins - 1/2).
  std::uint64_t bin_of(SymmetricResidue v, std::uint64_t p) const;
  void add(SymmetricResidue v, std::uint64_t p);

  std::uint64_t bins() const noexcept { return counts_.size(); }
  std::uint64_t total() const noexcept { return total_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::vector<std::uint64_t>& counts() noexcept { return counts_; }
  void set_total(std::uint64_t total) noexcept { total_ = total; }

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Header `bin_lo,bin_hi,count,frequency` and one line per bin.
std::string histogram_report(const Histogram& h);

struct Checkpoint {
  static constexpr int kVersion = 1;
  std::string config_digest;
  /// Last prime whose result is included; 0 before the first block.
  std::uint64_t last_prime = 0;
  std::uint64_t processed = 0;
  bool complete = false;
  /// Length of the record file covered by this checkpoint.
  std::uint64_t output_bytes = 0;
  Histogram histogram;
  /// Hits and near misses so far.
  std::vector<ScanRecord> notable;
};

/// JSON with a SHA-256 checksum over the rest of the document.
std::string serialize_checkpoint(const Checkpoint& c);
/// Throws ChecksumMismatch when the checksum does not match or the text is
/// not a checkpoint.
Checkpoint parse_checkpoint(std::string_view text);

struct ScanResult {
  Histogram histogram;
  std::vector<ScanRecord> hits;
  /// Hits and near misses in order of p.
  std::vector<ScanRecord> notable;
  std::uint64_t processed = 0;
  std::uint64_t last_prime = 0;
  bool interrupted = false;
};

/// The residue of one prime: the scheduled congruence, falling back along the
/// fallback chain. Returns false when p is below the first threshold.
bool scan_residue(const Schedule& schedule, std::uint64_t p, SymmetricResidue& value, std::string& id);

/// Confirms a zero with a congruence other than `used`; returns its id.
/// Throws std::logic_error when the second congruence disagrees.
std::string confirm_hit(Target target, std::uint64_t p, const std::string& used);

/// In-memory scan. `sink` receives every persisted record in order of p.
/// Stops between blocks once `stop` is set.
ScanResult scan(const ScanConfig& cfg, const std::function<void(const ScanRecord&)>& sink = {},
                const std::atomic<bool>* stop = nullptr);

/// File-backed scan: records to output_path, checkpoint after every block,
/// histogram and summary at the end. With `resume`, continues from the
/// checkpoint (ChecksumMismatch, ConfigDrift); a complete checkpoint only
/// rewrites the final outputs. Returns with `interrupted` set when stopped.
ScanResult run_scan(const ScanConfig& cfg, bool resume, const std::atomic<bool>* stop = nullptr);

std::filesystem::path histogram_path(const ScanConfig& cfg);
std::filesystem::path summary_path(const ScanConfig& cfg);

}  // namespace wolvan
