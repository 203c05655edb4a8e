#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cloudtree/cache.hpp"
#include "cloudtree/session.hpp"
#include "cloudtree/store.hpp"

namespace cloudtree::bench {

// Permutation of 0..count-1 whose in-order insertion builds a height-minimal
// BST: the median of the range first, then the left half, then the right.
std::vector<std::int64_t> gen_balanced_order(std::size_t count);

// Seeded Fisher-Yates permutation of 0..count-1. The generator (mt19937_64,
// modulo-bounded draws) is pinned so a seed means the same list everywhere.
std::vector<std::int64_t> gen_random_order(std::size_t count, std::uint64_t seed);

// Consecutive non-overlapping chunks of exactly string_len characters;
// a trailing partial chunk is dropped and bytes outside printable ASCII
// map to '_'. Lengths other than 8/16/32 warn on stderr but work.
std::vector<std::string> split_corpus(const std::string& path, std::size_t string_len);
std::vector<std::string> split_corpus_text(std::string_view text, std::size_t string_len);

// Seeded printable-ASCII filler text (lowercase words separated by spaces),
// a stand-in for a downloaded literature corpus.
std::string generate_corpus_text(std::size_t bytes, std::uint64_t seed);

enum class BackendKind { Memory, File, Remote };

struct BackendSpec {
  BackendKind kind = BackendKind::Memory;
  std::string target;  // file path or host:port
};

// "memory" | "file:<path>" | "tcp:<host:port>"
BackendSpec parse_backend(const std::string& text);
std::shared_ptr<Store> make_backend(const BackendSpec& spec, const StoreConfig& config);

enum class Phase { Insert, Query, Delete };

std::string_view to_string(Phase phase) noexcept;
std::vector<Phase> parse_phases(const std::string& csv);  // "insert,query,delete"

enum class IntOrder { Balanced, Random };

struct WorkloadSpec {
  TreeKind tree = TreeKind::PrefixTree;
  std::size_t size = 1000;     // strings to insert / integer count
  std::string corpus_path;     // prefix tree: empty means synthetic text
  std::size_t string_len = 8;  // prefix tree chunk length
  IntOrder order = IntOrder::Balanced;  // BST insertion order
  std::uint64_t seed = 1;
  std::vector<Phase> phases = {Phase::Insert, Phase::Query, Phase::Delete};
  std::size_t sample_queries = 200;  // query/delete sample size
  CacheConfig cache;
  StoreConfig store;
  BackendSpec backend;
  bool paired = false;  // also run with all optimizations off and report speedup
  std::string tree_name;  // default derived from the seed
};

struct PhaseStats {
  std::string phase;
  std::size_t operations = 0;
  double mean_ms = 0.0;    // simulated per-operation cost (requests x rtt)
  double median_ms = 0.0;
  StoreMetrics requests;   // per-phase deltas
  double wall_ms = 0.0;    // measured, reported only in table output
  std::optional<double> speedup;
};

struct BenchReport {
  std::string dataset;
  std::size_t size = 0;
  std::string flags;
  std::vector<PhaseStats> phases;
  std::optional<double> overall_speedup;
};

// Inserts the whole dataset, then samples `sample_queries` members for the
// query phase (uniform, seeded) and again for the delete phase (without
// replacement; deletes mutate). Metrics are measured per phase. With
// spec.paired a second run with every optimization off supplies the
// speedup figures from matching data and seeds.
BenchReport run_workload(const WorkloadSpec& spec);

enum class ReportFormat { Csv, Table };

std::string emit_report(const BenchReport& report, ReportFormat format);

}  // namespace cloudtree::bench
