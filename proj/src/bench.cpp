#include "cloudtree/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "cloudtree/bs_tree.hpp"
#include "cloudtree/memory_store.hpp"
#include "cloudtree/netkv.hpp"
#include "cloudtree/prefix_tree.hpp"

namespace cloudtree::bench {

namespace {

// Bounded draw via modulo: biased by < 2^-40 for the ranges used here, and
// identical on every platform, unlike std::uniform_int_distribution.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

}  // namespace

std::vector<std::int64_t> gen_balanced_order(std::size_t count) {
  if (count < 1) raise(ErrorCode::InvalidArgument, "count must be >= 1");
  std::vector<std::int64_t> out;
  out.reserve(count);
  // explicit stack to keep huge counts off the call stack
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges{
      {0, static_cast<std::int64_t>(count) - 1}};
  while (!ranges.empty()) {
    auto [lo, hi] = ranges.back();
    ranges.pop_back();
    if (lo > hi) continue;
    std::int64_t mid = lo + (hi - lo) / 2;
    out.push_back(mid);
    ranges.emplace_back(mid + 1, hi);  // right half is popped after the left
    ranges.emplace_back(lo, mid - 1);
  }
  return out;
}

std::vector<std::int64_t> gen_random_order(std::size_t count, std::uint64_t seed) {
  if (count < 1) raise(ErrorCode::InvalidArgument, "count must be >= 1");
  std::vector<std::int64_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<std::int64_t>(i);
  std::mt19937_64 rng(seed);
  for (std::size_t i = count - 1; i > 0; --i) {
    std::size_t j = static_cast<std::size_t>(draw(rng, i + 1));
    std::swap(out[i], out[j]);
  }
  return out;
}

std::vector<std::string> split_corpus_text(std::string_view text, std::size_t string_len) {
  if (string_len < 1) raise(ErrorCode::InvalidArgument, "string_len must be >= 1");
  std::vector<std::string> out;
  out.reserve(text.size() / string_len);
  for (std::size_t off = 0; off + string_len <= text.size(); off += string_len) {
    std::string chunk(text.substr(off, string_len));
    for (char& c : chunk)
      if (c < 0x20 || c > 0x7e) c = '_';
    out.push_back(std::move(chunk));
  }
  return out;
}

std::vector<std::string> split_corpus(const std::string& path, std::size_t string_len) {
  if (string_len != 8 && string_len != 16 && string_len != 32)
    std::cerr << "warning: unusual string length " << string_len << "\n";
  std::ifstream file(path, std::ios::binary);
  if (!file) raise(ErrorCode::IoError, "cannot open corpus '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  if (file.bad()) raise(ErrorCode::IoError, "read from '" + path + "' failed");
  return split_corpus_text(buf.str(), string_len);
}

std::string generate_corpus_text(std::size_t bytes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::string text;
  text.reserve(bytes + 16);
  while (text.size() < bytes) {
    std::size_t word_len = 2 + static_cast<std::size_t>(draw(rng, 9));
    for (std::size_t i = 0; i < word_len; ++i)
      text.push_back(static_cast<char>('a' + draw(rng, 26)));
    text.push_back(' ');
  }
  text.resize(bytes);
  return text;
}

BackendSpec parse_backend(const std::string& text) {
  if (text == "memory") return BackendSpec{BackendKind::Memory, ""};
  if (text.rfind("file:", 0) == 0) return BackendSpec{BackendKind::File, text.substr(5)};
  if (text.rfind("tcp:", 0) == 0) return BackendSpec{BackendKind::Remote, text.substr(4)};
  raise(ErrorCode::InvalidArgument,
        "backend must be memory, file:<path> or tcp:<addr>, got '" + text + "'");
}

std::shared_ptr<Store> make_backend(const BackendSpec& spec, const StoreConfig& config) {
  switch (spec.kind) {
    case BackendKind::Memory: return std::make_shared<MemoryStore>(config);
    case BackendKind::File: return std::make_shared<FileStore>(spec.target, config);
    case BackendKind::Remote: return std::make_shared<RemoteStore>(spec.target, config);
  }
  raise(ErrorCode::InvalidArgument, "unreachable backend kind");
}

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Insert: return "insert";
    case Phase::Query: return "query";
    case Phase::Delete: return "delete";
  }
  return "insert";
}

std::vector<Phase> parse_phases(const std::string& csv) {
  std::vector<Phase> phases;
  std::istringstream in(csv);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token == "insert") phases.push_back(Phase::Insert);
    else if (token == "query") phases.push_back(Phase::Query);
    else if (token == "delete") phases.push_back(Phase::Delete);
    else raise(ErrorCode::InvalidArgument, "unknown phase '" + token + "'");
  }
  if (phases.empty()) raise(ErrorCode::InvalidArgument, "no phases given");
  return phases;
}

namespace {

std::string flags_string(const CacheConfig& cache) {
  std::string out;
  auto add = [&](bool on, std::string_view name) {
    if (!on) return;
    if (!out.empty()) out += '+';
    out += name;
  };
  add(cache.caching_enabled, "cache");
  add(cache.prefetch_enabled, "prefetch");
  add(cache.aggregation_enabled, "aggregation");
  return out.empty() ? "none" : out;
}

double metrics_ms(const StoreMetrics& m) { return m.simulated_elapsed_ms; }

StoreMetrics delta(const StoreMetrics& after, const StoreMetrics& before) {
  StoreMetrics d;
  d.get = after.get - before.get;
  d.put = after.put - before.put;
  d.update = after.update - before.update;
  d.del = after.del - before.del;
  d.batch_get = after.batch_get - before.batch_get;
  d.batch_write = after.batch_write - before.batch_write;
  d.items_read = after.items_read - before.items_read;
  d.items_written = after.items_written - before.items_written;
  d.simulated_elapsed_ms = after.simulated_elapsed_ms - before.simulated_elapsed_ms;
  return d;
}

// Uniform tree operations over either member type so one phase runner
// serves both kinds.
struct TrieOps {
  PrefixTree tree;
  using Key = std::string;
  void insert(const Key& k) { tree.insert(k); }
  bool query(const Key& k) { return tree.query(k); }
  bool erase(const Key& k) { return tree.erase(k); }
  Session& session() { return tree.session(); }
};

struct BstOps {
  BSTree tree;
  using Key = std::int64_t;
  void insert(const Key& k) { tree.insert(k); }
  bool query(const Key& k) { return tree.query(k); }
  bool erase(const Key& k) { return tree.erase(k); }
  Session& session() { return tree.session(); }
};

template <typename Ops>
std::vector<PhaseStats> run_phases(Ops& ops,
                                   const std::vector<typename Ops::Key>& dataset,
                                   const WorkloadSpec& spec) {
  using Key = typename Ops::Key;
  std::vector<PhaseStats> stats;
  std::vector<Key> members;          // live members, insertion order
  std::set<Key> member_set;          // dedup guard (datasets may repeat)

  for (Phase phase : spec.phases) {
    PhaseStats ps;
    ps.phase = std::string(to_string(phase));
    StoreMetrics before = ops.session().metrics();
    std::vector<double> per_op_ms;
    auto wall_start = std::chrono::steady_clock::now();

    auto timed = [&](auto&& fn) {
      double t0 = metrics_ms(ops.session().metrics());
      fn();
      per_op_ms.push_back(metrics_ms(ops.session().metrics()) - t0);
    };

    switch (phase) {
      case Phase::Insert:
        for (const Key& k : dataset) {
          timed([&] { ops.insert(k); });
          if (member_set.insert(k).second) members.push_back(k);
        }
        break;
      case Phase::Query: {
        std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
        for (std::size_t i = 0; i < spec.sample_queries && !members.empty(); ++i) {
          const Key& k = members[draw(rng, members.size())];
          timed([&] { ops.query(k); });
        }
        break;
      }
      case Phase::Delete: {
        std::mt19937_64 rng(spec.seed ^ 0xda3e39cb94b95bdbull);
        std::vector<Key> victims = members;
        for (std::size_t i = victims.size(); i > 1; --i)
          std::swap(victims[i - 1], victims[draw(rng, i)]);
        if (victims.size() > spec.sample_queries) victims.resize(spec.sample_queries);
        for (const Key& k : victims) {
          timed([&] { ops.erase(k); });
          member_set.erase(k);
          members.erase(std::find(members.begin(), members.end(), k));
        }
        break;
      }
    }

    auto wall_end = std::chrono::steady_clock::now();
    ps.operations = per_op_ms.size();
    ps.requests = delta(ops.session().metrics(), before);
    ps.wall_ms = std::chrono::duration<double, std::milli>(wall_end - wall_start).count();
    if (!per_op_ms.empty()) {
      double total = 0;
      for (double v : per_op_ms) total += v;
      ps.mean_ms = total / static_cast<double>(per_op_ms.size());
      std::vector<double> sorted = per_op_ms;
      std::sort(sorted.begin(), sorted.end());
      std::size_t mid = sorted.size() / 2;
      ps.median_ms = sorted.size() % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
    }
    stats.push_back(std::move(ps));
  }
  return stats;
}

std::vector<PhaseStats> run_single(const WorkloadSpec& spec, const CacheConfig& cache,
                                   const std::string& tree_name) {
  auto backend = make_backend(spec.backend, spec.store);
  if (spec.tree == TreeKind::PrefixTree) {
    std::string text = spec.corpus_path.empty()
                           ? generate_corpus_text(spec.size * spec.string_len, spec.seed)
                           : std::string();
    std::vector<std::string> dataset =
        spec.corpus_path.empty() ? split_corpus_text(text, spec.string_len)
                                 : split_corpus(spec.corpus_path, spec.string_len);
    if (dataset.size() > spec.size) dataset.resize(spec.size);
    TrieOps ops{PrefixTree(backend, tree_name, /*create_new=*/true, cache)};
    auto stats = run_phases(ops, dataset, spec);
    ops.tree.close();
    return stats;
  }
  std::vector<std::int64_t> dataset = spec.order == IntOrder::Balanced
                                          ? gen_balanced_order(spec.size)
                                          : gen_random_order(spec.size, spec.seed);
  BstOps ops{BSTree(backend, tree_name, /*create_new=*/true, cache)};
  auto stats = run_phases(ops, dataset, spec);
  ops.tree.close();
  return stats;
}

double phase_cost(const PhaseStats& ps) {
  // simulated time, falling back to raw requests when rtt is zero
  return ps.requests.simulated_elapsed_ms > 0
             ? ps.requests.simulated_elapsed_ms
             : static_cast<double>(ps.requests.total_requests());
}

std::string default_tree_name(const WorkloadSpec& spec) {
  if (!spec.tree_name.empty()) return spec.tree_name;
  std::ostringstream name;
  name << "bench_" << to_string(spec.tree) << "_s" << spec.seed;
  return name.str();
}

}  // namespace

BenchReport run_workload(const WorkloadSpec& spec) {
  BenchReport report;
  if (spec.tree == TreeKind::PrefixTree) {
    report.dataset = (spec.corpus_path.empty() ? "synthetic-len" : "corpus-len") +
                     std::to_string(spec.string_len);
  } else {
    report.dataset = spec.order == IntOrder::Balanced ? "ints-balanced" : "ints-random";
  }
  report.size = spec.size;
  report.flags = flags_string(spec.cache);

  std::string name = default_tree_name(spec);
  report.phases = run_single(spec, spec.cache, spec.paired ? name + "_opt" : name);

  if (spec.paired) {
    CacheConfig off = spec.cache;
    off.caching_enabled = false;
    off.prefetch_enabled = false;
    off.aggregation_enabled = false;
    auto baseline = run_single(spec, off, name + "_base");
    double opt_total = 0, base_total = 0;
    for (std::size_t i = 0; i < report.phases.size() && i < baseline.size(); ++i) {
      double opt = phase_cost(report.phases[i]);
      double base = phase_cost(baseline[i]);
      if (opt > 0) report.phases[i].speedup = base / opt;
      opt_total += opt;
      base_total += base;
    }
    if (opt_total > 0) report.overall_speedup = base_total / opt_total;
  }
  return report;
}

namespace {

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

}  // namespace

std::string emit_report(const BenchReport& report, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "phase,dataset,size,flags,mean_ms,median_ms,requests_get,"
           "requests_batch_get,requests_put,requests_update,requests_delete,"
           "requests_batch_write,items_read,items_written,speedup\n";
    for (const PhaseStats& ps : report.phases) {
      out << ps.phase << ',' << report.dataset << ',' << report.size << ','
          << report.flags << ',' << fixed(ps.mean_ms, 6) << ','
          << fixed(ps.median_ms, 6) << ',' << ps.requests.get << ','
          << ps.requests.batch_get << ',' << ps.requests.put << ','
          << ps.requests.update << ',' << ps.requests.del << ','
          << ps.requests.batch_write << ',' << ps.requests.items_read << ','
          << ps.requests.items_written << ','
          << (ps.speedup ? fixed(*ps.speedup, 4) : "") << '\n';
    }
    return out.str();
  }

  out << "dataset " << report.dataset << "  size " << report.size << "  flags "
      << report.flags << "\n";
  out << "phase    ops      mean_ms    median_ms  requests   wall_ms";
  out << (report.overall_speedup ? "    speedup\n" : "\n");
  for (const PhaseStats& ps : report.phases) {
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %-8zu %-10.3f %-10.3f %-10llu %-10.1f",
                  ps.phase.c_str(), ps.operations, ps.mean_ms, ps.median_ms,
                  static_cast<unsigned long long>(ps.requests.total_requests()),
                  ps.wall_ms);
    out << line;
    if (ps.speedup) out << ' ' << fixed(*ps.speedup, 2);
    out << '\n';
  }
  if (report.overall_speedup)
    out << "overall speedup " << fixed(*report.overall_speedup, 2) << "\n";
  return out.str();
}

}  // namespace cloudtree::bench
