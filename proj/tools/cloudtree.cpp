#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "cloudtree/bench.hpp"
#include "cloudtree/memory_store.hpp"
#include "cloudtree/netkv.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop = true; }

int cmd_bench(const cloudtree::bench::WorkloadSpec& spec, const std::string& out_path) {
  auto report = cloudtree::bench::run_workload(spec);
  std::cout << cloudtree::bench::emit_report(report, cloudtree::bench::ReportFormat::Table);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 1;
    }
    out << cloudtree::bench::emit_report(report, cloudtree::bench::ReportFormat::Csv);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_serve(const std::string& bind, const std::string& snapshot, double rtt_ms,
              const std::string& token) {
  auto spec = cloudtree::bench::parse_backend("tcp:" + bind);
  auto colon = spec.target.rfind(':');
  cloudtree::KvServer::Options options;
  options.host = spec.target.substr(0, colon);
  options.port = static_cast<std::uint16_t>(std::stoi(spec.target.substr(colon + 1)));
  options.rtt_ms = rtt_ms;
  options.token = token;
  options.snapshot_path = snapshot.empty() ? cloudtree::env_snapshot_path() : snapshot;

  std::shared_ptr<cloudtree::MemoryStore> backing;
  if (!options.snapshot_path.empty()) {
    backing = std::make_shared<cloudtree::FileStore>(options.snapshot_path);
  } else {
    backing = std::make_shared<cloudtree::MemoryStore>();
  }

  cloudtree::KvServer server(backing, options);
  server.start();
  std::cout << "listening on " << server.address() << "\n";
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(50));
  server.stop();
  std::cout << "served " << server.total_requests() << " requests\n";
  return 0;
}

int cmd_gen_corpus(std::size_t bytes, std::uint64_t seed, const std::string& out_path) {
  std::string text = cloudtree::bench::generate_corpus_text(bytes, seed);
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return 1;
  }
  out << text;
  std::cout << "wrote " << text.size() << " bytes to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tree data structures stored in a remote key-value store"};
  app.require_subcommand(1);

  // bench
  cloudtree::bench::WorkloadSpec spec;
  std::string tree_kind = "prefix";
  std::string backend = "memory";
  std::string order = "balanced";
  std::string phases = "insert,query,delete";
  std::string out_path;
  bool no_cache = false, no_prefetch = false, no_aggregation = false, no_opt = false;

  auto* bench = app.add_subcommand("bench", "run the measurement protocol");
  bench->add_option("--tree", tree_kind, "prefix|bst")->check(CLI::IsMember({"prefix", "bst"}));
  bench->add_option("--backend", backend, "memory|file:<path>|tcp:<addr>");
  bench->add_option("--rtt-ms", spec.store.rtt_ms, "simulated round trip per request");
  bench->add_option("--size", spec.size, "dataset size");
  bench->add_option("--string-len", spec.string_len, "prefix string length (8|16|32)");
  bench->add_option("--corpus", spec.corpus_path, "text file to split into strings");
  bench->add_option("--order", order, "balanced|random")
      ->check(CLI::IsMember({"balanced", "random"}));
  bench->add_option("--seed", spec.seed, "dataset / sampling seed");
  bench->add_option("--phases", phases, "comma list of insert,query,delete");
  bench->add_option("--samples", spec.sample_queries, "query/delete sample count");
  bench->add_option("--cache-lines", spec.cache.capacity_lines, "cache capacity");
  bench->add_option("--prefetch", spec.cache.prefetch_size, "prefetch window size");
  bench->add_option("--batch-limit", spec.store.batch_limit, "bulk request cap");
  bench->add_flag("--no-cache", no_cache, "disable caching");
  bench->add_flag("--no-prefetch", no_prefetch, "disable prefetching");
  bench->add_flag("--no-aggregation", no_aggregation, "disable write aggregation");
  bench->add_flag("--no-optimizations", no_opt, "disable all three optimizations");
  bench->add_flag("--paired", spec.paired, "also run unoptimized and report speedup");
  bench->add_option("--tree-name", spec.tree_name, "table name override");
  bench->add_option("--out", out_path, "write the CSV report here");

  // serve
  std::string bind = "127.0.0.1:4511";
  std::string snapshot;
  std::string token;
  double serve_rtt = 0.0;
  auto* serve = app.add_subcommand("serve", "run the TCP store server");
  serve->add_option("--bind", bind, "host:port to listen on");
  serve->add_option("--snapshot", snapshot, "snapshot file to load/save");
  serve->add_option("--rtt-ms", serve_rtt, "artificial delay per request");
  serve->add_option("--token", token, "require this shared token");

  // gen-corpus
  std::size_t bytes = 1 << 20;
  std::uint64_t corpus_seed = 1;
  std::string corpus_out = "corpus.txt";
  auto* gen = app.add_subcommand("gen-corpus", "write synthetic corpus text");
  gen->add_option("--bytes", bytes, "output size");
  gen->add_option("--seed", corpus_seed, "generator seed");
  gen->add_option("--out", corpus_out, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) {
      spec.tree = tree_kind == "prefix" ? cloudtree::TreeKind::PrefixTree
                                        : cloudtree::TreeKind::BSTree;
      spec.backend = cloudtree::bench::parse_backend(backend);
      spec.order = order == "balanced" ? cloudtree::bench::IntOrder::Balanced
                                       : cloudtree::bench::IntOrder::Random;
      spec.phases = cloudtree::bench::parse_phases(phases);
      if (no_opt) no_cache = no_prefetch = no_aggregation = true;
      spec.cache.caching_enabled = !no_cache;
      spec.cache.prefetch_enabled = !no_prefetch;
      spec.cache.aggregation_enabled = !no_aggregation;
      return cmd_bench(spec, out_path);
    }
    if (serve->parsed()) return cmd_serve(bind, snapshot, serve_rtt, token);
    if (gen->parsed()) return cmd_gen_corpus(bytes, corpus_seed, corpus_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
