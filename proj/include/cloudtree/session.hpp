#pragma once

#include <memory>
#include <string>

#include "cloudtree/cache.hpp"
#include "cloudtree/node.hpp"
#include "cloudtree/store.hpp"

namespace cloudtree {

enum class TreeKind { PrefixTree, BSTree };

std::string_view to_string(TreeKind kind) noexcept;

struct TreeMetadata {
  std::string tree_name;
  TreeKind kind = TreeKind::PrefixTree;
  NodeId next_node_id = 0;
};

// One client handle on one named tree: owns the tree's cache, write buffer
// and id allocator, and persists tree metadata under the reserved key
// kMetaKey in the tree's own table (attributes tree_kind / next_node_id).
// Single-threaded; at most one writer session per tree.
//
// next_node_id is persisted exactly at close(). Every 1000 allocations a
// safety checkpoint persists the current counter plus a 1000-id reservation,
// so a crashed session can leak at most the reserved ids but reopening never
// reuses one.
class Session {
 public:
  Session(std::shared_ptr<Store> backend, std::string name, TreeKind kind,
          bool create_new, CacheConfig cache_config = {});
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // Returns the current counter and increments it; ids within a session are
  // consecutive with no gaps or reuse.
  NodeId allocate_id();

  std::optional<TreeNode> read_node(NodeId id);
  void write_node(const TreeNode& node);
  void update_node(NodeId id, const std::vector<UpdateAction>& actions);
  void buffer_put(const TreeNode& node);
  void buffer_delete(NodeId id);
  void flush();

  // Flushes, persists metadata and makes the handle unusable. Double close
  // is a no-op.
  void close();

  // Marks the session unusable after a failed remote write left cache and
  // store potentially divergent.
  void poison() noexcept { poisoned_ = true; }

  bool closed() const noexcept { return closed_; }
  TreeKind kind() const noexcept { return meta_.kind; }
  const std::string& name() const noexcept { return meta_.tree_name; }
  NodeId next_node_id() const noexcept { return meta_.next_node_id; }
  StoreMetrics metrics() const { return store_->metrics(); }
  const NodeCache& cache() const noexcept { return *cache_; }

 private:
  static constexpr std::uint64_t kCheckpointInterval = 1000;

  void ensure_open() const;
  void persist_metadata(NodeId next_value);

  std::shared_ptr<MetricsStore> store_;
  std::unique_ptr<NodeCache> cache_;
  TreeMetadata meta_;
  std::uint64_t allocations_ = 0;
  bool closed_ = false;
  bool poisoned_ = false;
};

}  // namespace cloudtree
