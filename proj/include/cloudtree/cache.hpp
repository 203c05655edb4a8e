#pragma once

#include <list>
#include <memory>
#include <set>
#include <unordered_map>

#include "cloudtree/node.hpp"
#include "cloudtree/store.hpp"

namespace cloudtree {

struct CacheConfig {
  std::size_t capacity_lines = 10000;  // one line caches one tree node
  std::size_t prefetch_size = 25;      // extra ids fetched past a missed id
  bool caching_enabled = true;
  bool prefetch_enabled = true;
  bool aggregation_enabled = true;
};

// Client-side cache controller for one tree table: bounded LRU node buffer,
// id-window prefetching on misses, write-through single-node writes, and a
// per-operation write buffer that aggregates node puts/deletes into batch
// writes. Owned by exactly one session; not thread-safe.
//
// LRU recency order is pinned for the model tests: a prefetch inserts the
// fetched nodes in ascending id order and then touches the requested id, so
// the missed node always ends up most recent.
class NodeCache {
 public:
  NodeCache(std::shared_ptr<Store> store, std::string table, CacheConfig config);

  // Cache hit: no remote traffic. Miss: one batch_get over the contiguous
  // window {id..id+prefetch_size} (clipped below kMetaKey) when prefetching,
  // else one get_item. Pending buffered puts read back; pending deletes read
  // as absent.
  std::optional<TreeNode> read_node(NodeId id);

  // Write-through: the cache line is updated first, then one put_item.
  void write_node(const TreeNode& node);

  // Mutates the cached copy (if any) and issues exactly one update_item.
  // Never fetches on a miss.
  void update_node(NodeId id, const std::vector<UpdateAction>& actions);

  // Aggregation buffer, scoped to one tree operation. With aggregation
  // disabled each call issues its write immediately instead of queueing.
  void buffer_put(const TreeNode& node);
  void buffer_delete(NodeId id);

  // Issues ceil(pending / batch_limit) batch_write requests and empties the
  // buffer.
  void flush();

  bool buffer_empty() const noexcept {
    return pending_puts_.empty() && pending_deletes_.empty();
  }

  std::size_t size() const noexcept { return lines_.size(); }
  bool contains(NodeId id) const { return lines_.count(id) != 0; }
  std::vector<NodeId> cached_ids() const;
  std::optional<TreeNode> peek(NodeId id) const;  // no recency effect
  const CacheConfig& config() const noexcept { return config_; }

 private:
  void insert_line(NodeId id, TreeNode node);
  void touch(NodeId id);
  void erase_line(NodeId id);
  void apply_to_node(TreeNode& node, const std::vector<UpdateAction>& actions) const;

  std::shared_ptr<Store> store_;
  std::string table_;
  CacheConfig config_;

  struct Line {
    TreeNode node;
    std::list<NodeId>::iterator pos;
  };
  std::list<NodeId> recency_;  // front = most recently used
  std::unordered_map<NodeId, Line> lines_;

  std::map<NodeId, TreeNode> pending_puts_;
  std::set<NodeId> pending_deletes_;
};

}  // namespace cloudtree
