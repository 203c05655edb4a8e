#include "cloudtree/cache.hpp"

#include <algorithm>

namespace cloudtree {

NodeCache::NodeCache(std::shared_ptr<Store> store, std::string table, CacheConfig config)
    : store_(std::move(store)), table_(std::move(table)), config_(config) {
  if (config_.caching_enabled && config_.capacity_lines < 1)
    raise(ErrorCode::InvalidArgument, "cache capacity must be >= 1");
  if (config_.prefetch_size + 1 > store_->config().batch_limit)
    raise(ErrorCode::InvalidArgument, "prefetch_size must be <= batch_limit - 1");
}

std::optional<TreeNode> NodeCache::read_node(NodeId id) {
  if (id >= kMetaKey) raise(ErrorCode::InvalidArgument, "node id out of range");
  if (pending_deletes_.count(id)) return std::nullopt;

  if (config_.caching_enabled) {
    auto it = lines_.find(id);
    if (it != lines_.end()) {
      touch(id);
      return it->second.node;
    }
  }
  if (auto it = pending_puts_.find(id); it != pending_puts_.end()) return it->second;

  if (!config_.caching_enabled) {
    auto item = store_->get_item(table_, id);
    if (!item) return std::nullopt;
    return item_to_node(*item);
  }

  if (config_.prefetch_enabled && config_.prefetch_size > 0) {
    std::vector<NodeKey> window;
    NodeId last = std::min(id + config_.prefetch_size, kMetaKey - 1);
    for (NodeId k = id; k <= last; ++k) window.push_back(k);
    auto items = store_->batch_get(table_, window);
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.key < b.key; });
    std::optional<TreeNode> hit;
    for (const Item& item : items) {
      if (pending_deletes_.count(item.key)) continue;
      TreeNode node = item_to_node(item);
      if (node.node_id == id) hit = node;
      insert_line(node.node_id, std::move(node));
    }
    if (hit) touch(id);
    return hit;
  }

  auto item = store_->get_item(table_, id);
  if (!item) return std::nullopt;
  TreeNode node = item_to_node(*item);
  insert_line(id, node);
  return node;
}

void NodeCache::write_node(const TreeNode& node) {
  if (config_.caching_enabled) insert_line(node.node_id, node);
  if (auto it = pending_puts_.find(node.node_id); it != pending_puts_.end())
    it->second = node;
  store_->put_item(table_, node_to_item(node));
}

void NodeCache::update_node(NodeId id, const std::vector<UpdateAction>& actions) {
  if (auto it = lines_.find(id); it != lines_.end()) {
    apply_to_node(it->second.node, actions);
    touch(id);
  }
  if (auto it = pending_puts_.find(id); it != pending_puts_.end())
    apply_to_node(it->second, actions);
  store_->update_item(table_, id, actions);
}

void NodeCache::buffer_put(const TreeNode& node) {
  if (!config_.aggregation_enabled) {
    if (config_.caching_enabled) insert_line(node.node_id, node);
    store_->put_item(table_, node_to_item(node));
    return;
  }
  if (pending_deletes_.count(node.node_id))
    raise(ErrorCode::ConflictingKeys,
          "node " + std::to_string(node.node_id) + " already buffered for delete");
  pending_puts_.insert_or_assign(node.node_id, node);
  if (config_.caching_enabled) insert_line(node.node_id, node);
}

void NodeCache::buffer_delete(NodeId id) {
  if (!config_.aggregation_enabled) {
    erase_line(id);
    store_->delete_item(table_, id);
    return;
  }
  if (pending_puts_.count(id))
    raise(ErrorCode::ConflictingKeys,
          "node " + std::to_string(id) + " already buffered for put");
  pending_deletes_.insert(id);
  erase_line(id);
}

void NodeCache::flush() {
  if (buffer_empty()) return;
  const std::size_t limit = store_->config().batch_limit;
  BatchWriteRequest batch;
  auto ship = [&] {
    if (batch.size() == 0) return;
    store_->batch_write(table_, batch);
    batch = {};
  };
  for (const auto& [id, node] : pending_puts_) {
    batch.puts.push_back(node_to_item(node));
    if (batch.size() == limit) ship();
  }
  for (NodeId id : pending_deletes_) {
    batch.deletes.push_back(id);
    if (batch.size() == limit) ship();
  }
  ship();
  pending_puts_.clear();
  pending_deletes_.clear();
}

std::vector<NodeId> NodeCache::cached_ids() const {
  std::vector<NodeId> ids;
  ids.reserve(lines_.size());
  for (const auto& [id, line] : lines_) ids.push_back(id);
  return ids;
}

std::optional<TreeNode> NodeCache::peek(NodeId id) const {
  auto it = lines_.find(id);
  if (it == lines_.end()) return std::nullopt;
  return it->second.node;
}

void NodeCache::insert_line(NodeId id, TreeNode node) {
  auto it = lines_.find(id);
  if (it != lines_.end()) {
    it->second.node = std::move(node);
    touch(id);
    return;
  }
  recency_.push_front(id);
  lines_.emplace(id, Line{std::move(node), recency_.begin()});
  if (lines_.size() > config_.capacity_lines) {
    NodeId victim = recency_.back();
    recency_.pop_back();
    lines_.erase(victim);
  }
}

void NodeCache::touch(NodeId id) {
  auto it = lines_.find(id);
  recency_.splice(recency_.begin(), recency_, it->second.pos);
}

void NodeCache::erase_line(NodeId id) {
  auto it = lines_.find(id);
  if (it == lines_.end()) return;
  recency_.erase(it->second.pos);
  lines_.erase(it);
}

void NodeCache::apply_to_node(TreeNode& node, const std::vector<UpdateAction>& actions) const {
  Item item = node_to_item(node);
  apply_update_actions(item.attributes, actions);
  node = item_to_node(item);
}

}  // namespace cloudtree
