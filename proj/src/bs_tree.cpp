#include "cloudtree/bs_tree.hpp"

#include <charconv>

#include "write_guard.hpp"

namespace cloudtree {

namespace {

TreeNode must_read(Session& session, NodeId id) {
  auto node = session.read_node(id);
  if (!node)
    raise(ErrorCode::SchemaError, "dangling child reference to node " + std::to_string(id));
  return *std::move(node);
}

std::int64_t node_key(const TreeNode& node) {
  if (!node.data_item)
    raise(ErrorCode::SchemaError,
          "bst node " + std::to_string(node.node_id) + " has no data_item");
  return *node.data_item;
}

std::int64_t entry_key(const ChildEntry& entry) {
  std::int64_t value = 0;
  const char* begin = entry.label.data();
  const char* end = begin + entry.label.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    raise(ErrorCode::SchemaError, "non-numeric bst child label '" + entry.label + "'");
  return value;
}

std::string encode_key_entry(NodeId id, std::int64_t key) {
  return encode_child(ChildEntry{id, std::to_string(key)});
}

// Child to follow for `key`: the left child (embedded key < node key) when
// key < node key, the right child otherwise; absent at a leaf boundary.
std::optional<ChildEntry> follow_child(const TreeNode& node, std::int64_t key) {
  std::int64_t pivot = node_key(node);
  for (const auto& child : node.children) {
    std::int64_t embedded = entry_key(child);
    if (key < pivot && embedded < pivot) return child;
    if (key > pivot && embedded > pivot) return child;
  }
  return std::nullopt;
}

std::optional<ChildEntry> left_child(const TreeNode& node) {
  std::int64_t pivot = node_key(node);
  for (const auto& child : node.children)
    if (entry_key(child) < pivot) return child;
  return std::nullopt;
}

std::optional<ChildEntry> right_child(const TreeNode& node) {
  std::int64_t pivot = node_key(node);
  for (const auto& child : node.children)
    if (entry_key(child) > pivot) return child;
  return std::nullopt;
}

}  // namespace

BSTree::BSTree(std::shared_ptr<Store> backend, std::string name, bool create_new,
               CacheConfig cache_config)
    : session_(std::make_unique<Session>(std::move(backend), std::move(name),
                                         TreeKind::BSTree, create_new, cache_config)) {}

void BSTree::insert(std::int64_t key) {
  detail::WriteGuard guard(*session_);
  auto make_root = [&](NodeId id) {
    TreeNode root;
    root.node_id = id;
    root.data_item = key;
    session_->buffer_put(root);
    session_->flush();
  };

  if (session_->next_node_id() == 0) {
    make_root(session_->allocate_id());  // first node ever, id 0
    guard.disarm();
    return;
  }
  auto root = session_->read_node(0);
  if (!root) {
    // The last key was deleted earlier; the root slot (id 0) is recreated
    // without burning a fresh id.
    make_root(0);
    guard.disarm();
    return;
  }

  TreeNode cur = *root;
  while (true) {
    if (node_key(cur) == key) {
      guard.disarm();
      return;  // already present, zero writes
    }
    auto next = follow_child(cur, key);
    if (!next) break;
    cur = must_read(*session_, next->child_id);
  }

  NodeId id = session_->allocate_id();
  session_->update_node(
      cur.node_id,
      {UpdateAction::set_add("children_set", encode_key_entry(id, key))});
  TreeNode leaf;
  leaf.node_id = id;
  leaf.data_item = key;
  session_->buffer_put(leaf);
  session_->flush();
  guard.disarm();
}

bool BSTree::query(std::int64_t key) {
  if (session_->next_node_id() == 0) return false;
  auto node = session_->read_node(0);
  while (node) {
    if (node_key(*node) == key) return true;
    auto next = follow_child(*node, key);
    if (!next) return false;
    node = must_read(*session_, next->child_id);
  }
  return false;
}

bool BSTree::erase(std::int64_t key) {
  if (session_->next_node_id() == 0) return false;
  auto root = session_->read_node(0);
  if (!root) return false;

  std::optional<TreeNode> parent;
  TreeNode cur = *root;
  while (node_key(cur) != key) {
    auto next = follow_child(cur, key);
    if (!next) return false;
    parent = cur;
    cur = must_read(*session_, next->child_id);
  }
  detail::WriteGuard guard(*session_);
  remove_at(std::move(cur), std::move(parent));
  session_->flush();
  guard.disarm();
  return true;
}

// Deletes the key held by `cur`. Leaves are unlinked from their parent and
// dropped; interior nodes have their key replaced by the in-order
// predecessor ML (successor when there is only a right subtree), which takes
// two coordinated updates -- cur's data_item and the embedded label inside
// cur's parent entry -- before ML itself is deleted the same way, recursing
// down the subtree.
void BSTree::remove_at(TreeNode cur, std::optional<TreeNode> parent) {
  std::int64_t doomed = node_key(cur);

  auto replace_with_edge = [&](const ChildEntry& subtree_root,
                               bool want_max) -> void {
    TreeNode ml_parent = cur;
    TreeNode ml = must_read(*session_, subtree_root.child_id);
    while (true) {
      auto deeper = want_max ? right_child(ml) : left_child(ml);
      if (!deeper) break;
      ml_parent = ml;
      ml = must_read(*session_, deeper->child_id);
    }
    std::int64_t replacement = node_key(ml);

    session_->update_node(cur.node_id,
                          {UpdateAction::set("data_item",
                                             AttributeValue::number(replacement))});
    if (parent) {
      session_->update_node(
          parent->node_id,
          {UpdateAction::set_remove("children_set", encode_key_entry(cur.node_id, doomed)),
           UpdateAction::set_add("children_set",
                                 encode_key_entry(cur.node_id, replacement))});
    }
    cur.data_item = replacement;
    remove_at(std::move(ml), std::move(ml_parent));
  };

  if (auto left = left_child(cur)) {
    replace_with_edge(*left, /*want_max=*/true);
    return;
  }
  if (auto right = right_child(cur)) {
    replace_with_edge(*right, /*want_max=*/false);
    return;
  }

  // Leaf: unlink from the parent and drop the node. A deleted root leaf
  // leaves the tree empty.
  if (parent) {
    session_->update_node(
        parent->node_id,
        {UpdateAction::set_remove("children_set", encode_key_entry(cur.node_id, doomed))});
  }
  session_->buffer_delete(cur.node_id);
}

}  // namespace cloudtree
