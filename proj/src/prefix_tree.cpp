#include "cloudtree/prefix_tree.hpp"

#include <vector>

#include "write_guard.hpp"

namespace cloudtree {

using detail::WriteGuard;

namespace {

TreeNode must_read(Session& session, NodeId id) {
  auto node = session.read_node(id);
  if (!node)
    raise(ErrorCode::SchemaError, "dangling child reference to node " + std::to_string(id));
  return *std::move(node);
}

}  // namespace

PrefixTree::PrefixTree(std::shared_ptr<Store> backend, std::string name, bool create_new,
                       CacheConfig cache_config)
    : session_(std::make_unique<Session>(std::move(backend), std::move(name),
                                         TreeKind::PrefixTree, create_new, cache_config)) {}

void PrefixTree::insert(std::string_view s) {
  if (s.empty()) raise(ErrorCode::InvalidArgument, "cannot insert an empty string");
  WriteGuard guard(*session_);

  // Lazy root: the very first insert creates node 0.
  bool fresh_root = session_->next_node_id() == 0;
  TreeNode root;
  if (fresh_root) {
    root.node_id = session_->allocate_id();
  } else {
    root = must_read(*session_, 0);
  }

  TreeNode cur = root;
  std::size_t matched = 0;
  while (matched < s.size()) {
    auto child = find_child_by_label(cur, s.substr(matched, 1));
    if (!child) break;
    cur = must_read(*session_, *child);
    ++matched;
  }

  if (matched == s.size()) {
    // S already spelled out; one idempotent update marks it as a word.
    session_->update_node(cur.node_id,
                          {UpdateAction::set("word", AttributeValue::boolean(true))});
    session_->flush();
    guard.disarm();
    return;
  }

  NodeId branch_id = session_->allocate_id();
  ChildEntry branch{branch_id, std::string(s.substr(matched, 1))};
  if (fresh_root) {
    // The root is still unwritten; give it the child entry directly.
    root.children.push_back(branch);
    session_->buffer_put(root);
  } else {
    session_->update_node(
        cur.node_id, {UpdateAction::set_add("children_set", encode_child(branch))});
  }

  // One node per remaining character, each pointing at the next allocated id;
  // the last one carries the word flag.
  NodeId id = branch_id;
  for (std::size_t pos = matched; pos < s.size(); ++pos) {
    TreeNode node;
    node.node_id = id;
    if (pos + 1 < s.size()) {
      NodeId next = session_->allocate_id();
      node.children.push_back(ChildEntry{next, std::string(s.substr(pos + 1, 1))});
      id = next;
    } else {
      node.word = true;
    }
    session_->buffer_put(node);
  }
  session_->flush();
  guard.disarm();
}

bool PrefixTree::query(std::string_view s) {
  if (s.empty()) raise(ErrorCode::InvalidArgument, "cannot query an empty string");
  if (session_->next_node_id() == 0) return false;  // no root yet
  auto cur = session_->read_node(0);
  if (!cur) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto child = find_child_by_label(*cur, s.substr(i, 1));
    if (!child) return false;
    cur = must_read(*session_, *child);
  }
  return cur->word.value_or(false);
}

bool PrefixTree::erase(std::string_view s) {
  if (s.empty()) raise(ErrorCode::InvalidArgument, "cannot delete an empty string");
  if (session_->next_node_id() == 0) return false;
  auto root = session_->read_node(0);
  if (!root) return false;

  // path[0] is the root, path[j] the node for s[j-1].
  std::vector<TreeNode> path{*root};
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto child = find_child_by_label(path.back(), s.substr(i, 1));
    if (!child) return false;
    path.push_back(must_read(*session_, *child));
  }
  TreeNode& end = path.back();
  if (!end.word.value_or(false)) return false;

  WriteGuard guard(*session_);
  if (!end.children.empty()) {
    // S is a proper prefix of a surviving word; only the flag flips.
    session_->update_node(end.node_id,
                          {UpdateAction::set("word", AttributeValue::boolean(false))});
    session_->flush();
    guard.disarm();
    return true;
  }

  // Deepest surviving ancestor: the root, a word node, or a branch point.
  std::size_t keep = 0;
  for (std::size_t j = path.size() - 1; j-- > 0;) {
    if (j == 0 || path[j].word.value_or(false) || path[j].children.size() >= 2) {
      keep = j;
      break;
    }
  }
  ChildEntry severed{path[keep + 1].node_id, std::string(s.substr(keep, 1))};
  session_->update_node(path[keep].node_id,
                        {UpdateAction::set_remove("children_set", encode_child(severed))});
  for (std::size_t j = keep + 1; j < path.size(); ++j)
    session_->buffer_delete(path[j].node_id);
  session_->flush();
  guard.disarm();
  return true;
}

}  // namespace cloudtree
