#include "cloudtree/session.hpp"

namespace cloudtree {

std::string_view to_string(TreeKind kind) noexcept {
  return kind == TreeKind::PrefixTree ? "prefix" : "bst";
}

namespace {

TreeKind kind_from_string(const std::string& s) {
  if (s == "prefix") return TreeKind::PrefixTree;
  if (s == "bst") return TreeKind::BSTree;
  raise(ErrorCode::SchemaError, "unknown tree_kind '" + s + "'");
}

Item metadata_item(TreeKind kind, NodeId next_value) {
  Item item;
  item.key = kMetaKey;
  item.attributes.insert_or_assign("tree_kind",
                                   AttributeValue::str(std::string(to_string(kind))));
  item.attributes.insert_or_assign(
      "next_node_id", AttributeValue::number(static_cast<std::int64_t>(next_value)));
  return item;
}

TreeMetadata parse_metadata(const std::string& name, const Item& item) {
  auto kind_it = item.attributes.find("tree_kind");
  auto next_it = item.attributes.find("next_node_id");
  if (kind_it == item.attributes.end() || next_it == item.attributes.end() ||
      kind_it->second.kind() != AttributeValue::Kind::String ||
      next_it->second.kind() != AttributeValue::Kind::Number)
    raise(ErrorCode::SchemaError, "malformed tree metadata for '" + name + "'");
  std::int64_t next = next_it->second.as_number();
  if (next < 0) raise(ErrorCode::SchemaError, "negative next_node_id");
  return TreeMetadata{name, kind_from_string(kind_it->second.as_string()),
                      static_cast<NodeId>(next)};
}

}  // namespace

Session::Session(std::shared_ptr<Store> backend, std::string name, TreeKind kind,
                 bool create_new, CacheConfig cache_config)
    : store_(std::make_shared<MetricsStore>(std::move(backend))) {
  if (create_new) {
    store_->create_table(name);
    meta_ = TreeMetadata{std::move(name), kind, 0};
    persist_metadata(0);
  } else {
    std::optional<Item> item;
    try {
      item = store_->get_item(name, kMetaKey);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoSuchTable)
        raise(ErrorCode::NoSuchTree, "no tree named '" + name + "'");
      throw;
    }
    if (!item) raise(ErrorCode::NoSuchTree, "table '" + name + "' has no tree metadata");
    meta_ = parse_metadata(name, *item);
    if (meta_.kind != kind)
      raise(ErrorCode::KindMismatch,
            "tree '" + name + "' is a " + std::string(to_string(meta_.kind)) + " tree");
  }
  cache_ = std::make_unique<NodeCache>(store_, meta_.tree_name, cache_config);
}

Session::~Session() {
  if (closed_ || poisoned_) return;
  try {
    close();
  } catch (...) {
    // best effort; an explicit close() reports failures
  }
}

void Session::ensure_open() const {
  if (poisoned_)
    raise(ErrorCode::SessionPoisoned, "session unusable after a failed write");
  if (closed_) raise(ErrorCode::SessionClosed, "session is closed");
}

void Session::persist_metadata(NodeId next_value) {
  store_->put_item(meta_.tree_name, metadata_item(meta_.kind, next_value));
}

NodeId Session::allocate_id() {
  ensure_open();
  if (meta_.next_node_id >= kMetaKey)
    raise(ErrorCode::IdSpaceExhausted, "node id space exhausted");
  NodeId id = meta_.next_node_id++;
  if (++allocations_ % kCheckpointInterval == 0) {
    NodeId reserved = meta_.next_node_id + kCheckpointInterval;
    persist_metadata(std::min(reserved, kMetaKey));
  }
  return id;
}

std::optional<TreeNode> Session::read_node(NodeId id) {
  ensure_open();
  return cache_->read_node(id);
}

void Session::write_node(const TreeNode& node) {
  ensure_open();
  try {
    cache_->write_node(node);
  } catch (...) {
    poison();
    throw;
  }
}

void Session::update_node(NodeId id, const std::vector<UpdateAction>& actions) {
  ensure_open();
  try {
    cache_->update_node(id, actions);
  } catch (...) {
    poison();
    throw;
  }
}

void Session::buffer_put(const TreeNode& node) {
  ensure_open();
  try {
    cache_->buffer_put(node);
  } catch (...) {
    poison();
    throw;
  }
}

void Session::buffer_delete(NodeId id) {
  ensure_open();
  try {
    cache_->buffer_delete(id);
  } catch (...) {
    poison();
    throw;
  }
}

void Session::flush() {
  ensure_open();
  try {
    cache_->flush();
  } catch (...) {
    poison();
    throw;
  }
}

void Session::close() {
  if (closed_) return;
  ensure_open();
  try {
    cache_->flush();
    persist_metadata(meta_.next_node_id);
  } catch (...) {
    poison();
    throw;
  }
  closed_ = true;
}

}  // namespace cloudtree
