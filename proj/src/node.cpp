#include "cloudtree/node.hpp"

#include <charconv>

namespace cloudtree {

std::string encode_child(const ChildEntry& entry) {
  if (entry.label.empty()) raise(ErrorCode::InvalidArgument, "child label is empty");
  if (entry.child_id >= kMetaKey) raise(ErrorCode::InvalidArgument, "child id out of range");
  return std::to_string(entry.child_id) + ":" + entry.label;
}

ChildEntry parse_child(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos)
    raise(ErrorCode::ParseError, "child entry without colon: '" + std::string(s) + "'");
  std::string_view id_part = s.substr(0, colon);
  std::string_view label = s.substr(colon + 1);
  if (id_part.empty() || label.empty())
    raise(ErrorCode::ParseError, "child entry with empty field: '" + std::string(s) + "'");
  NodeId id = 0;
  auto [ptr, ec] = std::from_chars(id_part.data(), id_part.data() + id_part.size(), id);
  if (ec != std::errc{} || ptr != id_part.data() + id_part.size())
    raise(ErrorCode::ParseError, "non-decimal child id: '" + std::string(s) + "'");
  if (id >= kMetaKey)
    raise(ErrorCode::ParseError, "child id out of range: '" + std::string(s) + "'");
  return ChildEntry{id, std::string(label)};
}

Item node_to_item(const TreeNode& node) {
  Item item;
  item.key = node.node_id;
  if (node.data_item)
    item.attributes.insert_or_assign("data_item", AttributeValue::number(*node.data_item));
  if (!node.children.empty()) {
    StringSet entries;
    for (const auto& child : node.children) {
      if (!entries.insert(encode_child(child)).second)
        raise(ErrorCode::InvalidArgument, "duplicate child entry");
    }
    item.attributes.insert_or_assign("children_set", AttributeValue::set(std::move(entries)));
  }
  if (node.word)
    item.attributes.insert_or_assign("word", AttributeValue::boolean(*node.word));
  return item;
}

TreeNode item_to_node(const Item& item) {
  TreeNode node;
  node.node_id = item.key;
  for (const auto& [name, value] : item.attributes) {
    if (name == "data_item") {
      if (value.kind() != AttributeValue::Kind::Number)
        raise(ErrorCode::SchemaError, "data_item is not a number");
      node.data_item = value.as_number();
    } else if (name == "children_set") {
      if (!value.is_set())
        raise(ErrorCode::SchemaError, "children_set is not a string-set");
      for (const auto& encoded : value.as_set()) {
        try {
          node.children.push_back(parse_child(encoded));
        } catch (const Error&) {
          raise(ErrorCode::SchemaError, "unparsable child entry '" + encoded + "'");
        }
      }
    } else if (name == "word") {
      if (value.kind() != AttributeValue::Kind::Bool)
        raise(ErrorCode::SchemaError, "word is not a boolean");
      node.word = value.as_bool();
    } else {
      raise(ErrorCode::SchemaError, "unknown node attribute '" + name + "'");
    }
  }
  return node;
}

std::optional<NodeId> find_child_by_label(const TreeNode& node, std::string_view label) {
  std::optional<NodeId> found;
  for (const auto& child : node.children) {
    if (child.label != label) continue;
    if (found)
      raise(ErrorCode::DuplicateLabel,
            "node " + std::to_string(node.node_id) + " has two children labelled '" +
                std::string(label) + "'");
    found = child.child_id;
  }
  return found;
}

}  // namespace cloudtree
