#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cloudtree/store.hpp"

namespace cloudtree {

using NodeId = std::uint64_t;

// Reserved sentinel key holding per-tree metadata; never a node id.
inline constexpr NodeId kMetaKey = std::uint64_t{1} << 63;

// Decoded "<child_id>:<label>" link. The label is a single character for
// prefix trees and a decimal key rendering for BSTs; decoding splits at the
// FIRST colon so labels may themselves contain colons.
struct ChildEntry {
  NodeId child_id = 0;
  std::string label;

  bool operator==(const ChildEntry&) const = default;
};

std::string encode_child(const ChildEntry& entry);
ChildEntry parse_child(std::string_view s);

struct TreeNode {
  NodeId node_id = 0;
  std::optional<std::int64_t> data_item;  // BST key; never set on trie nodes
  std::vector<ChildEntry> children;
  std::optional<bool> word;  // trie end-of-string marker

  bool is_leaf() const noexcept { return children.empty(); }
  bool operator==(const TreeNode&) const = default;
};

// Lossless node<->item codec. Attribute names node_id (the item key),
// data_item, children_set and word are a stable on-disk/wire contract;
// an empty children set encodes as attribute absence.
Item node_to_item(const TreeNode& node);
TreeNode item_to_node(const Item& item);  // throws SchemaError on unknown shape

// The unique child labelled `label`, if any. Two children sharing a label
// mean a corrupt node and raise DuplicateLabel.
std::optional<NodeId> find_child_by_label(const TreeNode& node, std::string_view label);

}  // namespace cloudtree
