#pragma once

#include <string>

#include <json.hpp>

#include "cloudtree/store.hpp"

namespace cloudtree {

// Canonical attribute-map encoding, shared by the snapshot file format and
// the wire protocol:
//   {"name":{"N":"123"}|{"S":"str"}|{"BOOL":true}|{"SS":["a","b"]}}
// Attribute names and SS elements serialize in sorted order, so equal maps
// always produce identical bytes.
nlohmann::json attributes_to_json(const AttributeMap& attrs);
AttributeMap attributes_from_json(const nlohmann::json& j);  // throws ParseError

nlohmann::json attribute_value_to_json(const AttributeValue& value);
AttributeValue attribute_value_from_json(const nlohmann::json& j);

std::string canonical_attributes(const AttributeMap& attrs);
AttributeMap parse_canonical_attributes(const std::string& text);

nlohmann::json item_to_json(const Item& item);  // {"key":k,"attributes":{...}}
Item item_from_json(const nlohmann::json& j);

}  // namespace cloudtree
