#include "cloudtree/item_json.hpp"

#include <charconv>

namespace cloudtree {

using nlohmann::json;

namespace {

std::int64_t parse_decimal_i64(const std::string& text) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    raise(ErrorCode::ParseError, "bad number literal '" + text + "'");
  return value;
}

json value_to_json_impl(const AttributeValue& value) {
  switch (value.kind()) {
    case AttributeValue::Kind::Number:
      return json{{"N", std::to_string(value.as_number())}};
    case AttributeValue::Kind::String:
      return json{{"S", value.as_string()}};
    case AttributeValue::Kind::Bool:
      return json{{"BOOL", value.as_bool()}};
    case AttributeValue::Kind::Set: {
      json elems = json::array();
      for (const auto& e : value.as_set()) elems.push_back(e);  // std::set is sorted
      return json{{"SS", std::move(elems)}};
    }
  }
  raise(ErrorCode::ParseError, "unreachable attribute kind");
}

AttributeValue value_from_json_impl(const json& j) {
  if (!j.is_object() || j.size() != 1)
    raise(ErrorCode::ParseError, "attribute value must be a one-key object");
  const auto& [tag, body] = *j.items().begin();
  if (tag == "N") {
    if (!body.is_string()) raise(ErrorCode::ParseError, "N payload must be a string");
    return AttributeValue::number(parse_decimal_i64(body.get<std::string>()));
  }
  if (tag == "S") {
    if (!body.is_string()) raise(ErrorCode::ParseError, "S payload must be a string");
    return AttributeValue::str(body.get<std::string>());
  }
  if (tag == "BOOL") {
    if (!body.is_boolean()) raise(ErrorCode::ParseError, "BOOL payload must be a boolean");
    return AttributeValue::boolean(body.get<bool>());
  }
  if (tag == "SS") {
    if (!body.is_array() || body.empty())
      raise(ErrorCode::ParseError, "SS payload must be a non-empty array");
    StringSet set;
    for (const auto& e : body) {
      if (!e.is_string() || e.get<std::string>().empty())
        raise(ErrorCode::ParseError, "SS elements must be non-empty strings");
      if (!set.insert(e.get<std::string>()).second)
        raise(ErrorCode::ParseError, "duplicate SS element");
    }
    return AttributeValue::set(std::move(set));
  }
  raise(ErrorCode::ParseError, "unknown attribute tag '" + tag + "'");
}

}  // namespace

json attribute_value_to_json(const AttributeValue& value) { return value_to_json_impl(value); }

AttributeValue attribute_value_from_json(const json& j) { return value_from_json_impl(j); }

json attributes_to_json(const AttributeMap& attrs) {
  json obj = json::object();
  for (const auto& [name, value] : attrs) obj[name] = value_to_json_impl(value);
  return obj;
}

AttributeMap attributes_from_json(const json& j) {
  if (!j.is_object()) raise(ErrorCode::ParseError, "attributes must be an object");
  AttributeMap attrs;
  for (const auto& [name, value] : j.items()) {
    if (name.empty()) raise(ErrorCode::ParseError, "empty attribute name");
    attrs.insert_or_assign(name, value_from_json_impl(value));
  }
  return attrs;
}

std::string canonical_attributes(const AttributeMap& attrs) {
  return attributes_to_json(attrs).dump();
}

AttributeMap parse_canonical_attributes(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) raise(ErrorCode::ParseError, "malformed JSON");
  return attributes_from_json(j);
}

json item_to_json(const Item& item) {
  return json{{"key", item.key}, {"attributes", attributes_to_json(item.attributes)}};
}

Item item_from_json(const json& j) {
  if (!j.is_object() || !j.contains("key") || !j["key"].is_number_unsigned())
    raise(ErrorCode::ParseError, "item must carry an unsigned key");
  Item item;
  item.key = j["key"].get<NodeKey>();
  item.attributes = attributes_from_json(j.value("attributes", json::object()));
  return item;
}

}  // namespace cloudtree
