#include "cloudtree/wire.hpp"

#include <json.hpp>

#include "cloudtree/item_json.hpp"

namespace cloudtree {

using nlohmann::json;

std::string_view to_string(WireOp op) noexcept {
  switch (op) {
    case WireOp::CreateTable: return "create_table";
    case WireOp::DeleteTable: return "delete_table";
    case WireOp::ListTables: return "list_tables";
    case WireOp::Get: return "get";
    case WireOp::Put: return "put";
    case WireOp::Update: return "update";
    case WireOp::Delete: return "delete";
    case WireOp::BatchGet: return "batch_get";
    case WireOp::BatchWrite: return "batch_write";
    case WireOp::SnapshotSave: return "snapshot_save";
  }
  return "get";
}

WireOp wire_op_from_string(std::string_view s) {
  for (WireOp op : {WireOp::CreateTable, WireOp::DeleteTable, WireOp::ListTables,
                    WireOp::Get, WireOp::Put, WireOp::Update, WireOp::Delete,
                    WireOp::BatchGet, WireOp::BatchWrite, WireOp::SnapshotSave}) {
    if (to_string(op) == s) return op;
  }
  raise(ErrorCode::ParseError, "unknown wire op '" + std::string(s) + "'");
}

namespace {

json action_to_json(const UpdateAction& a) {
  switch (a.kind) {
    case UpdateAction::Kind::Set:
      return json{{"op", "set"},
                  {"name", a.name},
                  {"value", attribute_value_to_json(*a.value)}};
    case UpdateAction::Kind::Remove:
      return json{{"op", "remove"}, {"name", a.name}};
    case UpdateAction::Kind::SetAdd:
      return json{{"op", "set_add"}, {"name", a.name}, {"element", a.element}};
    case UpdateAction::Kind::SetRemove:
      return json{{"op", "set_remove"}, {"name", a.name}, {"element", a.element}};
  }
  raise(ErrorCode::ParseError, "unreachable action kind");
}

UpdateAction action_from_json(const json& j) {
  if (!j.is_object() || !j.contains("op") || !j.contains("name") ||
      !j["op"].is_string() || !j["name"].is_string())
    raise(ErrorCode::ParseError, "malformed update action");
  const std::string op = j["op"].get<std::string>();
  const std::string name = j["name"].get<std::string>();
  if (op == "set") {
    if (!j.contains("value")) raise(ErrorCode::ParseError, "set action without value");
    return UpdateAction::set(name, attribute_value_from_json(j["value"]));
  }
  if (op == "remove") return UpdateAction::remove(name);
  if (op == "set_add" || op == "set_remove") {
    if (!j.contains("element") || !j["element"].is_string())
      raise(ErrorCode::ParseError, op + " action without element");
    std::string element = j["element"].get<std::string>();
    return op == "set_add" ? UpdateAction::set_add(name, element)
                           : UpdateAction::set_remove(name, element);
  }
  raise(ErrorCode::ParseError, "unknown action op '" + op + "'");
}

json parse_line(std::string_view line) {
  if (line.size() > kMaxWireLine) raise(ErrorCode::ParseError, "line exceeds 1 MiB");
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object())
    raise(ErrorCode::ParseError, "message is not a JSON object");
  return j;
}

std::uint64_t require_u64(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number_unsigned())
    raise(ErrorCode::ParseError, std::string("missing unsigned field '") + field + "'");
  return j[field].get<std::uint64_t>();
}

std::string require_table(const json& j) {
  if (!j.contains("table") || !j["table"].is_string())
    raise(ErrorCode::ParseError, "missing field 'table'");
  return j["table"].get<std::string>();
}

std::vector<NodeKey> keys_from_json(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array())
    raise(ErrorCode::ParseError, std::string("missing array field '") + field + "'");
  std::vector<NodeKey> keys;
  for (const auto& k : j[field]) {
    if (!k.is_number_unsigned()) raise(ErrorCode::ParseError, "keys must be unsigned");
    keys.push_back(k.get<NodeKey>());
  }
  return keys;
}

}  // namespace

std::string encode_request(const WireRequest& req) {
  json j{{"id", req.id}, {"op", std::string(to_string(req.op))}};
  if (!req.token.empty()) j["token"] = req.token;
  switch (req.op) {
    case WireOp::CreateTable:
    case WireOp::DeleteTable:
      j["table"] = req.table;
      break;
    case WireOp::ListTables:
      break;
    case WireOp::Get:
    case WireOp::Delete:
      j["table"] = req.table;
      j["key"] = req.key;
      break;
    case WireOp::Put:
      j["table"] = req.table;
      if (!req.item) raise(ErrorCode::InvalidArgument, "put request without item");
      j["item"] = item_to_json(*req.item);
      break;
    case WireOp::Update: {
      j["table"] = req.table;
      j["key"] = req.key;
      json actions = json::array();
      for (const auto& a : req.actions) actions.push_back(action_to_json(a));
      j["actions"] = std::move(actions);
      break;
    }
    case WireOp::BatchGet:
      j["table"] = req.table;
      j["keys"] = req.keys;
      break;
    case WireOp::BatchWrite: {
      j["table"] = req.table;
      json puts = json::array();
      for (const auto& item : req.puts) puts.push_back(item_to_json(item));
      j["puts"] = std::move(puts);
      j["deletes"] = req.deletes;
      break;
    }
    case WireOp::SnapshotSave:
      if (!req.path.empty()) j["path"] = req.path;
      break;
  }
  return j.dump();
}

WireRequest decode_request(std::string_view line) {
  json j = parse_line(line);
  if (!j.contains("op") || !j["op"].is_string())
    raise(ErrorCode::ParseError, "missing field 'op'");
  WireRequest req;
  req.id = require_u64(j, "id");
  req.op = wire_op_from_string(j["op"].get<std::string>());
  if (j.contains("token")) {
    if (!j["token"].is_string()) raise(ErrorCode::ParseError, "token must be a string");
    req.token = j["token"].get<std::string>();
  }
  switch (req.op) {
    case WireOp::CreateTable:
    case WireOp::DeleteTable:
      req.table = require_table(j);
      break;
    case WireOp::ListTables:
      break;
    case WireOp::Get:
    case WireOp::Delete:
      req.table = require_table(j);
      req.key = require_u64(j, "key");
      break;
    case WireOp::Put:
      req.table = require_table(j);
      if (!j.contains("item")) raise(ErrorCode::ParseError, "put without item");
      req.item = item_from_json(j["item"]);
      break;
    case WireOp::Update: {
      req.table = require_table(j);
      req.key = require_u64(j, "key");
      if (!j.contains("actions") || !j["actions"].is_array())
        raise(ErrorCode::ParseError, "update without actions");
      for (const auto& a : j["actions"]) req.actions.push_back(action_from_json(a));
      break;
    }
    case WireOp::BatchGet:
      req.table = require_table(j);
      req.keys = keys_from_json(j, "keys");
      break;
    case WireOp::BatchWrite: {
      req.table = require_table(j);
      if (!j.contains("puts") || !j["puts"].is_array())
        raise(ErrorCode::ParseError, "batch_write without puts");
      for (const auto& item : j["puts"]) req.puts.push_back(item_from_json(item));
      req.deletes = keys_from_json(j, "deletes");
      break;
    }
    case WireOp::SnapshotSave:
      if (j.contains("path")) {
        if (!j["path"].is_string()) raise(ErrorCode::ParseError, "path must be a string");
        req.path = j["path"].get<std::string>();
      }
      break;
  }
  return req;
}

std::string encode_response(const WireResponse& resp) {
  json j{{"id", resp.id}, {"status", resp.status}};
  if (!resp.error.empty()) j["error"] = resp.error;
  if (resp.has_item) j["item"] = resp.item ? item_to_json(*resp.item) : json(nullptr);
  if (!resp.items.empty()) {
    json items = json::array();
    for (const auto& item : resp.items) items.push_back(item_to_json(item));
    j["items"] = std::move(items);
  }
  if (!resp.tables.empty()) j["tables"] = resp.tables;
  return j.dump();
}

WireResponse decode_response(std::string_view line) {
  json j = parse_line(line);
  WireResponse resp;
  resp.id = require_u64(j, "id");
  if (!j.contains("status") || !j["status"].is_string())
    raise(ErrorCode::ParseError, "missing field 'status'");
  resp.status = j["status"].get<std::string>();
  if (j.contains("error") && j["error"].is_string())
    resp.error = j["error"].get<std::string>();
  if (j.contains("item")) {
    resp.has_item = true;
    if (!j["item"].is_null()) resp.item = item_from_json(j["item"]);
  }
  if (j.contains("items")) {
    if (!j["items"].is_array()) raise(ErrorCode::ParseError, "items must be an array");
    for (const auto& item : j["items"]) resp.items.push_back(item_from_json(item));
  }
  if (j.contains("tables")) {
    if (!j["tables"].is_array()) raise(ErrorCode::ParseError, "tables must be an array");
    for (const auto& t : j["tables"]) {
      if (!t.is_string()) raise(ErrorCode::ParseError, "table names must be strings");
      resp.tables.push_back(t.get<std::string>());
    }
  }
  return resp;
}

}  // namespace cloudtree
