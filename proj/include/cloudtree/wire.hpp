#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cloudtree/store.hpp"

namespace cloudtree {

// Newline-delimited protocol: one canonical-JSON object per message, item
// payloads encoded exactly like the snapshot format. Requests carry a
// correlation id echoed by the single response; lines are capped at 1 MiB.
inline constexpr std::size_t kMaxWireLine = 1 << 20;

enum class WireOp {
  CreateTable,
  DeleteTable,
  ListTables,
  Get,
  Put,
  Update,
  Delete,
  BatchGet,
  BatchWrite,
  SnapshotSave,
};

std::string_view to_string(WireOp op) noexcept;
WireOp wire_op_from_string(std::string_view s);  // throws ParseError

struct WireRequest {
  std::uint64_t id = 0;
  WireOp op = WireOp::Get;
  std::string table;
  NodeKey key = 0;
  std::vector<NodeKey> keys;           // BatchGet
  std::optional<Item> item;            // Put
  std::vector<UpdateAction> actions;   // Update
  std::vector<Item> puts;              // BatchWrite
  std::vector<NodeKey> deletes;        // BatchWrite
  std::string path;                    // SnapshotSave
  std::string token;                   // optional shared secret

  bool operator==(const WireRequest&) const = default;
};

struct WireResponse {
  std::uint64_t id = 0;
  std::string status = "ok";  // "ok" or an error-code string
  std::string error;          // human-readable detail on failure
  std::optional<Item> item;          // Get
  std::vector<Item> items;           // BatchGet
  std::vector<std::string> tables;   // ListTables
  bool has_item = false;             // Get: distinguishes absent from omitted

  bool ok() const noexcept { return status == "ok"; }
  bool operator==(const WireResponse&) const = default;
};

std::string encode_request(const WireRequest& req);   // no trailing newline
WireRequest decode_request(std::string_view line);    // throws ParseError
std::string encode_response(const WireResponse& resp);
WireResponse decode_response(std::string_view line);

}  // namespace cloudtree
