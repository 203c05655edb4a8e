#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cloudtree/error.hpp"

namespace cloudtree {

using NodeKey = std::uint64_t;
using StringSet = std::set<std::string>;

// A single attribute value: signed 64-bit integer, UTF-8 string, boolean, or
// a set of unique non-empty strings. Construct through the factories; the raw
// variant is private so that a const char* can never silently become a bool.
class AttributeValue {
 public:
  enum class Kind { Number, String, Bool, Set };

  static AttributeValue number(std::int64_t n) { return AttributeValue(n); }
  static AttributeValue str(std::string s) { return AttributeValue(std::move(s)); }
  static AttributeValue boolean(bool b) { return AttributeValue(b); }
  static AttributeValue set(StringSet elements);

  Kind kind() const noexcept { return static_cast<Kind>(value_.index()); }
  bool is_set() const noexcept { return kind() == Kind::Set; }

  std::int64_t as_number() const { return std::get<std::int64_t>(value_); }
  const std::string& as_string() const { return std::get<std::string>(value_); }
  bool as_bool() const { return std::get<bool>(value_); }
  const StringSet& as_set() const { return std::get<StringSet>(value_); }
  StringSet& as_set() { return std::get<StringSet>(value_); }

  bool operator==(const AttributeValue&) const = default;

 private:
  explicit AttributeValue(std::int64_t n) : value_(n) {}
  explicit AttributeValue(std::string s) : value_(std::move(s)) {}
  explicit AttributeValue(bool b) : value_(b) {}
  explicit AttributeValue(StringSet s) : value_(std::move(s)) {}

  std::variant<std::int64_t, std::string, bool, StringSet> value_;
};

using AttributeMap = std::map<std::string, AttributeValue>;

struct Item {
  NodeKey key = 0;
  AttributeMap attributes;

  bool operator==(const Item&) const = default;
};

// One element of an update_item action list. All actions in a list apply
// atomically; a failing action leaves the item untouched.
struct UpdateAction {
  enum class Kind { Set, Remove, SetAdd, SetRemove };

  Kind kind = Kind::Set;
  std::string name;
  std::optional<AttributeValue> value;  // Set only
  std::string element;                  // SetAdd / SetRemove only

  static UpdateAction set(std::string name, AttributeValue value);
  static UpdateAction remove(std::string name);
  static UpdateAction set_add(std::string name, std::string element);
  static UpdateAction set_remove(std::string name, std::string element);

  bool operator==(const UpdateAction&) const = default;
};

struct BatchWriteRequest {
  std::vector<Item> puts;
  std::vector<NodeKey> deletes;

  std::size_t size() const noexcept { return puts.size() + deletes.size(); }
  bool operator==(const BatchWriteRequest&) const = default;
};

struct StoreConfig {
  double rtt_ms = 20.0;          // simulated round-trip per remote request
  std::size_t batch_limit = 25;  // max puts+deletes (or keys) per batch call
  bool strong_consistency = true;
};

// Per-session request counters. simulated_elapsed_ms is derived as
// total_requests() * rtt while rtt is constant, which it always is here.
struct StoreMetrics {
  std::uint64_t get = 0;
  std::uint64_t put = 0;
  std::uint64_t update = 0;
  std::uint64_t del = 0;
  std::uint64_t batch_get = 0;
  std::uint64_t batch_write = 0;
  std::uint64_t items_read = 0;
  std::uint64_t items_written = 0;
  double simulated_elapsed_ms = 0.0;

  std::uint64_t total_requests() const noexcept {
    return get + put + update + del + batch_get + batch_write;
  }
};

// The remote key-value store contract. One table per tree; items are
// schemaless attribute maps addressed by an unsigned 64-bit key. Every
// operation is atomic and linearizable at the item level and counts as
// exactly one remote request. Implementations are safe for concurrent
// callers.
class Store {
 public:
  virtual ~Store() = default;

  virtual void create_table(const std::string& name) = 0;
  virtual void delete_table(const std::string& name) = 0;
  virtual std::vector<std::string> list_tables() = 0;

  virtual std::optional<Item> get_item(const std::string& table, NodeKey key) = 0;
  virtual void put_item(const std::string& table, const Item& item) = 0;
  virtual void update_item(const std::string& table, NodeKey key,
                           const std::vector<UpdateAction>& actions) = 0;
  virtual void delete_item(const std::string& table, NodeKey key) = 0;

  virtual std::vector<Item> batch_get(const std::string& table,
                                      const std::vector<NodeKey>& keys) = 0;
  virtual void batch_write(const std::string& table, const BatchWriteRequest& req) = 0;

  virtual const StoreConfig& config() const = 0;

  // Snapshot persistence; only file-capable backends support these.
  virtual void snapshot_save(const std::string& path);
  virtual void snapshot_load(const std::string& path);
};

// Counting decorator. Wraps any backend and records the per-kind request
// counters a session reports; the wrapped handle stays shared.
class MetricsStore : public Store {
 public:
  explicit MetricsStore(std::shared_ptr<Store> inner);

  void create_table(const std::string& name) override;
  void delete_table(const std::string& name) override;
  std::vector<std::string> list_tables() override;
  std::optional<Item> get_item(const std::string& table, NodeKey key) override;
  void put_item(const std::string& table, const Item& item) override;
  void update_item(const std::string& table, NodeKey key,
                   const std::vector<UpdateAction>& actions) override;
  void delete_item(const std::string& table, NodeKey key) override;
  std::vector<Item> batch_get(const std::string& table,
                              const std::vector<NodeKey>& keys) override;
  void batch_write(const std::string& table, const BatchWriteRequest& req) override;
  const StoreConfig& config() const override;
  void snapshot_save(const std::string& path) override;
  void snapshot_load(const std::string& path) override;

  StoreMetrics metrics() const;

 private:
  std::shared_ptr<Store> inner_;
  mutable std::mutex mutex_;
  StoreMetrics counters_;
};

// true iff name matches [A-Za-z0-9_.-]{1,255}
bool valid_table_name(std::string_view name) noexcept;

// Throws InvalidArgument on empty attribute names or empty string-sets.
void validate_item(const Item& item);

// Applies the actions to a copy of attrs and commits only on full success.
void apply_update_actions(AttributeMap& attrs, const std::vector<UpdateAction>& actions);

}  // namespace cloudtree
