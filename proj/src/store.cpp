#include "cloudtree/store.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace cloudtree {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::InvalidName: return "invalid_name";
    case ErrorCode::AlreadyExists: return "already_exists";
    case ErrorCode::NoSuchTable: return "no_such_table";
    case ErrorCode::NoSuchTree: return "no_such_tree";
    case ErrorCode::KindMismatch: return "kind_mismatch";
    case ErrorCode::BatchTooLarge: return "batch_too_large";
    case ErrorCode::ConflictingKeys: return "conflicting_keys";
    case ErrorCode::TypeMismatch: return "type_mismatch";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::SchemaError: return "schema_error";
    case ErrorCode::DuplicateLabel: return "duplicate_label";
    case ErrorCode::CorruptSnapshot: return "corrupt_snapshot";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::SessionClosed: return "session_closed";
    case ErrorCode::SessionPoisoned: return "session_poisoned";
    case ErrorCode::IdSpaceExhausted: return "id_space_exhausted";
    case ErrorCode::BindFailed: return "bind_failed";
    case ErrorCode::ConnectFailed: return "connect_failed";
    case ErrorCode::ConnectionLost: return "connection_lost";
    case ErrorCode::BadRequest: return "bad_request";
    case ErrorCode::Unauthorized: return "unauthorized";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::ServerError: return "server_error";
  }
  return "server_error";
}

ErrorCode error_code_from_string(std::string_view s) {
  static const std::pair<std::string_view, ErrorCode> table[] = {
      {"invalid_argument", ErrorCode::InvalidArgument},
      {"invalid_name", ErrorCode::InvalidName},
      {"already_exists", ErrorCode::AlreadyExists},
      {"no_such_table", ErrorCode::NoSuchTable},
      {"no_such_tree", ErrorCode::NoSuchTree},
      {"kind_mismatch", ErrorCode::KindMismatch},
      {"batch_too_large", ErrorCode::BatchTooLarge},
      {"conflicting_keys", ErrorCode::ConflictingKeys},
      {"type_mismatch", ErrorCode::TypeMismatch},
      {"parse_error", ErrorCode::ParseError},
      {"schema_error", ErrorCode::SchemaError},
      {"duplicate_label", ErrorCode::DuplicateLabel},
      {"corrupt_snapshot", ErrorCode::CorruptSnapshot},
      {"io_error", ErrorCode::IoError},
      {"session_closed", ErrorCode::SessionClosed},
      {"session_poisoned", ErrorCode::SessionPoisoned},
      {"id_space_exhausted", ErrorCode::IdSpaceExhausted},
      {"bind_failed", ErrorCode::BindFailed},
      {"connect_failed", ErrorCode::ConnectFailed},
      {"connection_lost", ErrorCode::ConnectionLost},
      {"bad_request", ErrorCode::BadRequest},
      {"unauthorized", ErrorCode::Unauthorized},
      {"unsupported", ErrorCode::Unsupported},
      {"server_error", ErrorCode::ServerError},
  };
  for (const auto& [name, code] : table) {
    if (name == s) return code;
  }
  return ErrorCode::ServerError;
}

AttributeValue AttributeValue::set(StringSet elements) {
  for (const auto& e : elements) {
    if (e.empty()) raise(ErrorCode::InvalidArgument, "string-set element is empty");
  }
  return AttributeValue(std::move(elements));
}

UpdateAction UpdateAction::set(std::string name, AttributeValue value) {
  return UpdateAction{Kind::Set, std::move(name), std::move(value), {}};
}

UpdateAction UpdateAction::remove(std::string name) {
  return UpdateAction{Kind::Remove, std::move(name), std::nullopt, {}};
}

UpdateAction UpdateAction::set_add(std::string name, std::string element) {
  return UpdateAction{Kind::SetAdd, std::move(name), std::nullopt, std::move(element)};
}

UpdateAction UpdateAction::set_remove(std::string name, std::string element) {
  return UpdateAction{Kind::SetRemove, std::move(name), std::nullopt, std::move(element)};
}

bool valid_table_name(std::string_view name) noexcept {
  if (name.empty() || name.size() > 255) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '.' || c == '-';
  });
}

void validate_item(const Item& item) {
  for (const auto& [name, value] : item.attributes) {
    if (name.empty()) raise(ErrorCode::InvalidArgument, "empty attribute name");
    if (value.is_set() && value.as_set().empty())
      raise(ErrorCode::InvalidArgument, "empty string-set attribute '" + name + "'");
  }
}

namespace {

void apply_one(AttributeMap& attrs, const UpdateAction& a) {
  if (a.name.empty()) raise(ErrorCode::InvalidArgument, "empty attribute name");
  switch (a.kind) {
    case UpdateAction::Kind::Set: {
      if (!a.value) raise(ErrorCode::InvalidArgument, "set action without a value");
      if (a.value->is_set() && a.value->as_set().empty()) {
        // empty set canonicalizes to attribute absence
        attrs.erase(a.name);
      } else {
        attrs.insert_or_assign(a.name, *a.value);
      }
      break;
    }
    case UpdateAction::Kind::Remove:
      attrs.erase(a.name);
      break;
    case UpdateAction::Kind::SetAdd: {
      if (a.element.empty()) raise(ErrorCode::InvalidArgument, "empty string-set element");
      auto it = attrs.find(a.name);
      if (it == attrs.end()) {
        attrs.insert_or_assign(a.name, AttributeValue::set({a.element}));
      } else if (it->second.is_set()) {
        it->second.as_set().insert(a.element);
      } else {
        raise(ErrorCode::TypeMismatch, "set_add on non-set attribute '" + a.name + "'");
      }
      break;
    }
    case UpdateAction::Kind::SetRemove: {
      auto it = attrs.find(a.name);
      if (it == attrs.end()) break;  // removing from an absent set is a no-op
      if (!it->second.is_set())
        raise(ErrorCode::TypeMismatch, "set_remove on non-set attribute '" + a.name + "'");
      it->second.as_set().erase(a.element);
      if (it->second.as_set().empty()) attrs.erase(it);
      break;
    }
  }
}

}  // namespace

void apply_update_actions(AttributeMap& attrs, const std::vector<UpdateAction>& actions) {
  AttributeMap next = attrs;
  for (const auto& a : actions) apply_one(next, a);
  attrs = std::move(next);
}

void Store::snapshot_save(const std::string&) {
  raise(ErrorCode::Unsupported, "backend does not support snapshots");
}

void Store::snapshot_load(const std::string&) {
  raise(ErrorCode::Unsupported, "backend does not support snapshots");
}

MetricsStore::MetricsStore(std::shared_ptr<Store> inner) : inner_(std::move(inner)) {}

void MetricsStore::create_table(const std::string& name) { inner_->create_table(name); }
void MetricsStore::delete_table(const std::string& name) { inner_->delete_table(name); }
std::vector<std::string> MetricsStore::list_tables() { return inner_->list_tables(); }

std::optional<Item> MetricsStore::get_item(const std::string& table, NodeKey key) {
  auto item = inner_->get_item(table, key);
  std::lock_guard lock(mutex_);
  counters_.get += 1;
  if (item) counters_.items_read += 1;
  return item;
}

void MetricsStore::put_item(const std::string& table, const Item& item) {
  inner_->put_item(table, item);
  std::lock_guard lock(mutex_);
  counters_.put += 1;
  counters_.items_written += 1;
}

void MetricsStore::update_item(const std::string& table, NodeKey key,
                               const std::vector<UpdateAction>& actions) {
  inner_->update_item(table, key, actions);
  std::lock_guard lock(mutex_);
  counters_.update += 1;
  counters_.items_written += 1;
}

void MetricsStore::delete_item(const std::string& table, NodeKey key) {
  inner_->delete_item(table, key);
  std::lock_guard lock(mutex_);
  counters_.del += 1;
}

std::vector<Item> MetricsStore::batch_get(const std::string& table,
                                          const std::vector<NodeKey>& keys) {
  auto items = inner_->batch_get(table, keys);
  std::lock_guard lock(mutex_);
  counters_.batch_get += 1;
  counters_.items_read += items.size();
  return items;
}

void MetricsStore::batch_write(const std::string& table, const BatchWriteRequest& req) {
  inner_->batch_write(table, req);
  std::lock_guard lock(mutex_);
  counters_.batch_write += 1;
  counters_.items_written += req.puts.size();
}

const StoreConfig& MetricsStore::config() const { return inner_->config(); }

void MetricsStore::snapshot_save(const std::string& path) { inner_->snapshot_save(path); }
void MetricsStore::snapshot_load(const std::string& path) { inner_->snapshot_load(path); }

StoreMetrics MetricsStore::metrics() const {
  std::lock_guard lock(mutex_);
  StoreMetrics m = counters_;
  m.simulated_elapsed_ms = static_cast<double>(m.total_requests()) * inner_->config().rtt_ms;
  return m;
}

}  // namespace cloudtree
