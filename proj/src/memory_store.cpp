#include "cloudtree/memory_store.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "cloudtree/item_json.hpp"

namespace cloudtree {

namespace {
constexpr std::string_view kSnapshotHeader = "CLOUDTREE-KV v1";
}

MemoryStore::MemoryStore(StoreConfig config) : config_(config) {
  if (config_.batch_limit < 1) raise(ErrorCode::InvalidArgument, "batch_limit must be >= 1");
  if (config_.rtt_ms < 0) raise(ErrorCode::InvalidArgument, "rtt must be >= 0");
}

MemoryStore::Table& MemoryStore::table_ref(const std::string& name) {
  auto it = tables_.find(name);
  if (it == tables_.end()) raise(ErrorCode::NoSuchTable, "table '" + name + "' does not exist");
  return it->second;
}

void MemoryStore::create_table(const std::string& name) {
  if (!valid_table_name(name)) raise(ErrorCode::InvalidName, "invalid table name '" + name + "'");
  std::lock_guard lock(mutex_);
  auto [it, inserted] = tables_.try_emplace(name);
  if (!inserted) raise(ErrorCode::AlreadyExists, "table '" + name + "' already exists");
}

void MemoryStore::delete_table(const std::string& name) {
  std::lock_guard lock(mutex_);
  if (tables_.erase(name) == 0)
    raise(ErrorCode::NoSuchTable, "table '" + name + "' does not exist");
}

std::vector<std::string> MemoryStore::list_tables() {
  std::lock_guard lock(mutex_);
  std::vector<std::string> names;
  names.reserve(tables_.size());
  for (const auto& [name, table] : tables_) names.push_back(name);
  return names;
}

std::optional<Item> MemoryStore::get_item(const std::string& table, NodeKey key) {
  std::lock_guard lock(mutex_);
  Table& t = table_ref(table);
  auto it = t.find(key);
  if (it == t.end()) return std::nullopt;
  return it->second;
}

void MemoryStore::put_item(const std::string& table, const Item& item) {
  validate_item(item);
  std::lock_guard lock(mutex_);
  table_ref(table).insert_or_assign(item.key, item);
}

void MemoryStore::update_item(const std::string& table, NodeKey key,
                              const std::vector<UpdateAction>& actions) {
  if (actions.empty()) raise(ErrorCode::InvalidArgument, "empty action list");
  std::lock_guard lock(mutex_);
  Table& t = table_ref(table);
  auto it = t.find(key);
  if (it == t.end()) {
    // upsert: start from an empty item
    Item item{key, {}};
    apply_update_actions(item.attributes, actions);
    t.insert_or_assign(key, std::move(item));
  } else {
    apply_update_actions(it->second.attributes, actions);
  }
}

void MemoryStore::delete_item(const std::string& table, NodeKey key) {
  std::lock_guard lock(mutex_);
  table_ref(table).erase(key);  // deleting an absent key succeeds
}

std::vector<Item> MemoryStore::batch_get(const std::string& table,
                                         const std::vector<NodeKey>& keys) {
  if (keys.empty()) raise(ErrorCode::InvalidArgument, "batch_get with no keys");
  if (keys.size() > config_.batch_limit)
    raise(ErrorCode::BatchTooLarge, "batch_get of " + std::to_string(keys.size()) + " keys");
  std::lock_guard lock(mutex_);
  Table& t = table_ref(table);
  std::vector<Item> items;
  std::unordered_set<NodeKey> seen;
  for (NodeKey key : keys) {
    if (!seen.insert(key).second) continue;
    auto it = t.find(key);
    if (it != t.end()) items.push_back(it->second);
  }
  return items;
}

void MemoryStore::batch_write(const std::string& table, const BatchWriteRequest& req) {
  if (req.size() == 0) raise(ErrorCode::InvalidArgument, "empty batch_write");
  if (req.size() > config_.batch_limit)
    raise(ErrorCode::BatchTooLarge, "batch_write of " + std::to_string(req.size()) + " writes");
  std::unordered_set<NodeKey> put_keys;
  for (const Item& item : req.puts) {
    validate_item(item);
    put_keys.insert(item.key);
  }
  for (NodeKey key : req.deletes) {
    if (put_keys.count(key))
      raise(ErrorCode::ConflictingKeys, "key " + std::to_string(key) + " both put and deleted");
  }
  std::lock_guard lock(mutex_);
  Table& t = table_ref(table);
  for (const Item& item : req.puts) t.insert_or_assign(item.key, item);
  for (NodeKey key : req.deletes) t.erase(key);
}

void MemoryStore::snapshot_save(const std::string& path) {
  std::string target = path.empty() ? env_snapshot_path() : path;
  if (target.empty()) raise(ErrorCode::InvalidArgument, "no snapshot path given");
  std::ostringstream out;
  out << kSnapshotHeader << '\n';
  {
    std::lock_guard lock(mutex_);
    for (const auto& [name, table] : tables_) {
      out << "TABLE " << name << '\n';
      for (const auto& [key, item] : table) {
        out << "ITEM " << name << ' ' << key << ' '
            << canonical_attributes(item.attributes) << '\n';
      }
    }
  }
  std::ofstream file(target, std::ios::binary | std::ios::trunc);
  if (!file) raise(ErrorCode::IoError, "cannot open '" + target + "' for writing");
  file << out.str();
  if (!file.flush()) raise(ErrorCode::IoError, "write to '" + target + "' failed");
}

void MemoryStore::snapshot_load(const std::string& path) {
  std::string source = path.empty() ? env_snapshot_path() : path;
  if (source.empty()) raise(ErrorCode::InvalidArgument, "no snapshot path given");
  std::ifstream file(source, std::ios::binary);
  if (!file) raise(ErrorCode::IoError, "cannot open '" + source + "'");
  std::string line;
  if (!std::getline(file, line) || line != kSnapshotHeader)
    raise(ErrorCode::CorruptSnapshot, "bad snapshot header");

  std::map<std::string, Table> loaded;
  std::size_t lineno = 1;
  while (std::getline(file, line)) {
    ++lineno;
    const std::string where = " at line " + std::to_string(lineno);
    if (line.rfind("TABLE ", 0) == 0) {
      std::string name = line.substr(6);
      if (!valid_table_name(name) || !loaded.try_emplace(name).second)
        raise(ErrorCode::CorruptSnapshot, "bad TABLE record" + where);
    } else if (line.rfind("ITEM ", 0) == 0) {
      std::istringstream fields(line.substr(5));
      std::string name;
      NodeKey key = 0;
      if (!(fields >> name >> key))
        raise(ErrorCode::CorruptSnapshot, "bad ITEM record" + where);
      std::string json_text;
      std::getline(fields, json_text);
      if (json_text.empty() || json_text.front() != ' ')
        raise(ErrorCode::CorruptSnapshot, "bad ITEM record" + where);
      json_text.erase(0, 1);
      auto it = loaded.find(name);
      if (it == loaded.end())
        raise(ErrorCode::CorruptSnapshot, "ITEM for unknown table" + where);
      try {
        it->second.insert_or_assign(key, Item{key, parse_canonical_attributes(json_text)});
      } catch (const Error&) {
        raise(ErrorCode::CorruptSnapshot, "unparsable ITEM payload" + where);
      }
    } else {
      raise(ErrorCode::CorruptSnapshot, "unknown record" + where);
    }
  }
  if (file.bad()) raise(ErrorCode::IoError, "read from '" + source + "' failed");

  std::lock_guard lock(mutex_);
  tables_ = std::move(loaded);
}

FileStore::FileStore(std::string path, StoreConfig config)
    : MemoryStore(config), path_(path.empty() ? env_snapshot_path() : std::move(path)) {
  if (path_.empty())
    raise(ErrorCode::InvalidArgument, "file backend needs a path (or CLOUDTREE_SNAPSHOT)");
  if (std::ifstream probe(path_); probe.good()) snapshot_load(path_);
}

FileStore::~FileStore() {
  try {
    save();
  } catch (...) {
    // destructor save is best-effort; explicit save() reports failures
  }
}

void FileStore::save() { snapshot_save(path_); }

std::string env_snapshot_path() {
  const char* value = std::getenv("CLOUDTREE_SNAPSHOT");
  return value ? value : "";
}

}  // namespace cloudtree
