#pragma once

#include <map>
#include <mutex>
#include <string>

#include "cloudtree/store.hpp"

namespace cloudtree {

// In-memory backend. Latency is simulated by bookkeeping only (sessions
// derive elapsed time from request counts), so nothing here sleeps.
class MemoryStore : public Store {
 public:
  explicit MemoryStore(StoreConfig config = {});

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

  const StoreConfig& config() const override { return config_; }

  void snapshot_save(const std::string& path) override;
  void snapshot_load(const std::string& path) override;

 private:
  using Table = std::map<NodeKey, Item>;

  Table& table_ref(const std::string& name);  // caller holds mutex_

  StoreConfig config_;
  mutable std::mutex mutex_;
  std::map<std::string, Table> tables_;
};

// MemoryStore bound to a snapshot file: loads it on construction when it
// exists and writes it back on save()/destruction. An empty path falls back
// to the CLOUDTREE_SNAPSHOT environment variable.
class FileStore : public MemoryStore {
 public:
  explicit FileStore(std::string path, StoreConfig config = {});
  ~FileStore() override;

  void save();
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Default snapshot path from CLOUDTREE_SNAPSHOT, empty when unset.
std::string env_snapshot_path();

}  // namespace cloudtree
