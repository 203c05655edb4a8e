#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cloudtree/store.hpp"
#include "cloudtree/wire.hpp"

namespace cloudtree {

// TCP endpoint exposing the store contract over the line protocol. Each
// connection is served by its own thread; the backing store's per-item
// atomicity is the only synchronization. stop() drains in-flight requests.
class KvServer {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    std::uint16_t port = 4511;  // 0 picks an ephemeral port
    double rtt_ms = 0.0;        // artificial per-request delay
    std::string token;          // empty = no authentication
    std::string snapshot_path;  // default target of SnapshotSave
  };

  KvServer(std::shared_ptr<Store> backing, Options options);
  ~KvServer();

  KvServer(const KvServer&) = delete;
  KvServer& operator=(const KvServer&) = delete;

  void start();  // throws BindFailed
  void stop();

  std::uint16_t port() const noexcept { return port_; }
  std::string address() const;  // "host:port"

  // Wire-level request counters, one bucket per op plus malformed lines.
  std::map<std::string, std::uint64_t> request_counts() const;
  std::uint64_t total_requests() const;

 private:
  void accept_loop();
  void serve_connection(int fd);
  WireResponse execute(const WireRequest& req);

  std::shared_ptr<Store> backing_;
  Options options_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  mutable std::mutex mutex_;
  std::vector<std::thread> workers_;
  std::vector<int> open_fds_;
  std::map<std::string, std::uint64_t> counts_;
};

// Store backend speaking the wire protocol to a KvServer. Every contract
// operation maps to exactly one request; calls are serialized over one
// connection, so the handle may be shared between threads.
class RemoteStore : public Store {
 public:
  RemoteStore(const std::string& address, StoreConfig config = {},
              std::string token = {});  // throws ConnectFailed
  ~RemoteStore() override;

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

 private:
  WireResponse roundtrip(WireRequest req);

  StoreConfig config_;
  std::string token_;
  mutable std::mutex mutex_;
  int fd_ = -1;
  std::uint64_t next_id_ = 0;
  std::string inbox_;  // bytes received but not yet consumed as lines
};

}  // namespace cloudtree
