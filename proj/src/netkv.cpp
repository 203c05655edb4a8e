#include "cloudtree/netkv.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

namespace cloudtree {

namespace {

struct Endpoint {
  std::string host;
  std::uint16_t port;
};

Endpoint parse_address(const std::string& address) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos || colon + 1 == address.size())
    raise(ErrorCode::InvalidArgument, "address must be host:port, got '" + address + "'");
  std::string host = address.substr(0, colon);
  if (host.empty()) host = "127.0.0.1";
  int port = 0;
  try {
    port = std::stoi(address.substr(colon + 1));
  } catch (...) {
    raise(ErrorCode::InvalidArgument, "bad port in '" + address + "'");
  }
  if (port < 0 || port > 65535)
    raise(ErrorCode::InvalidArgument, "bad port in '" + address + "'");
  return Endpoint{host, static_cast<std::uint16_t>(port)};
}

sockaddr_in make_sockaddr(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    raise(ErrorCode::InvalidArgument, "not an IPv4 address: '" + host + "'");
  return addr;
}

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

// Reads one newline-terminated line into `line` (newline stripped), keeping
// surplus bytes in `inbox`. Returns false on EOF/error with nothing pending.
bool read_line(int fd, std::string& inbox, std::string& line) {
  while (true) {
    auto pos = inbox.find('\n');
    if (pos != std::string::npos) {
      line.assign(inbox, 0, pos);
      inbox.erase(0, pos + 1);
      return true;
    }
    if (inbox.size() > kMaxWireLine) return false;  // oversized, drop connection
    char buf[4096];
    ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n == 0) return false;
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    inbox.append(buf, static_cast<std::size_t>(n));
  }
}

}  // namespace

KvServer::KvServer(std::shared_ptr<Store> backing, Options options)
    : backing_(std::move(backing)), options_(std::move(options)) {}

KvServer::~KvServer() { stop(); }

void KvServer::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) raise(ErrorCode::BindFailed, std::strerror(errno));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr = make_sockaddr(options_.host, options_.port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(listen_fd_, 64) != 0) {
    int err = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    raise(ErrorCode::BindFailed,
          options_.host + ":" + std::to_string(options_.port) + ": " + std::strerror(err));
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  acceptor_ = std::thread([this] { accept_loop(); });
}

void KvServer::stop() {
  if (listen_fd_ < 0) return;
  stopping_ = true;
  ::shutdown(listen_fd_, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mutex_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RD);  // finish in-flight, then EOF
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
  ::close(listen_fd_);
  listen_fd_ = -1;
}

std::string KvServer::address() const {
  return options_.host + ":" + std::to_string(port_);
}

void KvServer::accept_loop() {
  while (!stopping_) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      break;  // listener shut down
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    std::lock_guard lock(mutex_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    open_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void KvServer::serve_connection(int fd) {
  std::string inbox, line;
  while (read_line(fd, inbox, line)) {
    if (line.empty()) continue;
    WireResponse resp;
    try {
      WireRequest req = decode_request(line);
      {
        std::lock_guard lock(mutex_);
        counts_[std::string(to_string(req.op))] += 1;
      }
      if (options_.rtt_ms > 0)
        std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(options_.rtt_ms));
      if (!options_.token.empty() && req.token != options_.token) {
        resp.id = req.id;
        resp.status = std::string(to_string(ErrorCode::Unauthorized));
        resp.error = "bad or missing token";
      } else {
        resp = execute(req);
      }
    } catch (const Error& e) {
      std::lock_guard lock(mutex_);
      counts_["bad_request"] += 1;
      resp.id = 0;
      resp.status = std::string(to_string(ErrorCode::BadRequest));
      resp.error = e.what();
    }
    if (!send_all(fd, encode_response(resp) + "\n")) break;
  }
  ::close(fd);
  std::lock_guard lock(mutex_);
  std::erase(open_fds_, fd);
}

WireResponse KvServer::execute(const WireRequest& req) {
  WireResponse resp;
  resp.id = req.id;
  try {
    switch (req.op) {
      case WireOp::CreateTable:
        backing_->create_table(req.table);
        break;
      case WireOp::DeleteTable:
        backing_->delete_table(req.table);
        break;
      case WireOp::ListTables:
        resp.tables = backing_->list_tables();
        break;
      case WireOp::Get:
        resp.item = backing_->get_item(req.table, req.key);
        resp.has_item = true;
        break;
      case WireOp::Put:
        backing_->put_item(req.table, *req.item);
        break;
      case WireOp::Update:
        backing_->update_item(req.table, req.key, req.actions);
        break;
      case WireOp::Delete:
        backing_->delete_item(req.table, req.key);
        break;
      case WireOp::BatchGet:
        resp.items = backing_->batch_get(req.table, req.keys);
        break;
      case WireOp::BatchWrite:
        backing_->batch_write(req.table, BatchWriteRequest{req.puts, req.deletes});
        break;
      case WireOp::SnapshotSave:
        backing_->snapshot_save(req.path.empty() ? options_.snapshot_path : req.path);
        break;
    }
  } catch (const Error& e) {
    resp.status = std::string(to_string(e.code()));
    resp.error = e.what();
  } catch (const std::exception& e) {
    resp.status = std::string(to_string(ErrorCode::ServerError));
    resp.error = e.what();
  }
  return resp;
}

std::map<std::string, std::uint64_t> KvServer::request_counts() const {
  std::lock_guard lock(mutex_);
  return counts_;
}

std::uint64_t KvServer::total_requests() const {
  std::lock_guard lock(mutex_);
  std::uint64_t total = 0;
  for (const auto& [op, n] : counts_) total += n;
  return total;
}

RemoteStore::RemoteStore(const std::string& address, StoreConfig config, std::string token)
    : config_(config), token_(std::move(token)) {
  Endpoint ep = parse_address(address);
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) raise(ErrorCode::ConnectFailed, std::strerror(errno));
  sockaddr_in addr = make_sockaddr(ep.host, ep.port);
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    int err = errno;
    ::close(fd_);
    fd_ = -1;
    raise(ErrorCode::ConnectFailed, address + ": " + std::strerror(err));
  }
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

RemoteStore::~RemoteStore() {
  if (fd_ >= 0) ::close(fd_);
}

WireResponse RemoteStore::roundtrip(WireRequest req) {
  std::lock_guard lock(mutex_);
  if (fd_ < 0) raise(ErrorCode::ConnectionLost, "connection already closed");
  req.id = ++next_id_;
  req.token = token_;
  std::string line;
  if (!send_all(fd_, encode_request(req) + "\n") || !read_line(fd_, inbox_, line)) {
    ::close(fd_);
    fd_ = -1;
    raise(ErrorCode::ConnectionLost, "server closed the connection");
  }
  WireResponse resp = decode_response(line);
  if (resp.id != req.id && resp.id != 0)
    raise(ErrorCode::ParseError, "response id does not match request id");
  if (!resp.ok()) raise(error_code_from_string(resp.status), resp.error);
  return resp;
}

void RemoteStore::create_table(const std::string& name) {
  WireRequest req;
  req.op = WireOp::CreateTable;
  req.table = name;
  roundtrip(std::move(req));
}

void RemoteStore::delete_table(const std::string& name) {
  WireRequest req;
  req.op = WireOp::DeleteTable;
  req.table = name;
  roundtrip(std::move(req));
}

std::vector<std::string> RemoteStore::list_tables() {
  WireRequest req;
  req.op = WireOp::ListTables;
  return roundtrip(std::move(req)).tables;
}

std::optional<Item> RemoteStore::get_item(const std::string& table, NodeKey key) {
  WireRequest req;
  req.op = WireOp::Get;
  req.table = table;
  req.key = key;
  return roundtrip(std::move(req)).item;
}

void RemoteStore::put_item(const std::string& table, const Item& item) {
  WireRequest req;
  req.op = WireOp::Put;
  req.table = table;
  req.item = item;
  roundtrip(std::move(req));
}

void RemoteStore::update_item(const std::string& table, NodeKey key,
                              const std::vector<UpdateAction>& actions) {
  WireRequest req;
  req.op = WireOp::Update;
  req.table = table;
  req.key = key;
  req.actions = actions;
  roundtrip(std::move(req));
}

void RemoteStore::delete_item(const std::string& table, NodeKey key) {
  WireRequest req;
  req.op = WireOp::Delete;
  req.table = table;
  req.key = key;
  roundtrip(std::move(req));
}

std::vector<Item> RemoteStore::batch_get(const std::string& table,
                                         const std::vector<NodeKey>& keys) {
  WireRequest req;
  req.op = WireOp::BatchGet;
  req.table = table;
  req.keys = keys;
  return roundtrip(std::move(req)).items;
}

void RemoteStore::batch_write(const std::string& table, const BatchWriteRequest& request) {
  WireRequest req;
  req.op = WireOp::BatchWrite;
  req.table = table;
  req.puts = request.puts;
  req.deletes = request.deletes;
  roundtrip(std::move(req));
}

void RemoteStore::snapshot_save(const std::string& path) {
  WireRequest req;
  req.op = WireOp::SnapshotSave;
  req.path = path;
  roundtrip(std::move(req));
}

}  // namespace cloudtree
