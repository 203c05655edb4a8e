#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "cloudtree/session.hpp"

namespace cloudtree {

// Prefix tree stored node-per-item in a remote table. Each edge carries one
// character; membership truth is the word flag on the node ending the path.
// New nodes flow through the session's aggregation buffer and are flushed
// once per operation.
class PrefixTree {
 public:
  PrefixTree(std::shared_ptr<Store> backend, std::string name, bool create_new,
             CacheConfig cache_config = {});

  void insert(std::string_view s);
  bool query(std::string_view s);
  bool erase(std::string_view s);  // false when s is not a stored word

  void close() { session_->close(); }
  Session& session() noexcept { return *session_; }

 private:
  std::unique_ptr<Session> session_;
};

}  // namespace cloudtree
