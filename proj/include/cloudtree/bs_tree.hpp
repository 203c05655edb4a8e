#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "cloudtree/session.hpp"

namespace cloudtree {

// Binary search tree stored node-per-item in a remote table. Child entries
// embed the child's key ("id:key"), so descent direction is decided from the
// fetched node alone. Deletion replaces a removed key with its in-order
// predecessor (or successor when only a right subtree exists) and keeps the
// parent's embedded label coherent.
class BSTree {
 public:
  BSTree(std::shared_ptr<Store> backend, std::string name, bool create_new,
         CacheConfig cache_config = {});

  void insert(std::int64_t key);
  bool query(std::int64_t key);
  bool erase(std::int64_t key);  // false when key is absent

  void close() { session_->close(); }
  Session& session() noexcept { return *session_; }

 private:
  void remove_at(TreeNode cur, std::optional<TreeNode> parent);

  std::unique_ptr<Session> session_;
};

}  // namespace cloudtree
