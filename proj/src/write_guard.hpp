#pragma once

#include "cloudtree/session.hpp"

namespace cloudtree::detail {

// Poisons the session when an exception escapes a mutating tree operation
// that already issued remote writes or still holds buffered ones; partially
// applied tree surgery is not recoverable.
class WriteGuard {
 public:
  explicit WriteGuard(Session& session)
      : session_(session), writes_before_(write_count(session)) {}

  ~WriteGuard() {
    if (!armed_) return;
    if (!session_.cache().buffer_empty() || write_count(session_) != writes_before_)
      session_.poison();
  }

  void disarm() noexcept { armed_ = false; }

 private:
  static std::uint64_t write_count(const Session& s) {
    StoreMetrics m = s.metrics();
    return m.put + m.update + m.del + m.batch_write;
  }

  Session& session_;
  std::uint64_t writes_before_;
  bool armed_ = true;
};

}  // namespace cloudtree::detail
