#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cloudtree {

enum class ErrorCode {
  InvalidArgument,
  InvalidName,
  AlreadyExists,
  NoSuchTable,
  NoSuchTree,
  KindMismatch,
  BatchTooLarge,
  ConflictingKeys,
  TypeMismatch,
  ParseError,
  SchemaError,
  DuplicateLabel,
  CorruptSnapshot,
  IoError,
  SessionClosed,
  SessionPoisoned,
  IdSpaceExhausted,
  BindFailed,
  ConnectFailed,
  ConnectionLost,
  BadRequest,
  Unauthorized,
  Unsupported,
  ServerError,
};

// Stable snake_case identifiers, also used as wire status codes.
std::string_view to_string(ErrorCode code) noexcept;
ErrorCode error_code_from_string(std::string_view s);  // unknown -> ServerError

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cloudtree
