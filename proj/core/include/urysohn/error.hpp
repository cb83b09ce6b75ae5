#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace urysohn {

/// Coarse classification used by the CLI exit-code contract and by tests
/// that assert on the kind of failure rather than the message text.
enum class ErrorKind {
  precondition,  // input violates a construction's stated requirement
  parse,         // malformed serialized input
  internal,      // an invariant the library guarantees did not hold
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_precondition(const std::string& what) {
  throw Error(ErrorKind::precondition, what);
}
[[noreturn]] inline void fail_parse(const std::string& what) { throw Error(ErrorKind::parse, what); }
[[noreturn]] inline void fail_internal(const std::string& what) {
  throw Error(ErrorKind::internal, what);
}

}  // namespace urysohn
