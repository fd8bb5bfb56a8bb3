#pragma once

#include <stdexcept>
#include <string>

namespace qb {

// Error taxonomy mirrors the CLI exit codes: bad input/config (2),
// numerical degeneracy (3), failed property check (4).
enum class ErrorKind { config = 2, degeneracy = 3, check = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_config(const std::string& msg) { throw Error(ErrorKind::config, msg); }
[[noreturn]] inline void fail_degenerate(const std::string& msg) {
  throw Error(ErrorKind::degeneracy, msg);
}
[[noreturn]] inline void fail_check(const std::string& msg) { throw Error(ErrorKind::check, msg); }

}  // namespace qb
