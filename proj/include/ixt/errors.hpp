#pragma once

#include <stdexcept>
#include <string>

namespace ixt {

enum class ErrorKind {
  Validation,   // malformed input data (bad row sums, bad parameters)
  Structural,   // chain violates a structural assumption (reducible, non-tree)
  Budget,       // instance exceeds the size/step budget of the method
  Divergence,   // iteration cap exceeded, likely non-irreducible or numeric failure
  Unsupported,  // operation not defined for this chain (e.g. non-reversible spectrum)
  Io,
  Config,
};

inline const char* to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Structural: return "structural";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Io: return "io";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

// Every error thrown by the library carries a kind so callers (and the CLI)
// can map it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace ixt
