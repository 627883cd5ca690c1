#pragma once

#include <stdexcept>
#include <string>

namespace tplroute {

enum class ErrorKind {
  Parse,
  Validation,
  DeadState,
  Collision,
  Unroutable,
  CapExceeded,
  SizeCap,
  InfeasiblePlacement,
  Config,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::DeadState: return "dead_state";
    case ErrorKind::Collision: return "collision";
    case ErrorKind::Unroutable: return "unroutable";
    case ErrorKind::CapExceeded: return "cap_exceeded";
    case ErrorKind::SizeCap: return "size_cap";
    case ErrorKind::InfeasiblePlacement: return "infeasible_placement";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tplroute
