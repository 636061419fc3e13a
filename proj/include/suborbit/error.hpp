#pragma once

#include <stdexcept>
#include <string>

namespace suborbit {

enum class ErrorKind {
    InvalidInput,
    DimensionMismatch,
    Degenerate,
    Infeasible,
    Exhausted,
    Parse,
    UnknownCommand,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace suborbit
