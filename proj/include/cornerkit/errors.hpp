#pragma once

#include <stdexcept>
#include <string>

namespace cornerkit {

// Base for all structured errors thrown by the library.  `code` is a stable
// machine-readable tag; `what()` carries the human-readable message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

private:
  std::string code_;
};

class InvalidArgument : public Error {
public:
  InvalidArgument(const std::string& code, const std::string& message)
      : Error(code, message) {}
};

class ComputationError : public Error {
public:
  ComputationError(const std::string& code, const std::string& message)
      : Error(code, message) {}
};

// Thrown when a requested problem size exceeds the configured cap.
class CapExceeded : public Error {
public:
  CapExceeded(const std::string& message) : Error("cap_exceeded", message) {}
};

}  // namespace cornerkit
