#pragma once

#include <stdexcept>
#include <string>

namespace ig {

// Error carrying a machine-readable code (PARSE_ERROR, EMPTY_INPUT, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace ig
