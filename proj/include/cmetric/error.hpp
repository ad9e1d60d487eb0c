#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace cmetric {

enum class ErrorKind {
  parse,
  validation,
  range,
  parameter,
  not_present,
  series_too_short,
  config,
  io,
  internal,
};

const char* to_string(ErrorKind kind) noexcept;

// Process exit code for a failure of this kind (2 validation, 3 I/O, 4 config).
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> line = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  // 1-based input line for parse errors, when known.
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> line_;
};

}  // namespace cmetric
