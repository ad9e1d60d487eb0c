#include "cmetric/error.hpp"

namespace cmetric {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse: return "parse error";
    case ErrorKind::validation: return "validation error";
    case ErrorKind::range: return "range error";
    case ErrorKind::parameter: return "parameter error";
    case ErrorKind::not_present: return "not-present error";
    case ErrorKind::series_too_short: return "series-too-short error";
    case ErrorKind::config: return "configuration error";
    case ErrorKind::io: return "I/O error";
    case ErrorKind::internal: return "internal error";
  }
  return "error";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::validation:
    case ErrorKind::range:
    case ErrorKind::not_present:
    case ErrorKind::series_too_short:
      return 2;
    case ErrorKind::io:
      return 3;
    case ErrorKind::config:
    case ErrorKind::parameter:
      return 4;
    case ErrorKind::internal:
      return 1;
  }
  return 1;
}

namespace {
std::string decorate(ErrorKind kind, const std::string& what, std::optional<std::size_t> line) {
  std::string out = to_string(kind);
  if (line) out += " at line " + std::to_string(*line);
  out += ": ";
  out += what;
  return out;
}
}  // namespace

Error::Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> line)
    : std::runtime_error(decorate(kind, what, line)), kind_(kind), line_(line) {}

}  // namespace cmetric
