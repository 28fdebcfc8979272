#pragma once

#include <stdexcept>
#include <string>

namespace saekit {

// Error taxonomy shared by the library and the CLI. The CLI maps each
// category to a fixed exit code and a one-line machine-parsable message.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}
  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error("config", m) {}
};

struct IoError : Error {
  explicit IoError(const std::string& m) : Error("io", m) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& m) : Error("shape", m) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& m) : Error("numeric", m) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error("parse", m) {}
};

struct NetworkError : Error {
  explicit NetworkError(const std::string& m) : Error("network", m) {}
};

}  // namespace saekit
