#pragma once

#include <stdexcept>
#include <string>

namespace bdqmap {

// Error taxonomy mirrored by the CLI exit codes:
//   ConfigError  -> 2  (bad parameters, malformed or inconsistent inputs)
//   IoError      -> 3  (filesystem and parse failures)
//   NumericError -> 4  (a numeric precondition does not hold, e.g. n*q0 <= 1)
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bdqmap
