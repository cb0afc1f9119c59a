#pragma once

#include <stdexcept>
#include <string>

namespace hierloc {

// Precondition failure on a public operation (bad shape, bad domain).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input document or file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid run configuration; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hierloc
