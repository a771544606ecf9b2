#pragma once

#include <stdexcept>
#include <string>

namespace typerank {

// Malformed or inconsistent input data (bad files, unknown ids, violated
// taxonomy constraints). The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments to an operation (k < 1, width mismatch, too few folds).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace typerank
