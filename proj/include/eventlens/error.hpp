#pragma once

#include <stdexcept>
#include <string>

namespace eventlens {

// Anything wrong with the data or its use: malformed input files, unknown
// ids, degenerate windows, single-class training sets. The CLI maps this to
// exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eventlens
