#pragma once

#include <stdexcept>
#include <string>

namespace sentorder {

// Raised for every contract violation and malformed input in the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sentorder
