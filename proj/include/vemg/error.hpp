#pragma once

#include <stdexcept>
#include <string>

namespace vemg {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vemg
