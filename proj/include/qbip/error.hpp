#pragma once

#include <stdexcept>
#include <string>

namespace qbip {

/// Error categories shared by the C++ core and the C API status codes.
enum class Errc {
  invalid_argument = 1,
  ring_mismatch = 2,
  not_unit = 3,
  parse = 4,
  precision = 5,
  not_found = 6,
  io = 7,
  range = 8,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qbip
