#pragma once

#include <stdexcept>
#include <string>

namespace gwb {

// Error categories. The numeric values of the first three double as the
// CLI exit codes.
enum class Errc {
  invalid_argument = 2,
  mismatch = 3,
  insufficient = 4,
  not_in_kstar = 5,
  domain = 6,
  internal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gwb
