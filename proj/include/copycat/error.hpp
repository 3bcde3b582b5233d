#pragma once

#include <stdexcept>
#include <string>

namespace copycat {

// Domain error: bad data, invalid configuration, or a violated model contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace copycat
