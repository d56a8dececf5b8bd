#pragma once

#include <stdexcept>
#include <string_view>

namespace annular {

// Validation problems are reported as std::invalid_argument (or std::domain_error
// for out-of-domain special-function arguments). NumericalError is reserved for
// solvers that fail to converge or cannot certify a result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string_view version();

}  // namespace annular
