#pragma once

#include <stdexcept>
#include <string>

namespace tempfrac {

// Invalid arguments or parameter combinations (maps to CLI exit code 2).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Argument hits a pole of a special function.
class pole_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// Numerical failures (maps to CLI exit code 3).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class convergence_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

class quadrature_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

class factorization_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

}  // namespace tempfrac
