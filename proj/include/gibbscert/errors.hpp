#pragma once

#include <stdexcept>
#include <string>

namespace gibbscert {

// A point outside the represented space, or a parameter outside its stated interval.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numeric failure (quadrature residual, non-normalizable row). Carries the residual.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Certified truncation tail exceeds the requested tolerance.
class truncation_error : public std::runtime_error {
 public:
  truncation_error(const std::string& what, double tail, int suggested_n_max)
      : std::runtime_error(what), tail_(tail), suggested_n_max_(suggested_n_max) {}
  double tail() const { return tail_; }
  int suggested_n_max() const { return suggested_n_max_; }

 private:
  double tail_;
  int suggested_n_max_;
};

// A certificate's premises fail: u > sup m, violated minorization premise, infeasible t.
class certificate_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class unsupported_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gibbscert
