#pragma once

#include <stdexcept>

namespace pacbayes {

// Argument outside the mathematical domain of a function (eta >= 1/b, m < 2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or unusable input data (unreadable CSV, non-binary labels, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine could not produce a finite answer.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pacbayes
