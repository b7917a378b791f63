#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ttstar {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a special function or map.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Reduced list has the wrong length for n.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Some consecutive gap of the full periodic gamma list left (-2+d, 2-d).
class GenericityError : public DomainError {
 public:
  GenericityError(const std::string& what, int index) : DomainError(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

// Bad numerical parameter (step, x0, tolerances).
class ParameterError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Configuration outside the supported model (even n without the extension, n != 3 ...).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  NumericError(const std::string& what, double achieved) : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// C(x1) sequence not suitable for extrapolation; raw values are kept for diagnosis.
class ExtrapolationError : public Error {
 public:
  ExtrapolationError(const std::string& what, std::vector<double> x1, std::vector<double> values)
      : Error(what), x1_(std::move(x1)), values_(std::move(values)) {}
  const std::vector<double>& x1() const noexcept { return x1_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> x1_;
  std::vector<double> values_;
};

}  // namespace ttstar
