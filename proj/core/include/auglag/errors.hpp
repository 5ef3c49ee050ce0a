#pragma once

#include <stdexcept>
#include <string>

namespace auglag {

// Block structure of an argument does not match its cone.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Multiplier outside the admissible set of a family.
class AdmissibilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter outside the mathematical domain (c <= 0, bad generator).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Gradient requested at a point where the family is not differentiable.
class KinkError : public std::runtime_error {
 public:
  KinkError(const std::string& what, double left, double right)
      : std::runtime_error(what), left_(left), right_(right) {}
  double left() const { return left_; }
  double right() const { return right_; }

 private:
  double left_;
  double right_;
};

}  // namespace auglag
