#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace distlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParam : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class InvalidOrder : public Error {
 public:
  using Error::Error;
};

class EmptyFamily : public Error {
 public:
  using Error::Error;
};

class PolicyError : public Error {
 public:
  using Error::Error;
};

class PropertyViolation : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class BracketTooCoarse : public Error {
 public:
  using Error::Error;
};

enum class Axiom { Identity, Nonnegativity, Symmetry, Triangle };

const char* axiom_name(Axiom a);

// Points are metric indices: agents 0..n-1, items n..2n-1.
class AxiomViolation : public Error {
 public:
  AxiomViolation(Axiom axiom, std::size_t x, std::size_t y, std::size_t z);
  Axiom axiom;
  std::size_t x, y, z;
};

class IneligibleStep : public Error {
 public:
  IneligibleStep(std::size_t step, std::string reason);
  std::size_t step;
  std::string reason;
};

}  // namespace distlab
