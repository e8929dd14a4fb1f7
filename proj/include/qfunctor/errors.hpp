#pragma once

#include <stdexcept>
#include <string>

namespace qf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tables with the wrong shape or out-of-range entries.
struct StructureError : Error {
  using Error::Error;
};

/// Objects that do not live over the same algebras/groupoids.
struct TypeMismatch : Error {
  using Error::Error;
};

/// A precondition of an operation does not hold (e.g. non-principal bibundle).
struct HypothesisError : Error {
  using Error::Error;
};

/// An axiom check failed; `axiom` names it, `witness` shows where.
struct AxiomError : Error {
  AxiomError(std::string ax, std::string wit)
      : Error(ax + ": " + wit), axiom(std::move(ax)), witness(std::move(wit)) {}
  std::string axiom;
  std::string witness;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace qf
