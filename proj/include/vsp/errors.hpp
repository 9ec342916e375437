#pragma once

#include <stdexcept>
#include <string>

namespace vsp {

// Base of every error thrown by the library. Infeasibility is never an
// error: solvers report it through SolveResult and the feasibility checker
// through FeasibilityReport.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A problem violates its construction invariants.
class InvalidProblem : public Error {
 public:
  using Error::Error;
};

class AssignmentIncomplete : public Error {
 public:
  using Error::Error;
};

// Objective requested on a problem with no vehicles.
class DegenerateProblem : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

// The scenario's redundancy rule asks for more instances of a type than
// there are nodes, which makes anti-affinity unsatisfiable.
class InfeasibleSpec : public Error {
 public:
  using Error::Error;
};

class SearchSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

class EmptyHistogram : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vsp
