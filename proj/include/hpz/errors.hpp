#pragma once

#include <stdexcept>
#include <string>

namespace hpz {

// Base for every failure the library reports. Subclasses distinguish
// recoverable input problems from genuine numeric breakdowns so the CLI
// can map them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside an operation's domain (bad parameter, wrong frame, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Digamma evaluated at a non-positive integer.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Iterative refinement failed to reach the required residual.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

// An operation that requires stable dynamics was handed unstable inputs.
class StabilityError : public Error {
 public:
  using Error::Error;
};

// Coefficient denominators (z_i - z_j) below the degeneracy guard.
class DegenerateRootsError : public Error {
 public:
  using Error::Error;
};

// Drift spectrum has (numerically) coinciding eigenvalues; the closed-form
// projector decomposition does not exist there.
class ConfluentSpectrumError : public Error {
 public:
  using Error::Error;
};

// A t -> infinity limit that does not exist (undamped diffusion).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Fixed-step integrator asked to run with a step above its accuracy bound.
class StepSizeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Matrix handed to the symplectic spectrum routine is not a covariance.
class NonPhysicalSpectrumError : public Error {
 public:
  using Error::Error;
};

// Covariance passed in the wrong phase-space frame.
class FrameError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A quantity that must be real (or nonnegative, ...) came out otherwise.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Scenario file / CLI input could not be parsed.
class ParseError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace hpz
