#pragma once

#include <stdexcept>
#include <string>

namespace specmatch {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// mesh_core
struct ParseError : Error {
  using Error::Error;
};
struct DegenerateFace : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};

// spectral
struct ConvergenceFailure : Error {
  using Error::Error;
};
struct KTooLarge : Error {
  using Error::Error;
};

// shared shape checks
struct DimensionMismatch : Error {
  using Error::Error;
};

// descriptors
struct InsufficientSpectrum : Error {
  using Error::Error;
};

// autodiff
struct NonFiniteActivation : Error {
  using Error::Error;
};
struct TapeConsumed : Error {
  using Error::Error;
};

// fmap solver
struct SingularSystem : Error {
  using Error::Error;
};

// point-wise maps
struct NonFiniteScore : Error {
  using Error::Error;
};

// pipeline
struct NonFiniteLoss : Error {
  using Error::Error;
};

// evaluation
struct EmptyErrors : Error {
  using Error::Error;
};

}  // namespace specmatch
