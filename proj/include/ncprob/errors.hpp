#ifndef NCPROB_ERRORS_HPP
#define NCPROB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ncprob {

// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two objects from different algebras were combined.
struct StructuralError : Error {
  using Error::Error;
};

// User-supplied parameters fail validation (bad measure, non-unimodular
// omega, non-state-preserving automorphism, ...).
struct ValidationError : Error {
  using Error::Error;
};

// A configurable cap was exceeded (tensor-chain size, enumeration size).
struct ResourceError : Error {
  using Error::Error;
};

// An index tuple reaches beyond the model window; the caller must rebuild
// the model with a larger window, results are never silently truncated.
struct WindowError : Error {
  using Error::Error;
};

// An operation's mathematical precondition is not met (braid relation
// violated, model not spreadable, conditioning not valid, ...).
struct PreconditionError : Error {
  using Error::Error;
};

struct InternalError : Error {
  using Error::Error;
};

}  // namespace ncprob

#endif
