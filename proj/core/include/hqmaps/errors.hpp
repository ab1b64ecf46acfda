#pragma once

#include <stdexcept>
#include <string>

namespace hq {

// Base class for all domain errors thrown by this library. Callers that only
// need to distinguish "domain failure" from "programming error" can catch
// this type; CLI maps it to exit code 1.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A denominator vanishes at a point where the value (or the germ at the
// origin) is required.
struct DenominatorVanishes : Error {
  using Error::Error;
};

// A jet coefficient beyond the stored truncation order was requested.
struct OrderExceeded : Error {
  using Error::Error;
};

// Two jets of different truncation orders were compared.
struct OrderMismatch : Error {
  using Error::Error;
};

// A user-supplied function failed while being differentiated numerically.
struct EvaluationFailed : Error {
  using Error::Error;
};

// A constructed map failed its built-in numerical self-check.
struct SelfCheckFailed : Error {
  using Error::Error;
};

// A point claimed to lie on a model hypersurface does not.
struct NotOnHypersurface : Error {
  using Error::Error;
};

// Group parameters violate their defining constraints.
struct ConstraintViolated : Error {
  using Error::Error;
};

// A closed-form or iterative solve failed verification.
struct SolveFailed : Error {
  using Error::Error;
};

// The signature/index combination requested does not exist.
struct InvalidSignature : Error {
  using Error::Error;
};

// The map does not belong to the class of 2-nondegenerate transversal
// hypersurface maps that the normalization handles.
struct NotInF2 : Error {
  using Error::Error;
};

// The normalization solver did not reach the acceptance residual.
struct NoConvergence : Error {
  double best_residual = 0.0;
  NoConvergence(const std::string& what, double best)
      : Error(what), best_residual(best) {}
};

// Classification certificate exceeded its threshold.
struct Unclassifiable : Error {
  double certificate = 0.0;
  Unclassifiable(const std::string& what, double cert)
      : Error(what), certificate(cert) {}
};

// Stabilizer witnesses contradict the parameter-based prediction.
struct Inconsistent : Error {
  using Error::Error;
};

// A numerical search ended above its acceptance threshold.
struct SearchStalled : Error {
  double best_distance = 0.0;
  SearchStalled(const std::string& what, double best)
      : Error(what), best_distance(best) {}
};

}  // namespace hq
