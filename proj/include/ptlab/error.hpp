#pragma once

#include <stdexcept>
#include <string>

namespace ptlab {

/// Base of every engine error. `kind()` is the stable name the CLI reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what);
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Invalid parameters, malformed input files, unknown keys.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

/// The requested operation is not implemented for this input (e.g. no G2 matrices).
class CapabilityError : public Error {
 public:
  explicit CapabilityError(const std::string& what) : Error("CapabilityError", what) {}
};

/// A configuration sits on (or too close to) a pole of the potential.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what) : Error("SingularityError", what) {}
};

/// A wavefunction vanishes inside its working window.
class NodeError : public Error {
 public:
  NodeError(const std::string& what, double x) : Error("NodeError", what), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

/// A non-integer power was requested on the branch cut.
class BranchError : public Error {
 public:
  BranchError(const std::string& what, double x) : Error("BranchError", what), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

/// Negative power of zero, e.g. (iu_x)^(e-2) at u_x = 0 with e < 2.
class SingularExponentError : public Error {
 public:
  SingularExponentError(const std::string& what, double x)
      : Error("SingularExponentError", what), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

/// Time integration produced non-finite or runaway values.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double last_valid_time)
      : Error("BlowUpError", what), t_(last_valid_time) {}
  double last_valid_time() const noexcept { return t_; }

 private:
  double t_;
};

/// Iterative numerics failed (eigenvalue QL breakdown, LU singularity, ...).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error("NumericalError", what) {}
};

}  // namespace ptlab
