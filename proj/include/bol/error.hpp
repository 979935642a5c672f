#pragma once

#include <stdexcept>
#include <string>

namespace bol {

/// Classification of library failures. The CLI maps these onto exit codes.
enum class ErrorKind {
  domain,        // argument outside the mathematical domain
  parameter,     // inconsistent or inadmissible configuration
  range,         // index outside a finite window
  overflow,      // bracket search ran away
  divergence,    // integral or series known to diverge
  accuracy,      // numerical refinement did not reach the requested tolerance
  not_in_space,  // function/measure is not in the requested Orlicz class
  conditioning,  // linear system too ill-conditioned to solve as posed
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::range: return "range";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::not_in_space: return "not_in_space";
    case ErrorKind::conditioning: return "conditioning";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

/// Raised when adaptive refinement gives up; carries the best estimate so far.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& detail, double estimate, double error_bound)
      : Error(ErrorKind::accuracy, detail), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) { throw Error(kind, detail); }

inline void require(bool cond, ErrorKind kind, const std::string& detail) {
  if (!cond) fail(kind, detail);
}

}  // namespace bol
