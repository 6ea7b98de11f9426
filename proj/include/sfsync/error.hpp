#pragma once

#include <stdexcept>
#include <string>

namespace sfsync {

enum class ErrorCode {
  InvalidParameter,
  Capacity,
  Disconnected,
  InvalidEdge,
  InvalidSwap,
  RejectedSwap,
  Parse,
  DegenerateTerm,
  Precondition,
  UndefinedTheta,
  Mismatch,
  Divergence,
  EmptyRegion,
  Io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::Capacity: return "capacity";
    case ErrorCode::Disconnected: return "disconnected-graph";
    case ErrorCode::InvalidEdge: return "invalid-edge";
    case ErrorCode::InvalidSwap: return "invalid-swap";
    case ErrorCode::RejectedSwap: return "rejected-swap";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::DegenerateTerm: return "degenerate-term";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::UndefinedTheta: return "undefined-theta";
    case ErrorCode::Mismatch: return "mismatch";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::EmptyRegion: return "empty-region";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the toolkit carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the edge-list reader; `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A perturbation denominator k_eff - k_j vanished at `neighbour`.
class DegenerateTermError : public Error {
 public:
  DegenerateTermError(int node, int neighbour)
      : Error(ErrorCode::DegenerateTerm,
              "node " + std::to_string(node) + " has neighbour " + std::to_string(neighbour) +
                  " with equal degree"),
        neighbour_(neighbour) {}

  int neighbour() const noexcept { return neighbour_; }

 private:
  int neighbour_;
};

/// Non-finite state encountered while integrating; `time()` is the first bad instant.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(double t)
      : Error(ErrorCode::Divergence, "non-finite state at t=" + std::to_string(t)), time_(t) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace sfsync
