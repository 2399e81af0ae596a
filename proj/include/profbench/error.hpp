#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace profbench {

enum class ErrorKind {
  DuplicateLabel,
  InvalidTime,
  ShapeError,
  FormatError,
  EmptyActiveSet,
  InvalidRM,
  UnknownSolver,
  InvalidInterval,
  SolverNotActive,
  TooManyWaves,
  InvalidConfig,
  SpecInvariantViolated,
  EmptyCurves,
  NonPositiveTauOnLogScale,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::InvalidTime: return "InvalidTime";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::EmptyActiveSet: return "EmptyActiveSet";
    case ErrorKind::InvalidRM: return "InvalidRM";
    case ErrorKind::UnknownSolver: return "UnknownSolver";
    case ErrorKind::InvalidInterval: return "InvalidInterval";
    case ErrorKind::SolverNotActive: return "SolverNotActive";
    case ErrorKind::TooManyWaves: return "TooManyWaves";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::SpecInvariantViolated: return "SpecInvariantViolated";
    case ErrorKind::EmptyCurves: return "EmptyCurves";
    case ErrorKind::NonPositiveTauOnLogScale: return "NonPositiveTauOnLogScale";
  }
  return "Unknown";
}

// 1-based position inside an input file. Row 1 is the header for CSV input.
struct Location {
  std::size_t row = 0;
  std::size_t col = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<Location> where = std::nullopt)
      : std::runtime_error(compose(kind, message, where)),
        kind_(kind),
        where_(where) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<Location>& where() const noexcept { return where_; }

 private:
  static std::string compose(ErrorKind kind, const std::string& message,
                             const std::optional<Location>& where) {
    std::string out(to_string(kind));
    if (where) {
      out += "(" + std::to_string(where->row) + ", " + std::to_string(where->col) + ")";
    }
    out += ": ";
    out += message;
    return out;
  }

  ErrorKind kind_;
  std::optional<Location> where_;
};

}  // namespace profbench
