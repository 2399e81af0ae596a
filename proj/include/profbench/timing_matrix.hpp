#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "profbench/error.hpp"

namespace profbench {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using SolverMask = Eigen::Array<bool, Eigen::Dynamic, 1>;

namespace detail {

inline void require_unique(const std::vector<std::string>& labels, std::string_view what) {
  std::unordered_set<std::string_view> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw Error(ErrorKind::DuplicateLabel, std::string(what) + " label '" + label + "' repeated");
    }
  }
}

inline Index find_label(const std::vector<std::string>& labels, std::string_view name) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == name) return static_cast<Index>(i);
  }
  throw Error(ErrorKind::UnknownSolver, "no solver named '" + std::string(name) + "'");
}

}  // namespace detail

// Problems x solvers table of measured times. A cell is either a strictly
// positive finite time or an explicit failure; failed cells hold NaN in the
// dense time storage and are flagged in the failure mask.
template <typename Scalar>
class TimingMatrix {
 public:
  using Cell = std::optional<Scalar>;

  TimingMatrix(std::vector<std::string> problems, std::vector<std::string> solvers,
               Matrix<Scalar> times, Mask failed)
      : problems_(std::move(problems)),
        solvers_(std::move(solvers)),
        times_(std::move(times)),
        failed_(std::move(failed)) {
    validate();
    times_ = failed_.select(std::numeric_limits<Scalar>::quiet_NaN(), times_.array()).matrix();
  }

  // Row-major cells; std::nullopt marks a failure.
  static TimingMatrix from_rows(std::vector<std::string> problems,
                                std::vector<std::string> solvers,
                                const std::vector<std::vector<Cell>>& rows) {
    const auto n_p = static_cast<Index>(problems.size());
    const auto n_s = static_cast<Index>(solvers.size());
    if (static_cast<Index>(rows.size()) != n_p) {
      throw Error(ErrorKind::ShapeError, "row count does not match problem count");
    }
    Matrix<Scalar> times = Matrix<Scalar>::Zero(n_p, n_s);
    Mask failed = Mask::Constant(n_p, n_s, false);
    for (Index p = 0; p < n_p; ++p) {
      if (static_cast<Index>(rows[p].size()) != n_s) {
        throw Error(ErrorKind::ShapeError, "ragged row", Location{std::size_t(p) + 1, 0});
      }
      for (Index s = 0; s < n_s; ++s) {
        if (rows[p][s]) {
          times(p, s) = *rows[p][s];
        } else {
          failed(p, s) = true;
        }
      }
    }
    return TimingMatrix(std::move(problems), std::move(solvers), std::move(times), std::move(failed));
  }

  Index num_problems() const { return times_.rows(); }
  Index num_solvers() const { return times_.cols(); }

  const std::vector<std::string>& problems() const { return problems_; }
  const std::vector<std::string>& solvers() const { return solvers_; }

  // Dense times; failed cells are NaN.
  const Matrix<Scalar>& times() const { return times_; }
  const Mask& failures() const { return failed_; }

  bool failed(Index p, Index s) const { return failed_(p, s); }
  Scalar time(Index p, Index s) const { return times_(p, s); }
  Cell cell(Index p, Index s) const { return failed_(p, s) ? Cell{} : Cell{times_(p, s)}; }

  Index solver_index(std::string_view name) const { return detail::find_label(solvers_, name); }

  // Column subset in the given order.
  TimingMatrix select_solvers(std::span<const Index> columns) const {
    std::vector<std::string> labels;
    Matrix<Scalar> times(num_problems(), static_cast<Index>(columns.size()));
    Mask failed(num_problems(), static_cast<Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const Index c = columns[j];
      if (c < 0 || c >= num_solvers()) {
        throw Error(ErrorKind::UnknownSolver, "solver index " + std::to_string(c) + " out of range");
      }
      labels.push_back(solvers_[c]);
      times.col(static_cast<Index>(j)) = times_.col(c);
      failed.col(static_cast<Index>(j)) = failed_.col(c);
    }
    return TimingMatrix(problems_, std::move(labels), std::move(times), std::move(failed));
  }

  TimingMatrix without_solver(Index s) const {
    std::vector<Index> keep;
    for (Index c = 0; c < num_solvers(); ++c) {
      if (c != s) keep.push_back(c);
    }
    return select_solvers(keep);
  }

  friend bool operator==(const TimingMatrix& a, const TimingMatrix& b) {
    if (a.problems_ != b.problems_ || a.solvers_ != b.solvers_) return false;
    if ((a.failed_ != b.failed_).any()) return false;
    for (Index p = 0; p < a.num_problems(); ++p) {
      for (Index s = 0; s < a.num_solvers(); ++s) {
        if (!a.failed_(p, s) && a.times_(p, s) != b.times_(p, s)) return false;
      }
    }
    return true;
  }

 private:
  void validate() const {
    if (problems_.empty()) throw Error(ErrorKind::ShapeError, "at least one problem is required");
    if (solvers_.empty()) throw Error(ErrorKind::ShapeError, "at least one solver is required");
    if (times_.rows() != static_cast<Index>(problems_.size()) ||
        times_.cols() != static_cast<Index>(solvers_.size()) ||
        failed_.rows() != times_.rows() || failed_.cols() != times_.cols()) {
      throw Error(ErrorKind::ShapeError, "time table shape does not match labels");
    }
    detail::require_unique(problems_, "problem");
    detail::require_unique(solvers_, "solver");
    for (Index p = 0; p < times_.rows(); ++p) {
      for (Index s = 0; s < times_.cols(); ++s) {
        if (failed_(p, s)) continue;
        const Scalar t = times_(p, s);
        if (!std::isfinite(t) || !(t > Scalar(0))) {
          throw Error(ErrorKind::InvalidTime, "time must be finite and > 0",
                      Location{std::size_t(p) + 1, std::size_t(s) + 1});
        }
      }
    }
  }

  std::vector<std::string> problems_;
  std::vector<std::string> solvers_;
  Matrix<Scalar> times_;
  Mask failed_;
};

using TimingMatrixd = TimingMatrix<double>;

}  // namespace profbench
