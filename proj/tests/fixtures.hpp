#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "profbench/timing_matrix.hpp"

namespace profbench::testing {

// The five-problem, three-solver artificial set (solvers A, B, C).
inline TimingMatrixd sample() {
  return TimingMatrixd::from_rows({"1", "2", "3", "4", "5"}, {"A", "B", "C"},
                                  {{2.0, 1.5, 1.0}, {1.0, 1.2, 2.0}, {1.0, 4.0, 2.0}, {1.0, 5.0, 20.0},
                                   {2.0, 5.0, 20.0}});
}

inline std::vector<std::string> labels(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// One random row: times drawn from a small grid so exact ties occur, each
// cell failing with probability `fail_rate`.
inline std::vector<std::optional<double>> random_row(std::mt19937_64& rng, int n_s, double fail_rate) {
  std::uniform_int_distribution<int> grid(1, 40);
  std::bernoulli_distribution fails(fail_rate);
  std::vector<std::optional<double>> row;
  for (int s = 0; s < n_s; ++s) {
    if (fails(rng)) {
      row.emplace_back();
    } else {
      row.emplace_back(0.25 * grid(rng));
    }
  }
  return row;
}

inline TimingMatrixd random_matrix(std::mt19937_64& rng, int n_p, int n_s, double fail_rate) {
  std::vector<std::vector<std::optional<double>>> rows;
  for (int p = 0; p < n_p; ++p) rows.push_back(random_row(rng, n_s, fail_rate));
  return TimingMatrixd::from_rows(labels("p", n_p), labels("s", n_s), rows);
}

}  // namespace profbench::testing
