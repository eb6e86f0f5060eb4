#pragma once

// Exact solver for finite zero-sum matrix games
//     value = min_{p in Delta(cols)} max_{i in rows} (C p)_i
// via the classic shifted-payoff linear program
//     maximize sum y  s.t.  (C + s) y <= 1,  y >= 0,
// solved with a dense tableau simplex under Bland's rule.

#include <cstddef>
#include <span>
#include <vector>

namespace decx {

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

struct GameSolution {
  /// max_i (C p)_i at the returned column strategy.
  double value = 0.0;
  /// Column (minimizing) strategy.
  std::vector<double> col_strategy;
  /// Row (maximizing) strategy from the LP dual.
  std::vector<double> row_strategy;
  /// Row attaining the max against col_strategy (lowest index on ties).
  std::size_t best_response_row = 0;
  /// value - min_j (x^T C)_j; nonnegative by weak duality.
  double duality_gap = 0.0;
  std::size_t pivots = 0;
};

/// Solves the game; with col_floor > 0 the column strategy is restricted to
/// {p >= col_floor}. Throws SolverError if the certified gap exceeds
/// gap_tolerance.
GameSolution solve_matrix_game(const Matrix& payoff, double col_floor = 0.0,
                               double gap_tolerance = 1e-6);

/// max_i (C p)_i and its argmax row.
std::pair<double, std::size_t> max_row_payoff(const Matrix& payoff, std::span<const double> p);

}  // namespace decx
