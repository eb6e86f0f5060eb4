#include "decx/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "decx/error.hpp"

namespace decx {

namespace {

constexpr double kPivotEps = 1e-12;

// Solves max sum(y) s.t. B y <= 1, y >= 0 with B > 0 entrywise. Returns the
// primal y and the dual x (shadow prices of the row constraints).
struct LpResult {
  std::vector<double> y;
  std::vector<double> x;
  std::size_t pivots = 0;
};

LpResult solve_positive_lp(const Matrix& b) {
  const std::size_t m = b.rows;
  const std::size_t n = b.cols;
  const std::size_t width = n + m + 1;  // structural | slack | rhs
  std::vector<double> tab((m + 1) * width, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return tab[i * width + j]; };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) at(i, j) = b(i, j);
    at(i, n + i) = 1.0;
    at(i, width - 1) = 1.0;
  }
  for (std::size_t j = 0; j < n; ++j) at(m, j) = -1.0;
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  LpResult res;
  const std::size_t max_pivots = 50 * (m + n) + 1000;
  while (res.pivots < max_pivots) {
    // Bland: lowest-index improving column.
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (at(m, j) < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double a = at(i, enter);
      if (a <= kPivotEps) continue;
      const double ratio = at(i, width - 1) / a;
      if (ratio < best_ratio - 1e-15 ||
          (ratio <= best_ratio + 1e-15 && leave < m && basis[i] < basis[leave])) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave == m) throw SolverError("matrix game LP unbounded (payoff not shifted positive)", INFINITY);
    const double piv = at(leave, enter);
    for (std::size_t j = 0; j < width; ++j) at(leave, j) /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) at(i, j) -= f * at(leave, j);
    }
    basis[leave] = enter;
    ++res.pivots;
  }
  res.y.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.y[basis[i]] = std::max(0.0, at(i, width - 1));
  res.x.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) res.x[i] = std::max(0.0, at(m, n + i));
  return res;
}

}  // namespace

std::pair<double, std::size_t> max_row_payoff(const Matrix& payoff, std::span<const double> p) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < payoff.rows; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < payoff.cols; ++j) v += payoff(i, j) * p[j];
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  return {best, arg};
}

GameSolution solve_matrix_game(const Matrix& payoff, double col_floor, double gap_tolerance) {
  const std::size_t m = payoff.rows;
  const std::size_t n = payoff.cols;
  if (m == 0 || n == 0) throw ValidationError("matrix game needs at least one row and column");
  if (col_floor < 0.0 || col_floor * static_cast<double>(n) > 1.0)
    throw ValidationError("infeasible column floor");

  // p = floor + scale * p' turns the floored game into a plain game on
  // C'_{ij} = floor * sum_k C_ik + scale * C_ij.
  const double scale = 1.0 - col_floor * static_cast<double>(n);
  Matrix work = payoff;
  if (col_floor > 0.0) {
    for (std::size_t i = 0; i < m; ++i) {
      double row_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) row_sum += payoff(i, j);
      for (std::size_t j = 0; j < n; ++j) work(i, j) = col_floor * row_sum + scale * payoff(i, j);
    }
  }

  double lo = std::numeric_limits<double>::infinity();
  for (double v : work.data) lo = std::min(lo, v);
  const double shift = 1.0 - lo;
  Matrix b = work;
  for (double& v : b.data) v += shift;

  const LpResult lp = solve_positive_lp(b);
  double ysum = 0.0;
  for (double v : lp.y) ysum += v;
  double xsum = 0.0;
  for (double v : lp.x) xsum += v;

  GameSolution sol;
  sol.pivots = lp.pivots;
  std::vector<double> pprime(n, 1.0 / static_cast<double>(n));
  if (ysum > 0.0)
    for (std::size_t j = 0; j < n; ++j) pprime[j] = lp.y[j] / ysum;
  sol.row_strategy.assign(m, 1.0 / static_cast<double>(m));
  if (xsum > 0.0)
    for (std::size_t i = 0; i < m; ++i) sol.row_strategy[i] = lp.x[i] / xsum;

  sol.col_strategy.resize(n);
  for (std::size_t j = 0; j < n; ++j) sol.col_strategy[j] = col_floor + scale * pprime[j];

  const auto [upper, arg] = max_row_payoff(payoff, sol.col_strategy);
  sol.value = upper;
  sol.best_response_row = arg;
  // Lower certificate on the floored game: min over floored p of x^T C p.
  std::vector<double> col_payoff(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double xi = sol.row_strategy[i];
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) col_payoff[j] += xi * payoff(i, j);
  }
  double total = 0.0;
  for (double v : col_payoff) total += v;
  const double lower = col_floor * total + scale * *std::min_element(col_payoff.begin(), col_payoff.end());
  sol.duality_gap = std::max(0.0, upper - lower);
  if (sol.duality_gap > gap_tolerance) {
    std::ostringstream os;
    os << "matrix game solver gap " << sol.duality_gap << " exceeds tolerance " << gap_tolerance;
    throw SolverError(os.str(), sol.duality_gap);
  }
  return sol;
}

}  // namespace decx
