#include "decx/simplex.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <string>

#include "decx/error.hpp"

namespace decx {

std::vector<double> project_to_simplex(std::span<const double> v, double total) {
  const std::size_t n = v.size();
  if (n == 0) return {};
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = -total;
  double theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    running += sorted[j];
    const double t = running / static_cast<double>(j + 1);
    if (sorted[j] - t > 0.0) theta = t;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

std::vector<double> project_to_floored_simplex(std::span<const double> v, double floor) {
  const double n = static_cast<double>(v.size());
  if (floor < 0.0 || floor * n > 1.0 + 1e-15) throw ValidationError("infeasible simplex floor");
  std::vector<double> shifted(v.begin(), v.end());
  for (double& x : shifted) x -= floor;
  auto out = project_to_simplex(shifted, std::max(0.0, 1.0 - floor * n));
  for (double& x : out) x += floor;
  return out;
}

std::uint64_t simplex_grid_size(std::size_t k, std::size_t r) {
  if (k == 0) return 0;
  // C(r + k - 1, k - 1) built incrementally; each partial product is an
  // exact binomial coefficient.
  unsigned __int128 c = 1;
  const std::size_t m = k - 1;
  for (std::size_t i = 1; i <= m; ++i) {
    c = c * (r + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

std::vector<std::vector<int>> simplex_grid(std::size_t k, std::size_t r, std::uint64_t guard) {
  if (k == 0) throw ValidationError("simplex grid needs at least one coordinate");
  const auto count = simplex_grid_size(k, r);
  if (count > guard)
    throw ValidationError("simplex grid of size " + std::to_string(count) + " exceeds guard " +
                          std::to_string(guard));
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> cur(k, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == k) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int a = left; a >= 0; --a) {
      cur[i] = a;
      rec(i + 1, left - a);
    }
  };
  rec(0, static_cast<int>(r));
  return out;
}

}  // namespace decx
