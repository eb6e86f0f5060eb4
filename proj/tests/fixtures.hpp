#pragma once

#include <string>
#include <vector>

#include "decx/core.hpp"
#include "decx/rng.hpp"

namespace fixtures {

inline const decx::OutcomeSpace& coin() {
  static const decx::OutcomeSpace s({0.0, 1.0}, {"-"});
  return s;
}

inline decx::Model bernoulli(const std::vector<double>& means, std::string label = "m") {
  std::vector<std::vector<double>> rows;
  for (double m : means) rows.push_back({1.0 - m, m});
  return decx::make_model(coin(), rows, std::move(label));
}

inline decx::ModelClass bernoulli_class(const std::vector<std::vector<double>>& means) {
  std::vector<decx::Model> ms;
  for (std::size_t i = 0; i < means.size(); ++i) ms.push_back(bernoulli(means[i], "M" + std::to_string(i)));
  return decx::ModelClass(std::move(ms));
}

inline std::vector<double> random_simplex(decx::CounterRng& rng, std::size_t n, double zero_prob = 0.0) {
  std::vector<double> v(n);
  double s = 0.0;
  for (auto& x : v) {
    x = rng.uniform() < zero_prob ? 0.0 : rng.exponential();
    s += x;
  }
  if (s == 0.0) {
    v[0] = 1.0;
    s = 1.0;
  }
  for (auto& x : v) x /= s;
  return v;
}

// Tiny random class: |Pi| decisions, |class| models, outcomes over a reward
// grid times observation labels.
inline decx::ModelClass random_class(decx::CounterRng& rng, std::size_t nd, std::size_t nm,
                                     std::size_t nr, std::size_t no) {
  std::vector<double> rewards;
  for (std::size_t i = 0; i < nr; ++i) rewards.push_back(nr == 1 ? 0.5 : static_cast<double>(i) / (nr - 1));
  std::vector<std::string> obs;
  for (std::size_t i = 0; i < no; ++i) obs.push_back("o" + std::to_string(i));
  const decx::OutcomeSpace space(rewards, obs);
  std::vector<decx::Model> ms;
  for (std::size_t m = 0; m < nm; ++m) {
    std::vector<std::vector<double>> rows;
    for (std::size_t d = 0; d < nd; ++d) rows.push_back(random_simplex(rng, space.size(), 0.15));
    ms.push_back(decx::make_model(space, rows, "R" + std::to_string(m)));
  }
  return decx::ModelClass(std::move(ms));
}

}  // namespace fixtures
