#pragma once

// Online learners: exponential weights, ExO+ and the EXP3 baseline.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "decx/core.hpp"
#include "decx/environments.hpp"
#include "decx/exo.hpp"

namespace decx {

struct LearnerState {
  /// eta * cumulative estimated reward per decision.
  std::vector<double> log_weights;
  std::size_t round = 0;
  double eta = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> last_p;
  std::vector<double> last_q;

  static LearnerState fresh(std::size_t num_decisions, double eta, std::uint64_t seed);
  /// exp(log_weights) normalized after subtracting the max.
  std::vector<double> q() const;
};

/// log_weights += eta * fhat; throws ValidationError on non-finite input.
LearnerState exp_weights_update(LearnerState state, std::span<const double> fhat);

struct StepRecord {
  std::size_t t = 0;
  std::vector<double> q;
  std::vector<double> p;
  std::size_t pi = 0;
  std::size_t z = 0;
  double reward = 0.0;
  /// fhat(pi') = g[pi'][pi][z] / p(pi) for ExO+, importance-weighted reward for EXP3.
  std::vector<double> fhat;
  std::size_t model = 0;
  /// Certificates from exo_solve (NaN for EXP3).
  double solver_upper = 0.0;
  double solver_lower = 0.0;
  bool solver_converged = true;
  bool solver_saturated = false;
  /// max over pi* of Gamma at (p, g) under the revealed model (NaN for EXP3).
  double revealed_gamma = 0.0;
  /// f^{M_t}(pi*) - E_{pi~p} f^{M_t}(pi) for every pi*.
  std::vector<double> regret_increments;
  /// A reward drawn from M_t(pi') for every pi' (the played one is `reward`).
  std::vector<double> realized_rewards;
};

struct RunOptions {
  ExoOptions exo;
  /// EXP3 uniform mixing; <= 0 selects min(1/2, eta |Pi|).
  double exploration = 0.0;
  std::uint64_t seed = 0;
};

std::vector<StepRecord> exo_plus_run(const ModelClass& cls, const Adversary& adversary, std::size_t horizon,
                                     double eta, const RunOptions& opts = {});

std::vector<StepRecord> exp3_run(const ModelClass& cls, const Adversary& adversary, std::size_t horizon,
                                 double eta, const RunOptions& opts = {});

/// sqrt(log(|Pi| / delta) / (4 A T)).
double default_eta(std::size_t num_decisions, std::size_t horizon, double delta = 0.1);

}  // namespace decx
