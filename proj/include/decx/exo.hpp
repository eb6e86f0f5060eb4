#pragma once

// High-probability Exploration-by-Optimization objective
//
//   Gamma_{q,eta}(p, g; pi*, M) = E_{pi~p}[f^M(pi*) - f^M(pi)]
//     + (1/eta) E_{pi~p, z~M(pi)} E_{pi'~q}[exp(eta/p(pi) (g(pi';pi,z) - g(pi*;pi,z))) - 1]
//
// and a certified solver for min_{p,g} max_{M,pi*} Gamma. The solver works
// on h = (eta / p(pi)) g, in which Gamma = sum_pi p(pi) Phi_pi(h_pi; M, pi*)
// is linear in p for fixed h. The Lagrange dual over priors mu on
// (M, pi*) has the closed form used by exo_bayes_lower; every dual point is
// a lower certificate and every primal point an upper certificate.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "decx/core.hpp"

namespace decx {

/// Table g[target pi'][played pi][outcome z].
class EstimationFunction {
 public:
  EstimationFunction() = default;
  EstimationFunction(std::size_t num_decisions, std::size_t num_outcomes, double clip_alpha);

  std::size_t num_decisions() const { return num_decisions_; }
  std::size_t num_outcomes() const { return num_outcomes_; }
  double clip_alpha() const { return clip_alpha_; }

  double operator()(std::size_t target, std::size_t played, std::size_t z) const {
    return table_[(target * num_decisions_ + played) * num_outcomes_ + z];
  }
  double& at(std::size_t target, std::size_t played, std::size_t z) {
    return table_[(target * num_decisions_ + played) * num_outcomes_ + z];
  }
  std::span<const double> values() const { return table_; }
  double max_abs() const;

 private:
  std::size_t num_decisions_ = 0;
  std::size_t num_outcomes_ = 0;
  double clip_alpha_ = 0.0;
  std::vector<double> table_;
};

struct GammaValue {
  double value = 0.0;
  /// Set when some exponent hit the +-700 clamp.
  bool saturated = false;
};

GammaValue gamma_objective(std::span<const double> q, double eta, std::span<const double> p,
                           const EstimationFunction& g, std::size_t pi_star, const Model& model);

struct ExoOptions {
  /// Entry floor for p; <= 0 selects 1e-6 / |Pi|.
  double floor = 0.0;
  /// Bound alpha with |g| <= alpha * p(pi); <= 0 selects 10 / eta.
  double clip = 0.0;
  std::size_t iterations = 4000;
  /// Stop once upper - lower <= tolerance.
  double tolerance = 1e-4;
  /// Primal candidates are certified every this many dual iterations.
  std::size_t certify_every = 25;
  /// Smoothed-max projected-gradient polish steps on (p, h).
  std::size_t polish_iterations = 400;
  /// Optional warm start for the dual prior (length |M| * |Pi|).
  std::vector<double> warm_dual;
};

struct ExoSolution {
  FiniteDistribution p = FiniteDistribution::uniform(1);
  EstimationFunction g;
  /// Exact max over (M, pi*) of Gamma at (p, g).
  double upper = 0.0;
  /// Best closed-form dual bound found.
  double lower = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool saturated = false;
  /// Dual prior attaining `lower`, row-major over (model, decision).
  std::vector<double> dual;
  double floor = 0.0;
  double clip = 0.0;
};

ExoSolution exo_solve(const ModelClass& cls, std::span<const double> q, double eta,
                      const ExoOptions& opts = {});

/// min_pi { E_mu[f^M(pi*) - f^M(pi)]
///          - (1/eta) sum_z zbar_mu(z|pi) (1 - (sum_pi' sqrt(q(pi') mu_po(pi';pi,z)))^2) },
/// a lower bound on exo_eta(cls, q) for every prior mu.
double exo_bayes_lower(const ModelClass& cls, std::span<const double> q, double eta,
                       const Prior& prior);

struct SupQBudget {
  std::size_t resolution = 4;
  std::size_t refine_rounds = 3;
  ExoOptions options;
  /// Extra reference distributions evaluated alongside the grid.
  std::vector<std::vector<double>> extra_q;
};

struct SupQReport {
  /// max over evaluated q of the certified lower bound: a certified lower
  /// bound on exo_eta(M) = sup_q exo_eta(M, q).
  double lower = 0.0;
  std::size_t best_q = 0;
  std::vector<std::vector<double>> q_points;
  /// Upper certificate for exo_eta(M, q) at each evaluated q. Their max is
  /// not a certified upper bound on the sup over all q.
  std::vector<double> per_q_uppers;
  std::vector<double> per_q_lowers;
  std::size_t resolution = 0;
  std::size_t grid_points = 0;
};

SupQReport exo_sup_q(const ModelClass& cls, double eta, const SupQBudget& budget);
/// Serial reference implementation of exo_sup_q.
SupQReport exo_sup_q_serial(const ModelClass& cls, double eta, const SupQBudget& budget);

}  // namespace decx
