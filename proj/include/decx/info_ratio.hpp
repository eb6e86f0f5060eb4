#pragma once

// Parameterized Information Ratio with squared Hellinger distance between
// the posterior and prior laws of the optimal decision.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "decx/core.hpp"

namespace decx {

/// Bayes tables for a prior mu over (model, decision) pairs.
struct PosteriorTable {
  std::size_t num_decisions = 0;
  std::size_t num_outcomes = 0;
  /// mu_pr(pi') = P(pi* = pi').
  std::vector<double> prior_marginal;
  /// z_marginal(pi, z) = E_{(M, pi*) ~ mu}[M(z | pi)], row-major [pi][z].
  std::vector<double> z_marginals;
  /// mu_po(pi'; pi, z), layout [pi][z][pi'].
  std::vector<double> posteriors;
  /// (pi, z) rows with zero likelihood; their posterior is set to mu_pr.
  std::vector<bool> zero_likelihood;

  double z_marginal(std::size_t pi, std::size_t z) const { return z_marginals[pi * num_outcomes + z]; }
  const double* posterior(std::size_t pi, std::size_t z) const {
    return posteriors.data() + (pi * num_outcomes + z) * num_decisions;
  }
  bool any_zero_likelihood() const;
};

PosteriorTable posterior_table(const ModelClass& cls, const Prior& prior);

struct IrInner {
  double value = 0.0;
  std::size_t decision = 0;
};

/// Per-decision regret and information terms under a prior.
struct IrTerms {
  std::vector<double> regret;       // E_mu[f^M(pi*)] - E_mu[f^M(pi)]
  std::vector<double> information;  // sum_z z_marginal * H^2(mu_po(.;pi,z), mu_pr)
};
IrTerms ir_terms(const ModelClass& cls, const Prior& prior);

/// min over decisions of regret - gamma * information (lowest index on ties).
IrInner ir_inner(const ModelClass& cls, const Prior& prior, double gamma);

struct IrBudget {
  std::size_t grid_resolution = 8;
  std::size_t restarts = 8;
  std::size_t iterations = 200;
  std::uint64_t seed = 0;
  /// Exhaustive grid is used when |M| * |Pi| is at most this.
  std::size_t exhaustive_cells = 8;
};

struct IrSearchReport {
  std::string method;  // "grid" or "ascent"
  std::size_t evaluations = 0;
  std::size_t restarts = 0;
  std::size_t grid_resolution = 0;
  /// Best value after each restart (ascent) or every 1/16 of the grid.
  std::vector<double> trace;
};

struct IrResult {
  /// Certified lower bound on IR_gamma: ir_inner at best_prior.
  double value = 0.0;
  Prior best_prior = Prior::uniform(1, 1);
  std::size_t argmin_decision = 0;
  IrSearchReport search_report;
};

/// Maximizes ir_inner over priors. Exhaustive simplex grid for small
/// instances, otherwise multi-start projected ascent with central finite
/// differences; restarts run under OpenMP with per-restart seeds.
IrResult ir_search(const ModelClass& cls, double gamma, const IrBudget& budget);
/// Serial reference implementation of ir_search.
IrResult ir_search_serial(const ModelClass& cls, double gamma, const IrBudget& budget);

struct PsiCheck {
  double ratio = 0.0;
  bool bound_ok = true;
  std::vector<double> best_p;
  double ir_value = 0.0;
  double bound = 0.0;
};

/// Generalized-ratio diagnostic for one prior: minimizes
/// (E regret)_+^lambda / E information over a grid on Delta(Pi) (|Pi| <= 3)
/// and checks ir_inner <= (ratio / gamma)^{1/(lambda-1)} + tol.
PsiCheck psi_check(const ModelClass& cls, const Prior& prior, double lambda, double gamma,
                   std::size_t grid_resolution = 200, double tol = 1e-9);

}  // namespace decx
