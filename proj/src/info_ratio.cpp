#include "decx/info_ratio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decx/divergences.hpp"
#include "decx/error.hpp"
#include "decx/rng.hpp"
#include "decx/simplex.hpp"

namespace decx {

namespace {

void check_prior(const ModelClass& cls, const Prior& prior) {
  if (prior.num_models() != cls.size() || prior.num_decisions() != cls.num_decisions())
    throw ValidationError("prior is not indexed by (class member, decision)");
}

// Objective for the outer search on raw nonnegative weights.
double objective_at(const ModelClass& cls, std::span<const double> weights, double gamma) {
  std::vector<double> w(weights.begin(), weights.end());
  double s = 0.0;
  for (double& x : w) {
    x = std::max(x, 0.0);
    s += x;
  }
  for (double& x : w) x /= s;
  return ir_inner(cls, Prior(cls.size(), cls.num_decisions(), std::move(w)), gamma).value;
}

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> weights;
  std::size_t evaluations = 0;
};

Candidate ascend(const ModelClass& cls, double gamma, std::vector<double> x, std::size_t iterations) {
  const std::size_t k = x.size();
  constexpr double kFdStep = 1e-4;
  Candidate c;
  c.value = objective_at(cls, x, gamma);
  ++c.evaluations;
  double step = 0.1;
  std::vector<double> grad(k);
  for (std::size_t it = 0; it < iterations && step > 1e-7; ++it) {
    double norm = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<double> up = x, down = x;
      up[i] += kFdStep;
      const double fu = objective_at(cls, up, gamma);
      if (x[i] >= kFdStep) {
        down[i] -= kFdStep;
        grad[i] = (fu - objective_at(cls, down, gamma)) / (2.0 * kFdStep);
        c.evaluations += 2;
      } else {
        grad[i] = (fu - c.value) / kFdStep;
        c.evaluations += 1;
      }
      norm += grad[i] * grad[i];
    }
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) break;
    bool improved = false;
    while (step > 1e-7) {
      std::vector<double> trial(k);
      for (std::size_t i = 0; i < k; ++i) trial[i] = x[i] + step * grad[i] / norm;
      trial = project_to_simplex(trial);
      const double v = objective_at(cls, trial, gamma);
      ++c.evaluations;
      if (v > c.value) {
        x = std::move(trial);
        c.value = v;
        step *= 1.5;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  c.weights = std::move(x);
  return c;
}

std::vector<double> restart_point(std::size_t k, std::size_t restart, std::uint64_t seed) {
  if (restart == 0) return std::vector<double>(k, 1.0 / static_cast<double>(k));
  CounterRng rng(seed, 0x1A0000 + restart);
  std::vector<double> x(k);
  double s = 0.0;
  for (double& v : x) {
    v = rng.exponential();
    s += v;
  }
  for (double& v : x) v /= s;
  return x;
}

IrResult finish(const ModelClass& cls, double gamma, const Candidate& best, IrSearchReport report) {
  IrResult res;
  Prior prior(cls.size(), cls.num_decisions(), best.weights);
  const IrInner inner = ir_inner(cls, prior, gamma);
  res.value = inner.value;
  res.argmin_decision = inner.decision;
  res.best_prior = std::move(prior);
  res.search_report = std::move(report);
  return res;
}

IrResult search_impl(const ModelClass& cls, double gamma, const IrBudget& budget, bool parallel) {
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
  const std::size_t k = cls.size() * cls.num_decisions();
  IrSearchReport report;
  if (k <= budget.exhaustive_cells) {
    if (budget.grid_resolution == 0) throw ValidationError("IR search budget exhausted before any evaluation");
    const auto grid = simplex_grid(k, budget.grid_resolution);
    const double r = static_cast<double>(budget.grid_resolution);
    std::vector<double> values(grid.size());
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t g = 0; g < n; ++g) {
      std::vector<double> w(k);
      for (std::size_t i = 0; i < k; ++i) w[i] = grid[g][i] / r;
      values[g] = objective_at(cls, w, gamma);
    }
    std::size_t arg = 0;
    const std::size_t chunk = std::max<std::size_t>(1, grid.size() / 16);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (values[g] > values[arg]) arg = g;
      if ((g + 1) % chunk == 0 || g + 1 == grid.size()) report.trace.push_back(values[arg]);
    }
    report.method = "grid";
    report.grid_resolution = budget.grid_resolution;
    report.evaluations = grid.size();
    Candidate best;
    best.weights.resize(k);
    for (std::size_t i = 0; i < k; ++i) best.weights[i] = grid[arg][i] / r;
    return finish(cls, gamma, best, std::move(report));
  }

  if (budget.restarts == 0) throw ValidationError("IR search budget exhausted before any evaluation");
  std::vector<Candidate> runs(budget.restarts);
  const auto n = static_cast<std::ptrdiff_t>(budget.restarts);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    runs[r] = ascend(cls, gamma, restart_point(k, static_cast<std::size_t>(r), budget.seed),
                     budget.iterations);
  }
  std::size_t arg = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].value > runs[arg].value) arg = r;
    report.trace.push_back(runs[arg].value);
    report.evaluations += runs[r].evaluations;
  }
  report.method = "ascent";
  report.restarts = budget.restarts;
  return finish(cls, gamma, runs[arg], std::move(report));
}

}  // namespace

bool PosteriorTable::any_zero_likelihood() const {
  return std::any_of(zero_likelihood.begin(), zero_likelihood.end(), [](bool b) { return b; });
}

PosteriorTable posterior_table(const ModelClass& cls, const Prior& prior) {
  check_prior(cls, prior);
  const std::size_t na = cls.num_decisions();
  const std::size_t nz = cls.num_outcomes();
  PosteriorTable t;
  t.num_decisions = na;
  t.num_outcomes = nz;
  t.prior_marginal.assign(na, 0.0);
  for (std::size_t m = 0; m < cls.size(); ++m)
    for (std::size_t ps = 0; ps < na; ++ps) t.prior_marginal[ps] += prior(m, ps);
  t.z_marginals.assign(na * nz, 0.0);
  t.posteriors.assign(na * nz * na, 0.0);
  t.zero_likelihood.assign(na * nz, false);
  for (std::size_t pi = 0; pi < na; ++pi) {
    for (std::size_t z = 0; z < nz; ++z) {
      double* post = t.posteriors.data() + (pi * nz + z) * na;
      double total = 0.0;
      for (std::size_t m = 0; m < cls.size(); ++m) {
        const double lik = cls[m].prob(pi, z);
        if (lik == 0.0) continue;
        for (std::size_t ps = 0; ps < na; ++ps) post[ps] += prior(m, ps) * lik;
      }
      for (std::size_t ps = 0; ps < na; ++ps) total += post[ps];
      t.z_marginals[pi * nz + z] = total;
      if (total > 0.0) {
        for (std::size_t ps = 0; ps < na; ++ps) post[ps] /= total;
      } else {
        t.zero_likelihood[pi * nz + z] = true;
        for (std::size_t ps = 0; ps < na; ++ps) post[ps] = t.prior_marginal[ps];
      }
    }
  }
  return t;
}

IrTerms ir_terms(const ModelClass& cls, const Prior& prior) {
  const PosteriorTable t = posterior_table(cls, prior);
  const std::size_t na = cls.num_decisions();
  const std::size_t nz = cls.num_outcomes();
  IrTerms terms;
  terms.regret.assign(na, 0.0);
  terms.information.assign(na, 0.0);
  double expected_opt = 0.0;
  std::vector<double> expected_mean(na, 0.0);
  for (std::size_t m = 0; m < cls.size(); ++m) {
    double model_mass = 0.0;
    for (std::size_t ps = 0; ps < na; ++ps) {
      const double w = prior(m, ps);
      model_mass += w;
      expected_opt += w * cls[m].mean_reward(ps);
    }
    for (std::size_t pi = 0; pi < na; ++pi) expected_mean[pi] += model_mass * cls[m].mean_reward(pi);
  }
  const std::span<const double> pr(t.prior_marginal);
  for (std::size_t pi = 0; pi < na; ++pi) {
    terms.regret[pi] = expected_opt - expected_mean[pi];
    double info = 0.0;
    for (std::size_t z = 0; z < nz; ++z) {
      const double w = t.z_marginal(pi, z);
      if (w == 0.0) continue;
      info += w * hellinger_sq(std::span<const double>(t.posterior(pi, z), na), pr);
    }
    terms.information[pi] = info;
  }
  return terms;
}

IrInner ir_inner(const ModelClass& cls, const Prior& prior, double gamma) {
  if (!(gamma >= 0.0)) throw ValidationError("gamma must be nonnegative");
  const IrTerms terms = ir_terms(cls, prior);
  IrInner best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t pi = 0; pi < cls.num_decisions(); ++pi) {
    const double v = terms.regret[pi] - gamma * terms.information[pi];
    if (v < best.value) best = {v, pi};
  }
  return best;
}

IrResult ir_search(const ModelClass& cls, double gamma, const IrBudget& budget) {
  return search_impl(cls, gamma, budget, true);
}

IrResult ir_search_serial(const ModelClass& cls, double gamma, const IrBudget& budget) {
  return search_impl(cls, gamma, budget, false);
}

PsiCheck psi_check(const ModelClass& cls, const Prior& prior, double lambda, double gamma,
                   std::size_t grid_resolution, double tol) {
  if (!(lambda > 1.0)) throw ValidationError("lambda must exceed 1");
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
  const std::size_t na = cls.num_decisions();
  if (na > 3) throw ValidationError("psi_check grid search supports at most 3 decisions");
  const IrTerms terms = ir_terms(cls, prior);
  PsiCheck out;
  out.ratio = std::numeric_limits<double>::infinity();
  const auto grid = simplex_grid(na, grid_resolution);
  for (const auto& pt : grid) {
    double reg = 0.0, info = 0.0;
    std::vector<double> p(na);
    for (std::size_t i = 0; i < na; ++i) {
      p[i] = pt[i] / static_cast<double>(grid_resolution);
      reg += p[i] * terms.regret[i];
      info += p[i] * terms.information[i];
    }
    double ratio;
    if (reg <= 0.0) {
      ratio = 0.0;
    } else if (info <= 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    } else {
      ratio = std::pow(reg, lambda) / info;
    }
    if (ratio < out.ratio || out.best_p.empty()) {
      out.ratio = ratio;
      out.best_p = std::move(p);
    }
  }
  out.ir_value = ir_inner(cls, prior, gamma).value;
  if (std::isinf(out.ratio)) {
    out.bound = std::numeric_limits<double>::infinity();
    out.bound_ok = true;
  } else {
    out.bound = std::pow(out.ratio / gamma, 1.0 / (lambda - 1.0));
    out.bound_ok = out.ir_value <= out.bound + tol;
  }
  return out;
}

}  // namespace decx
