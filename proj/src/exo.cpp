#include "decx/exo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decx/error.hpp"
#include "decx/matrix_game.hpp"
#include "decx/simplex.hpp"

namespace decx {

namespace {

constexpr double kExpClamp = 700.0;
constexpr double kTiny = 1e-300;

// Flattened view of a class for the inner loops.
struct Problem {
  std::size_t na = 0, nz = 0, nm = 0, k = 0;
  std::vector<double> lik;  // [m][pi][z]
  std::vector<double> gap;  // [m * na + pi*][pi]
  std::vector<double> q;
  double eta = 1.0;
  double h_bound = 10.0;
  double floor = 0.0;

  double p_of(std::size_t m, std::size_t pi, std::size_t z) const { return lik[(m * na + pi) * nz + z]; }
};

Problem make_problem(const ModelClass& cls, std::span<const double> q, double eta, double floor,
                     double clip) {
  Problem pb;
  pb.na = cls.num_decisions();
  pb.nz = cls.num_outcomes();
  pb.nm = cls.size();
  pb.k = pb.nm * pb.na;
  pb.eta = eta;
  pb.floor = floor;
  pb.h_bound = clip * eta;
  pb.q.assign(q.begin(), q.end());
  pb.lik.resize(pb.nm * pb.na * pb.nz);
  pb.gap.resize(pb.k * pb.na);
  for (std::size_t m = 0; m < pb.nm; ++m) {
    for (std::size_t pi = 0; pi < pb.na; ++pi) {
      const auto row = cls[m].row(pi);
      std::copy(row.begin(), row.end(), pb.lik.begin() + (m * pb.na + pi) * pb.nz);
    }
    for (std::size_t ps = 0; ps < pb.na; ++ps)
      for (std::size_t pi = 0; pi < pb.na; ++pi)
        pb.gap[(m * pb.na + ps) * pb.na + pi] = cls[m].mean_reward(ps) - cls[m].mean_reward(pi);
  }
  return pb;
}

// Closed-form dual: gamma_mu(pi) for every pi, and optionally the gradient
// d gamma_mu(pi) / d mu_k laid out [pi][k].
void dual_terms(const Problem& pb, std::span<const double> mu, std::vector<double>& out,
                std::vector<double>* grad) {
  out.assign(pb.na, 0.0);
  if (grad) grad->assign(pb.na * pb.k, 0.0);
  std::vector<double> w(pb.na);
  for (std::size_t pi = 0; pi < pb.na; ++pi) {
    double regret = 0.0;
    for (std::size_t kk = 0; kk < pb.k; ++kk) regret += mu[kk] * pb.gap[kk * pb.na + pi];
    double info = 0.0;
    for (std::size_t z = 0; z < pb.nz; ++z) {
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t m = 0; m < pb.nm; ++m) {
        const double l = pb.p_of(m, pi, z);
        if (l == 0.0) continue;
        for (std::size_t ps = 0; ps < pb.na; ++ps) w[ps] += mu[m * pb.na + ps] * l;
      }
      double total = 0.0, s = 0.0;
      for (std::size_t ps = 0; ps < pb.na; ++ps) {
        total += w[ps];
        s += std::sqrt(pb.q[ps] * w[ps]);
      }
      if (total == 0.0) continue;
      info += s * s - total;
      if (grad) {
        for (std::size_t ps = 0; ps < pb.na; ++ps) {
          const double coeff =
              pb.q[ps] > 0.0 ? s * std::sqrt(pb.q[ps] / std::max(w[ps], 1e-24)) - 1.0 : -1.0;
          for (std::size_t m = 0; m < pb.nm; ++m) {
            const double l = pb.p_of(m, pi, z);
            if (l == 0.0) continue;
            (*grad)[pi * pb.k + m * pb.na + ps] += l * std::min(coeff, 1e8) / pb.eta;
          }
        }
      }
    }
    out[pi] = regret + info / pb.eta;
    if (grad)
      for (std::size_t kk = 0; kk < pb.k; ++kk) (*grad)[pi * pb.k + kk] += pb.gap[kk * pb.na + pi];
  }
}

double dual_value(const Problem& pb, std::span<const double> mu) {
  std::vector<double> terms;
  dual_terms(pb, mu, terms, nullptr);
  return *std::min_element(terms.begin(), terms.end());
}

double softmin(std::span<const double> v, double tau, std::vector<double>* weights) {
  const double lo = *std::min_element(v.begin(), v.end());
  double s = 0.0;
  if (weights) weights->resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double e = std::exp(-(v[i] - lo) / tau);
    if (weights) (*weights)[i] = e;
    s += e;
  }
  if (weights)
    for (double& x : *weights) x /= s;
  return lo - tau * std::log(s);
}

// Phi_k(pi) for every (k, pi) given h laid out [pi'][pi][z].
Matrix phi_matrix(const Problem& pb, std::span<const double> h) {
  Matrix phi(pb.k, pb.na);
  auto hv = [&](std::size_t t, std::size_t pi, std::size_t z) { return h[(t * pb.na + pi) * pb.nz + z]; };
  for (std::size_t m = 0; m < pb.nm; ++m) {
    for (std::size_t ps = 0; ps < pb.na; ++ps) {
      const std::size_t kk = m * pb.na + ps;
      for (std::size_t pi = 0; pi < pb.na; ++pi) {
        double mgf = 0.0;
        for (std::size_t z = 0; z < pb.nz; ++z) {
          const double l = pb.p_of(m, pi, z);
          if (l == 0.0) continue;
          double e = 0.0;
          for (std::size_t t = 0; t < pb.na; ++t) {
            if (pb.q[t] == 0.0) continue;
            e += pb.q[t] * std::exp(std::clamp(hv(t, pi, z) - hv(ps, pi, z), -kExpClamp, kExpClamp));
          }
          mgf += l * (e - 1.0);
        }
        phi(kk, pi) = pb.gap[kk * pb.na + pi] + mgf / pb.eta;
      }
    }
  }
  return phi;
}

// Cauchy-Schwarz optimal h for each (pi, z) slice under prior mu, centered
// and clamped to the h bound.
std::vector<double> h_from_dual(const Problem& pb, std::span<const double> mu) {
  std::vector<double> h(pb.na * pb.na * pb.nz, 0.0);
  std::vector<double> w(pb.na), a(pb.na);
  std::vector<bool> finite(pb.na);
  for (std::size_t pi = 0; pi < pb.na; ++pi) {
    for (std::size_t z = 0; z < pb.nz; ++z) {
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t m = 0; m < pb.nm; ++m) {
        const double l = pb.p_of(m, pi, z);
        if (l == 0.0) continue;
        for (std::size_t ps = 0; ps < pb.na; ++ps) w[ps] += mu[m * pb.na + ps] * l;
      }
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t t = 0; t < pb.na; ++t) {
        finite[t] = w[t] > kTiny && pb.q[t] > 0.0;
        if (finite[t]) {
          a[t] = 0.5 * std::log(w[t] / pb.q[t]);
          lo = std::min(lo, a[t]);
          hi = std::max(hi, a[t]);
        }
      }
      const double center = std::isfinite(lo) ? 0.5 * (lo + hi) : 0.0;
      for (std::size_t t = 0; t < pb.na; ++t) {
        double v;
        if (finite[t]) {
          v = a[t] - center;
        } else if (w[t] > kTiny) {
          v = pb.h_bound;  // q(t) = 0: only the -h[pi*] role matters
        } else if (pb.q[t] > 0.0) {
          v = -pb.h_bound;  // no posterior mass
        } else {
          v = 0.0;
        }
        h[(t * pb.na + pi) * pb.nz + z] = std::clamp(v, -pb.h_bound, pb.h_bound);
      }
    }
  }
  return h;
}

struct Primal {
  std::vector<double> p;
  std::vector<double> h;
  double upper = std::numeric_limits<double>::infinity();
};

Primal certify_h(const Problem& pb, std::vector<double> h) {
  const Matrix phi = phi_matrix(pb, h);
  const GameSolution sol = solve_matrix_game(phi, pb.floor, 1e-6);
  Primal out;
  out.p = sol.col_strategy;
  out.h = std::move(h);
  out.upper = sol.value;
  return out;
}

// Smoothed objective tau * log sum_k exp(Gamma_k / tau) at (p, h), with the
// gradient with respect to h.
double smoothed_max(const Problem& pb, std::span<const double> p, std::span<const double> h, double tau,
                    std::vector<double>* grad_h) {
  const Matrix phi = phi_matrix(pb, h);
  std::vector<double> gk(pb.k, 0.0);
  for (std::size_t kk = 0; kk < pb.k; ++kk)
    for (std::size_t pi = 0; pi < pb.na; ++pi) gk[kk] += p[pi] * phi(kk, pi);
  const double hi = *std::max_element(gk.begin(), gk.end());
  std::vector<double> sigma(pb.k);
  double s = 0.0;
  for (std::size_t kk = 0; kk < pb.k; ++kk) {
    sigma[kk] = std::exp((gk[kk] - hi) / tau);
    s += sigma[kk];
  }
  for (double& x : sigma) x /= s;
  if (grad_h) {
    grad_h->assign(h.size(), 0.0);
    auto hv = [&](std::size_t t, std::size_t pi, std::size_t z) { return h[(t * pb.na + pi) * pb.nz + z]; };
    for (std::size_t m = 0; m < pb.nm; ++m) {
      for (std::size_t ps = 0; ps < pb.na; ++ps) {
        const double sk = sigma[m * pb.na + ps];
        if (sk < 1e-16) continue;
        for (std::size_t pi = 0; pi < pb.na; ++pi) {
          for (std::size_t z = 0; z < pb.nz; ++z) {
            const double l = pb.p_of(m, pi, z);
            if (l == 0.0) continue;
            const double c = sk * p[pi] * l / pb.eta;
            double total = 0.0;
            for (std::size_t t = 0; t < pb.na; ++t) {
              if (pb.q[t] == 0.0) continue;
              const double e = pb.q[t] * std::exp(std::clamp(hv(t, pi, z) - hv(ps, pi, z), -kExpClamp, kExpClamp));
              (*grad_h)[(t * pb.na + pi) * pb.nz + z] += c * e;
              total += e;
            }
            (*grad_h)[(ps * pb.na + pi) * pb.nz + z] -= c * total;
          }
        }
      }
    }
  }
  return hi + tau * std::log(s);
}

// Block descent: normalized gradient steps in h at fixed p, with p
// re-solved exactly by the matrix game every few steps. Temperature starts
// at tau0 and halves every iterations/8 steps.
Primal polish(const Problem& pb, Primal start, std::size_t iterations, double tau0) {
  if (iterations == 0) return start;
  Primal best = start;
  std::vector<double> p = start.p;
  std::vector<double> h = start.h;
  const std::size_t halve_every = std::max<std::size_t>(1, iterations / 8);
  double tau = tau0;
  double step = 0.5;
  std::vector<double> grad;
  for (std::size_t it = 0; it < iterations; ++it) {
    if (it > 0 && it % halve_every == 0) tau *= 0.5;
    const double f0 = smoothed_max(pb, p, h, tau, &grad);
    // Per-slice rescaling by 1/p(pi) undoes the p(pi) factor in the gradient.
    for (std::size_t t = 0; t < pb.na; ++t)
      for (std::size_t pi = 0; pi < pb.na; ++pi)
        for (std::size_t z = 0; z < pb.nz; ++z) grad[(t * pb.na + pi) * pb.nz + z] /= std::max(p[pi], 1e-12);
    double norm = 0.0;
    for (double g : grad) norm += g * g;
    norm = std::sqrt(norm);
    if (!(norm > 1e-14)) break;
    bool moved = false;
    for (int tries = 0; tries < 20; ++tries) {
      std::vector<double> trial(h.size());
      for (std::size_t i = 0; i < h.size(); ++i)
        trial[i] = std::clamp(h[i] - step * grad[i] / norm, -pb.h_bound, pb.h_bound);
      if (smoothed_max(pb, p, trial, tau, nullptr) < f0) {
        h = std::move(trial);
        step *= 1.3;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) step = 0.5;
    if (it % 4 == 3 || it + 1 == iterations) {
      Primal cand = certify_h(pb, h);
      p = cand.p;
      if (cand.upper < best.upper) best = std::move(cand);
    }
  }
  return best;
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
}

}  // namespace

EstimationFunction::EstimationFunction(std::size_t num_decisions, std::size_t num_outcomes,
                                       double clip_alpha)
    : num_decisions_(num_decisions),
      num_outcomes_(num_outcomes),
      clip_alpha_(clip_alpha),
      table_(num_decisions * num_decisions * num_outcomes, 0.0) {}

double EstimationFunction::max_abs() const {
  double m = 0.0;
  for (double v : table_) m = std::max(m, std::abs(v));
  return m;
}

GammaValue gamma_objective(std::span<const double> q, double eta, std::span<const double> p,
                           const EstimationFunction& g, std::size_t pi_star, const Model& model) {
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  const std::size_t na = model.num_decisions();
  const std::size_t nz = model.num_outcomes();
  if (p.size() != na || q.size() != na || g.num_decisions() != na || g.num_outcomes() != nz)
    throw ValidationError("gamma_objective dimension mismatch");
  if (pi_star >= na) throw ValidationError("pi* out of range");
  GammaValue out;
  double regret = 0.0;
  double mgf = 0.0;
  for (std::size_t pi = 0; pi < na; ++pi) {
    if (!(p[pi] > 0.0)) throw ValidationError("sampling distribution has a zero entry");
    regret += p[pi] * (model.mean_reward(pi_star) - model.mean_reward(pi));
    const double scale = eta / p[pi];
    double inner = 0.0;
    for (std::size_t z = 0; z < nz; ++z) {
      const double l = model.prob(pi, z);
      if (l == 0.0) continue;
      double e = 0.0;
      for (std::size_t t = 0; t < na; ++t) {
        if (q[t] == 0.0) continue;
        double x = scale * (g(t, pi, z) - g(pi_star, pi, z));
        if (x > kExpClamp || x < -kExpClamp) {
          out.saturated = true;
          x = std::clamp(x, -kExpClamp, kExpClamp);
        }
        e += q[t] * (std::exp(x) - 1.0);
      }
      inner += l * e;
    }
    mgf += p[pi] * inner;
  }
  out.value = regret + mgf / eta;
  return out;
}

double exo_bayes_lower(const ModelClass& cls, std::span<const double> q, double eta, const Prior& prior) {
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  if (q.size() != cls.num_decisions()) throw ValidationError("q has the wrong dimension");
  if (prior.num_models() != cls.size() || prior.num_decisions() != cls.num_decisions())
    throw ValidationError("prior is not indexed by (class member, decision)");
  const Problem pb = make_problem(cls, q, eta, 0.0, 1.0);
  return dual_value(pb, prior.mass());
}

ExoSolution exo_solve(const ModelClass& cls, std::span<const double> q, double eta, const ExoOptions& opts) {
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  const std::size_t na = cls.num_decisions();
  if (q.size() != na) throw ValidationError("q has the wrong dimension");
  const double floor = opts.floor > 0.0 ? opts.floor : 1e-6 / static_cast<double>(na);
  const double clip = opts.clip > 0.0 ? opts.clip : 10.0 / eta;
  if (floor * static_cast<double>(na) >= 1.0) throw ValidationError("p floor too large");

  ExoSolution sol;
  sol.floor = floor;
  sol.clip = clip;
  sol.g = EstimationFunction(na, cls.num_outcomes(), clip);
  if (na == 1) {
    sol.p = FiniteDistribution::uniform(1);
    sol.dual = std::vector<double>(cls.size(), 1.0 / static_cast<double>(cls.size()));
    sol.converged = true;
    return sol;
  }

  const Problem pb = make_problem(cls, q, eta, floor, clip);
  const std::size_t k = pb.k;

  // Dual starting points.
  std::vector<std::vector<double>> starts;
  if (!opts.warm_dual.empty()) {
    if (opts.warm_dual.size() != k) throw ValidationError("warm-start dual has the wrong dimension");
    std::vector<double> w = opts.warm_dual;
    for (double& x : w) x = 0.999 * std::max(x, 0.0) + 0.001 / static_cast<double>(k);
    normalize(w);
    starts.push_back(std::move(w));
  }
  starts.emplace_back(k, 1.0 / static_cast<double>(k));
  {
    std::vector<double> w(k);
    for (std::size_t m = 0; m < pb.nm; ++m)
      for (std::size_t ps = 0; ps < na; ++ps) w[m * na + ps] = (pb.q[ps] + 1e-3) / static_cast<double>(pb.nm);
    normalize(w);
    starts.push_back(std::move(w));
  }
  {
    // Weighted by each pair's regret against uniform play.
    std::vector<double> w(k);
    for (std::size_t kk = 0; kk < k; ++kk) {
      double r = 0.0;
      for (std::size_t pi = 0; pi < na; ++pi) r += pb.gap[kk * na + pi] / static_cast<double>(na);
      w[kk] = std::max(r, 0.0) + 1e-3;
    }
    normalize(w);
    starts.push_back(std::move(w));
  }

  double best_lower = -std::numeric_limits<double>::infinity();
  std::vector<double> best_dual;
  auto consider_dual = [&](const std::vector<double>& mu) {
    const double v = dual_value(pb, mu);
    if (v > best_lower) {
      best_lower = v;
      best_dual = mu;
    }
  };
  for (std::size_t m = 0; m < pb.nm; ++m) {
    std::vector<double> pm(k, 0.0);
    pm[m * na + cls[m].opt_decision()] = 1.0;
    consider_dual(pm);
  }
  std::size_t start_idx = 0;
  double start_val = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const double v = dual_value(pb, starts[s]);
    consider_dual(starts[s]);
    if (v > start_val) {
      start_val = v;
      start_idx = s;
    }
  }

  Primal best_primal = certify_h(pb, h_from_dual(pb, starts[start_idx]));

  // Entropic mirror ascent on the soft-min of the dual terms.
  std::vector<double> theta(k);
  for (std::size_t kk = 0; kk < k; ++kk) theta[kk] = std::log(std::max(starts[start_idx][kk], 1e-300));
  std::vector<double> mu = starts[start_idx];
  std::vector<double> terms, grad, sigma, dir(k);
  double tau = 0.05;
  double step = 1.0;
  std::size_t it = 0;
  for (; it < opts.iterations; ++it) {
    dual_terms(pb, mu, terms, &grad);
    const double f0 = softmin(terms, tau, &sigma);
    std::fill(dir.begin(), dir.end(), 0.0);
    for (std::size_t pi = 0; pi < na; ++pi)
      for (std::size_t kk = 0; kk < k; ++kk) dir[kk] += sigma[pi] * grad[pi * k + kk];
    double gmax = 0.0;
    for (double d : dir) gmax = std::max(gmax, std::abs(d));
    if (!(gmax > 0.0)) break;
    bool moved = false;
    for (int tries = 0; tries < 30; ++tries) {
      std::vector<double> th(k), trial(k);
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t kk = 0; kk < k; ++kk) {
        th[kk] = theta[kk] + step * dir[kk] / gmax;
        hi = std::max(hi, th[kk]);
      }
      for (std::size_t kk = 0; kk < k; ++kk) {
        th[kk] -= hi;
        th[kk] = std::max(th[kk], -600.0);
        trial[kk] = std::exp(th[kk]);
      }
      normalize(trial);
      std::vector<double> trial_terms;
      dual_terms(pb, trial, trial_terms, nullptr);
      if (softmin(trial_terms, tau, nullptr) > f0) {
        theta = std::move(th);
        mu = std::move(trial);
        step = std::min(step * 1.5, 50.0);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) step = 1.0;
    if (it % opts.certify_every == opts.certify_every - 1 || it + 1 == opts.iterations) {
      consider_dual(mu);
      Primal cand = certify_h(pb, h_from_dual(pb, mu));
      if (cand.upper < best_primal.upper) best_primal = std::move(cand);
      const double gap = best_primal.upper - best_lower;
      if (gap <= opts.tolerance) {
        ++it;
        break;
      }
      // Softmin bias is at most tau log|Pi|; keep it below the current gap.
      tau = std::clamp(0.25 * gap / std::log(static_cast<double>(na)), 1e-12, tau);
    }
  }
  consider_dual(mu);
  if (best_primal.upper - best_lower > opts.tolerance)
    best_primal = polish(pb, std::move(best_primal), opts.polish_iterations,
                         std::max(best_primal.upper - best_lower, 1e-9) / std::log(static_cast<double>(k)));

  // Final certificate in original coordinates: g = h p(pi) / eta.
  sol.p = FiniteDistribution::normalized(best_primal.p);
  const auto& p = sol.p.vector();
  for (std::size_t t = 0; t < na; ++t)
    for (std::size_t pi = 0; pi < na; ++pi)
      for (std::size_t z = 0; z < pb.nz; ++z)
        sol.g.at(t, pi, z) = best_primal.h[(t * na + pi) * pb.nz + z] * p[pi] / eta;
  double upper = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < cls.size(); ++m) {
    for (std::size_t ps = 0; ps < na; ++ps) {
      const GammaValue gv = gamma_objective(q, eta, p, sol.g, ps, cls[m]);
      upper = std::max(upper, gv.value);
      sol.saturated = sol.saturated || gv.saturated;
    }
  }
  sol.upper = upper;
  sol.lower = best_lower;
  sol.dual = best_dual;
  sol.iterations = it;
  sol.converged = sol.upper - sol.lower <= opts.tolerance;
  return sol;
}

namespace {

SupQReport sup_q_impl(const ModelClass& cls, double eta, const SupQBudget& budget, bool parallel) {
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  if (budget.resolution == 0) throw ValidationError("q grid resolution must be >= 1");
  const std::size_t na = cls.num_decisions();
  SupQReport rep;
  rep.resolution = budget.resolution;
  const auto grid = simplex_grid(na, budget.resolution, 100'000);
  for (const auto& pt : grid) {
    std::vector<double> q(na);
    for (std::size_t i = 0; i < na; ++i) q[i] = pt[i] / static_cast<double>(budget.resolution);
    rep.q_points.push_back(std::move(q));
  }
  rep.grid_points = rep.q_points.size();
  for (const auto& q : budget.extra_q) {
    if (q.size() != na) throw ValidationError("extra q has the wrong dimension");
    rep.q_points.push_back(FiniteDistribution::normalized(q).vector());
  }

  auto evaluate = [&](std::size_t from) {
    const std::size_t count = rep.q_points.size();
    rep.per_q_uppers.resize(count);
    rep.per_q_lowers.resize(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(from); i < n; ++i) {
      const ExoSolution s = exo_solve(cls, rep.q_points[i], eta, budget.options);
      rep.per_q_uppers[i] = s.upper;
      rep.per_q_lowers[i] = s.lower;
    }
  };
  evaluate(0);

  auto best_index = [&] {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < rep.per_q_lowers.size(); ++i)
      if (rep.per_q_lowers[i] > rep.per_q_lowers[arg]) arg = i;
    return arg;
  };

  // Local refinement: move mass between coordinate pairs around the best q.
  double delta = 0.5 / static_cast<double>(budget.resolution);
  for (std::size_t round = 0; round < budget.refine_rounds && na > 1; ++round, delta *= 0.5) {
    const std::vector<double> center = rep.q_points[best_index()];
    const std::size_t from = rep.q_points.size();
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t b = 0; b < na; ++b) {
        if (a == b || center[b] <= 0.0) continue;
        std::vector<double> q = center;
        const double move = std::min(delta, q[b]);
        q[a] += move;
        q[b] -= move;
        rep.q_points.push_back(std::move(q));
      }
    }
    evaluate(from);
  }
  rep.best_q = best_index();
  rep.lower = rep.per_q_lowers[rep.best_q];
  return rep;
}

}  // namespace

SupQReport exo_sup_q(const ModelClass& cls, double eta, const SupQBudget& budget) {
  return sup_q_impl(cls, eta, budget, true);
}

SupQReport exo_sup_q_serial(const ModelClass& cls, double eta, const SupQBudget& budget) {
  return sup_q_impl(cls, eta, budget, false);
}

}  // namespace decx
