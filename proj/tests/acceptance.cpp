// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "decx/dec.hpp"
#include "decx/divergences.hpp"
#include "decx/environments.hpp"
#include "decx/harness.hpp"
#include "decx/info_ratio.hpp"
#include "decx/simplex.hpp"
#include "fixtures.hpp"

using namespace decx;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Shared between criteria 10-13.
struct RegretRun {
  double eta = 0.0;
  double dec = 0.0;
  SimulationResult result;
  std::string csv;
};
RegretRun g_run400;
bool g_have_run = false;

const BuiltFamily& hard2() {
  static const BuiltFamily f = build_bandit_hard(2, 0.1);
  return f;
}

Adversary uniform_mixture(const ModelClass& cls) {
  return Adversary::stochastic_mixture(std::vector<double>(cls.size(), 1.0 / cls.size()));
}

SimulationConfig regret_config(const std::string& algo, std::size_t horizon) {
  SimulationConfig c;
  c.algorithm = algo;
  c.horizon = horizon;
  c.seeds = 50;
  c.base_seed = 0;
  return c;
}

Outcome c1_sandwich() {
  CounterRng rng(101, 1);
  double worst = -INFINITY;
  int bad = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 8);
    const auto p = fixtures::random_simplex(rng, n, 0.2), q = fixtures::random_simplex(rng, n, 0.2);
    const double h = hellinger_sq(p, q), v = mgf_variational(p, q);
    const double viol = std::max(0.5 * h - v, v - h);
    worst = std::max(worst, viol);
    if (viol > 1e-10) ++bad;
  }
  return {bad == 0, fmt("200 pairs, violations=%d, max violation=%.3g", bad, worst)};
}

Outcome c2_clip() {
  CounterRng rng(102, 1);
  int bad = 0;
  double worst = -INFINITY;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 8);
    const auto p = fixtures::random_simplex(rng, n, 0.2), q = fixtures::random_simplex(rng, n, 0.2);
    for (double a : {1.0, 2.0, 4.0}) {
      const double gap = mgf_variational(p, q) - mgf_variational(p, q, a) - 4 * std::exp(-a);
      worst = std::max(worst, gap);
      if (gap > 1e-12) ++bad;
    }
  }
  return {bad == 0, fmt("100 pairs x alpha in {1,2,4}, violations=%d, max(deficit - 4e^-alpha)=%.3g", bad, worst)};
}

Outcome c3_change_of_measure() {
  CounterRng rng(103, 1);
  int bad_half = 0, bad_two = 0;
  double worst_ratio = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 8);
    const auto p = fixtures::random_simplex(rng, n, 0.2), q = fixtures::random_simplex(rng, n, 0.2);
    double ep = 0, eq = 0, ep2 = 0, eq2 = 0;
    for (std::size_t x = 0; x < n; ++x) {
      const double h = rng.uniform() * 2 - 1;
      ep += p[x] * h;
      eq += q[x] * h;
      ep2 += p[x] * h * h;
      eq2 += q[x] * h * h;
    }
    const double lhs = std::abs(ep - eq), m2 = ep2 + eq2, hs = hellinger_sq(p, q);
    if (lhs > std::sqrt(0.5 * m2 * hs) + 1e-10) ++bad_half;
    if (lhs > std::sqrt(2.0 * m2 * hs) + 1e-10) ++bad_two;
    if (m2 * hs > 0) worst_ratio = std::max(worst_ratio, lhs * lhs / (m2 * hs));
  }
  return {bad_half == 0,
          fmt("200 (P,Q,h): stated constant 1/2 violated %d times, max |dE|^2/((E_P h^2+E_Q h^2) H^2)=%.4f; "
              "constant 2 violated %d times",
              bad_half, worst_ratio, bad_two)};
}

Outcome c4_mab() {
  bool ok = true;
  std::string worst;
  double min_margin = INFINITY;
  for (std::size_t a : {2, 3, 4}) {
    for (double mult : {1.0 / 3, 1.0, 3.0}) {
      const double g = a * mult, delta = a / (12 * g);
      const auto fam = build_bandit_hard(a, delta);
      const double v = dec_value(fam.cls, g, fam.cls[0]).value;
      const double lo = a / (64 * g), hi = a / g + 1e-6;
      const bool in = v >= lo && v <= hi;
      ok = ok && in;
      const double margin = std::min(v - lo, hi - v);
      if (margin < min_margin) {
        min_margin = margin;
        worst = fmt("A=%zu gamma=%.3g dec=%.5f in [%.5f, %.5f]", a, g, v, lo, hi);
      }
    }
  }
  return {ok, "9 (A, gamma) pairs; tightest: " + worst};
}

Outcome c5_linear() {
  bool ok = true;
  double worst = -INFINITY;
  for (std::size_t d : {2, 3}) {
    std::vector<std::vector<double>> actions(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) actions[i][i] = 1.0;
    std::vector<std::vector<double>> thetas;
    for (const auto& pt : simplex_grid(d + 1, 2)) {
      std::vector<double> th(d);
      for (std::size_t i = 0; i < d; ++i) th[i] = pt[i] / 2.0;
      thetas.push_back(th);
    }
    const ModelClass cls = build_linear(actions, thetas);
    for (double g : {1.0, 4.0, 16.0}) {
      const double v = dec_value_sup(cls, g).value, b = d / (4 * g);
      worst = std::max(worst, v - b);
      ok = ok && v <= b + 1e-6;
    }
  }
  return {ok, fmt("d in {2,3}, gamma in {1,4,16}; max(dec - d/(4 gamma))=%.4g", worst)};
}

Outcome c6_mdp() {
  const MdpShape shape{3, 2, 2, 2};
  const double akbar = std::pow(2.0, static_cast<double>(shape.effective_depth()));
  bool cert_ok = true, ok = true;
  std::string detail;
  for (double delta = 0.02; delta < 0.5; delta += 0.02) {
    const auto fam = build_mdp_hard(shape, delta);
    cert_ok = cert_ok && check_certificate(fam.cls, *fam.certificate).ok;
  }
  for (double mult : {1.0, 2.0, 4.0}) {
    const double g = 4.0 / 6 * mult, eps = akbar / (24 * g), target = akbar / (24 * g);
    double best = -INFINITY, best_delta = 0.0;
    for (double delta = 0.02; delta < 0.5; delta += 0.02) {
      const auto fam = build_mdp_hard(shape, delta);
      const double v = dec_hull(fam.cls, g, 2, eps).at_r.value;
      if (v > best) {
        best = v;
        best_delta = delta;
      }
    }
    ok = ok && best >= 0.95 * target;
    detail += fmt("gamma=%.3g: dec=%.5f (Delta=%.2f) vs 0.95*target=%.5f (ratio %.3f); ", g, best, best_delta,
                  0.95 * target, best / target);
  }
  return {ok && cert_ok, fmt("certificates %s; ", cert_ok ? "pass" : "FAIL") + detail};
}

Outcome c7_family_formula() {
  std::vector<BuiltFamily> fams;
  for (std::size_t a : {2, 3, 4})
    for (double d : {0.05, 0.1, 0.25, 0.45}) fams.push_back(build_bandit_hard(a, d));
  for (double d : {0.1, 0.3, 0.45}) {
    fams.push_back(build_mdp_hard(MdpShape{3, 2, 2, 2}, d));
    fams.push_back(build_mdp_hard(MdpShape{4, 2, 3, 3}, d));
    fams.push_back(build_mdp_hard(MdpShape{3, 3, 2, 2}, d));
  }
  int checks = 0, bad = 0;
  double min_margin = INFINITY;
  for (const auto& f : fams) {
    const auto& c = *f.certificate;
    for (double g : {0.1, 0.5, 1.0, 2.0, 4.0, 16.0, 64.0}) {
      const double v = dec_value(f.cls, g, f.cls[c.reference]).value;
      const double b = hard_family_bound(c.alpha, c.beta, c.delta, c.n, g);
      min_margin = std::min(min_margin, v - b);
      ++checks;
      if (v < b - 1e-6) ++bad;
    }
  }
  return {bad == 0, fmt("%zu families x 7 gammas = %d checks, violations=%d, min(dec - bound)=%.3g", fams.size(),
                        checks, bad, min_margin)};
}

Outcome c8_equivalence() {
  CounterRng rng(108, 1);
  EquivalenceBudget b;
  b.resolutions = {2, 4, 8};
  int stated = 0, stated_ok = 0, ir = 0, ir_ok = 0, corrected_ok = 0, conv_ok = 0;
  double worst_stated = -INFINITY;
  for (int i = 0; i < 10; ++i) {
    const std::size_t nd = 2 + i % 2, nm = 2 + (i / 2) % 2, no = 1 + (i / 4) % 2;
    const ModelClass cls = fixtures::random_class(rng, nd, nm, 2, no);
    const EquivalenceReport r = verify_equivalence(cls, b);
    conv_ok += r.convergence_ok();
    for (const auto& c : r.checks) {
      if (c.name == "dec_hull(1/(4eta)) <= exo_upper") {
        ++stated;
        stated_ok += c.passed;
        worst_stated = std::max(worst_stated, c.lhs - c.rhs);
      } else if (c.name == "ir(1/eta) <= exo_upper") {
        ++ir;
        ir_ok += c.passed;
      } else if (c.name == "dec_hull(4/eta) <= exo_upper") {
        corrected_ok += c.passed;
      }
    }
  }
  const bool pass = stated_ok == stated && ir_ok == ir && conv_ok == 10;
  return {pass, fmt("dec_hull(1/(4eta)) <= exo: %d/%d (max lhs-rhs=%.4g); ir(1/eta) <= exo: %d/%d; "
                    "slack nonincreasing: %d/10 classes; dec_hull(4/eta) <= exo: %d/%d",
                    stated_ok, stated, worst_stated, ir_ok, ir, conv_ok, corrected_ok, stated)};
}

Outcome c9_ir_convex() {
  const ModelClass& cls = hard2().cls;
  IrBudget b;
  b.grid_resolution = 8;
  std::vector<Model> aug(cls.models().begin(), cls.models().end());
  CounterRng rng(109, 1);
  for (int i = 0; i < 20; ++i)
    aug.push_back(collapse_mixture(cls, {FiniteDistribution::normalized(fixtures::random_simplex(rng, cls.size()))},
                                   "mix" + std::to_string(i)));
  const double base = ir_search(cls, 1.0, b).value;
  const IrResult big = ir_search(ModelClass(std::move(aug)), 1.0, b);
  const double diff = std::abs(base - big.value);
  return {diff <= 0.05, fmt("ir(M)=%.5f, ir(M + 20 mixtures)=%.5f (%s), |diff|=%.5f", base, big.value,
                            big.search_report.method.c_str(), diff)};
}

Outcome c10_regret() {
  const ModelClass& cls = hard2().cls;
  const Adversary adv = uniform_mixture(cls);
  const double a = 2.0;
  std::vector<double> logt, logm;
  std::string detail;
  bool ok = true;
  for (std::size_t T : {100, 200, 400}) {
    const SimulationConfig cfg = regret_config("exo+", T);
    SimulationResult res = run_simulation(cls, adv, cfg);
    const double eta = res.summary.eta;
    logt.push_back(std::log(double(T)));
    logm.push_back(std::log(std::max(res.summary.mean, 1e-12)));
    const double dec = dec_hull(cls, 1.0 / (8 * eta), 4).at_r.value;
    const double bound = theorem_bound(eta, T, 0.1, dec, cls.num_decisions());
    std::size_t within = 0;
    for (const auto& r : res.runs) within += r.ledger.reg_dm <= bound;
    const double cap = 16 * std::sqrt(a * T * std::log(double(cls.num_decisions())));
    const bool t_ok = res.summary.failed == 0 && within >= 45 && (T != 400 || res.summary.mean <= cap);
    ok = ok && t_ok;
    detail += fmt("T=%zu mean=%.3f max=%.3f within bound(%.1f)=%zu/50 saturated=%zu unconverged=%zu; ", T,
                  res.summary.mean, res.summary.max, bound, within, res.summary.saturated_rounds,
                  res.summary.unconverged_rounds);
    if (T == 400) {
      detail += fmt("cap 16 sqrt(AT log|Pi|)=%.1f; ", cap);
      std::ostringstream os;
      write_csv(os, res);
      g_run400 = {eta, dec, std::move(res), os.str()};
      g_have_run = true;
    }
  }
  const double mx = (logt[0] + logt[1] + logt[2]) / 3, my = (logm[0] + logm[1] + logm[2]) / 3;
  double num = 0, den = 0;
  for (int i = 0; i < 3; ++i) {
    num += (logt[i] - mx) * (logm[i] - my);
    den += (logt[i] - mx) * (logt[i] - mx);
  }
  const double slope = num / den;
  ok = ok && slope <= 0.65;
  return {ok, detail + fmt("slope=%.3f", slope)};
}

Outcome c11_exp3() {
  if (!g_have_run) return {false, "criterion 10 run missing"};
  const ModelClass& cls = hard2().cls;
  const SimulationResult res = run_simulation(cls, uniform_mixture(cls), regret_config("exp3", 400));
  const double ratio = res.summary.mean / g_run400.result.summary.mean;
  return {res.summary.failed == 0 && ratio >= 0.5 && ratio <= 2.0,
          fmt("EXP3 mean=%.3f, ExO+ mean=%.3f, ratio=%.3f", res.summary.mean, g_run400.result.summary.mean, ratio)};
}

Outcome c12_tail() {
  if (!g_have_run) return {false, "criterion 10 run missing"};
  std::vector<double> regs;
  for (const auto& r : g_run400.result.runs) regs.push_back(r.ledger.reg_dm);
  const std::size_t T = 400;
  const TailReport t = tail_stats(regs, T);
  const double scale = std::sqrt(5.0) *
                       theorem_bound(g_run400.eta, T, 1.0 / (T * T), g_run400.dec, hard2().cls.num_decisions()) *
                       std::log(double(T));
  const bool ok = std::isfinite(t.r_hat) && t.r_hat <= scale;
  return {ok, fmt("R_hat=%.3f, sqrt5*bound(delta=1/T^2)*log T=%.1f, q50=%.3f q99=%.3f, consistency=%s", t.r_hat,
                  scale, t.quantiles[0], t.quantiles[3],
                  t.consistency_ok ? (*t.consistency_ok ? "ok" : "violated") : "n/a")};
}

Outcome c13_determinism() {
  if (!g_have_run) return {false, "criterion 10 run missing"};
  const ModelClass& cls = hard2().cls;
  const auto cfg = regret_config("exo+", 400);
  std::ostringstream a, b;
  write_csv(a, run_simulation(cls, uniform_mixture(cls), cfg));
  write_csv(b, run_simulation_serial(cls, uniform_mixture(cls), cfg));
  const bool ok = a.str() == g_run400.csv && b.str() == g_run400.csv;
  return {ok, fmt("3 runs (parallel, parallel, serial), %zu bytes each, identical=%s", g_run400.csv.size(),
                  ok ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"hellinger-mgf sandwich", c1_sandwich},
      {"clipped deficit", c2_clip},
      {"change of measure", c3_change_of_measure},
      {"mab dec bounds", c4_mab},
      {"linear dec bound", c5_linear},
      {"tabular mdp hard family", c6_mdp},
      {"hard family formula", c7_family_formula},
      {"equivalence chain", c8_equivalence},
      {"ir convexification", c9_ir_convex},
      {"exo+ regret", c10_regret},
      {"exp3 baseline", c11_exp3},
      {"tail statistics", c12_tail},
      {"determinism", c13_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s criterion %zu (%s) [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
