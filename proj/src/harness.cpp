#include "decx/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "decx/dec.hpp"
#include "decx/error.hpp"

namespace decx {

namespace {

SeedRun run_seed(const ModelClass& cls, const Adversary& adversary, const SimulationConfig& cfg, double eta,
                 std::uint64_t seed) {
  SeedRun run;
  run.seed = seed;
  RunOptions opts = cfg.options;
  opts.seed = seed;
  try {
    if (cfg.algorithm == "exo+") {
      run.records = exo_plus_run(cls, adversary, cfg.horizon, eta, opts);
    } else {
      run.records = exp3_run(cls, adversary, cfg.horizon, eta, opts);
    }
    run.ledger = make_ledger(run.records);
  } catch (const std::exception& e) {
    run.error = e.what();
  }
  return run;
}

SimulationResult simulate(const ModelClass& cls, const Adversary& adversary, const SimulationConfig& cfg,
                          bool parallel) {
  if (cfg.algorithm != "exo+" && cfg.algorithm != "exp3")
    throw ValidationError("unknown algorithm: " + cfg.algorithm);
  if (cfg.seeds == 0) throw ValidationError("need at least one seed");
  if (cfg.horizon == 0) throw ValidationError("horizon T must be >= 1");
  adversary.check(cls, cfg.horizon);
  const double eta = cfg.eta > 0.0 ? cfg.eta : default_eta(cls.num_decisions(), cfg.horizon, cfg.delta);

  SimulationResult res;
  res.runs.resize(cfg.seeds);
  const auto n = static_cast<std::ptrdiff_t>(cfg.seeds);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    res.runs[i] = run_seed(cls, adversary, cfg, eta, cfg.base_seed + static_cast<std::uint64_t>(i));

  SimulationSummary& s = res.summary;
  s.eta = eta;
  std::vector<double> regs;
  double realized = 0.0;
  for (const auto& r : res.runs) {
    if (!r.error.empty()) {
      ++s.failed;
      continue;
    }
    regs.push_back(r.ledger.reg_dm);
    realized += r.ledger.realized;
    for (const auto& rec : r.records) {
      s.unconverged_rounds += rec.solver_converged ? 0 : 1;
      s.saturated_rounds += rec.solver_saturated ? 1 : 0;
    }
  }
  if (!regs.empty()) {
    double sum = 0.0;
    for (double x : regs) sum += x;
    s.mean = sum / static_cast<double>(regs.size());
    s.mean_realized = realized / static_cast<double>(regs.size());
    s.max = *std::max_element(regs.begin(), regs.end());
    std::vector<double> sorted = regs;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    s.median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  }
  return res;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

RegretLedger make_ledger(const std::vector<StepRecord>& records) {
  RegretLedger led;
  if (records.empty()) return led;
  const std::size_t na = records.front().regret_increments.size();
  led.per_comparator.assign(na, 0.0);
  std::vector<double> realized(na, 0.0);
  double played = 0.0;
  led.trace.reserve(records.size());
  for (const auto& rec : records) {
    for (std::size_t ps = 0; ps < na; ++ps) {
      led.per_comparator[ps] += rec.regret_increments[ps];
      realized[ps] += rec.realized_rewards[ps];
    }
    played += rec.reward;
    led.trace.push_back(*std::max_element(led.per_comparator.begin(), led.per_comparator.end()));
  }
  const auto it = std::max_element(led.per_comparator.begin(), led.per_comparator.end());
  led.comparator = static_cast<std::size_t>(it - led.per_comparator.begin());
  led.reg_dm = *it;
  led.realized = *std::max_element(realized.begin(), realized.end()) - played;
  return led;
}

SimulationResult run_simulation(const ModelClass& cls, const Adversary& adversary, const SimulationConfig& cfg) {
  return simulate(cls, adversary, cfg, true);
}

SimulationResult run_simulation_serial(const ModelClass& cls, const Adversary& adversary,
                                       const SimulationConfig& cfg) {
  return simulate(cls, adversary, cfg, false);
}

void write_csv(std::ostream& os, const SimulationResult& result) {
  os << "# decx-csv v1\n";
  os << "seed,t,pi,r,expected_regret_increment,solver_upper,solver_lower\n";
  for (const auto& run : result.runs) {
    if (!run.error.empty()) continue;
    for (const auto& rec : run.records) {
      os << run.seed << ',' << rec.t << ',' << rec.pi << ',' << num(rec.reward) << ','
         << num(rec.regret_increments[run.ledger.comparator]) << ',' << num(rec.solver_upper) << ','
         << num(rec.solver_lower) << '\n';
    }
  }
}

nlohmann::json to_json(const SimulationResult& result, bool include_rounds) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& run : result.runs) {
    nlohmann::json j{{"seed", run.seed}};
    if (!run.error.empty()) {
      j["error"] = run.error;
    } else {
      j["reg_dm"] = run.ledger.reg_dm;
      j["comparator"] = run.ledger.comparator;
      j["realized_regret"] = run.ledger.realized;
      j["per_comparator"] = run.ledger.per_comparator;
      if (include_rounds) j["trace"] = run.ledger.trace;
    }
    seeds.push_back(std::move(j));
  }
  const auto& s = result.summary;
  return {{"eta", s.eta},
          {"mean", s.mean},
          {"median", s.median},
          {"max", s.max},
          {"mean_realized", s.mean_realized},
          {"failed_seeds", s.failed},
          {"unconverged_rounds", s.unconverged_rounds},
          {"saturated_rounds", s.saturated_rounds},
          {"seeds", seeds}};
}

TailReport tail_stats(const std::vector<double>& regrets, std::size_t horizon) {
  if (regrets.size() < 20) throw ValidationError("tail statistics need at least 20 seeds");
  TailReport rep;
  std::vector<double> pos(regrets.size());
  for (std::size_t i = 0; i < regrets.size(); ++i) pos[i] = std::max(regrets[i], 0.0);
  std::sort(pos.begin(), pos.end());
  const double n = static_cast<double>(pos.size());
  auto quantile = [&](double level) {
    const std::size_t idx = std::min(pos.size() - 1, static_cast<std::size_t>(std::ceil(level * n)) - (level > 0 ? 1 : 0));
    return pos[idx];
  };
  rep.quantile_levels = {0.5, 0.9, 0.95, 0.99, 1.0};
  for (double l : rep.quantile_levels) rep.quantiles.push_back(quantile(l));
  for (double x : pos) rep.second_moment += x * x / n;

  std::vector<double> positive;
  for (double x : pos)
    if (x > 0.0) positive.push_back(x);
  if (positive.empty()) return rep;
  for (int d = 1; d <= 10; ++d) {
    const double level = d / 10.0;
    const std::size_t idx = std::min(positive.size() - 1,
                                     static_cast<std::size_t>(std::ceil(level * static_cast<double>(positive.size()))) - 1);
    if (rep.t_grid.empty() || positive[idx] != rep.t_grid.back()) rep.t_grid.push_back(positive[idx]);
  }
  for (double t : rep.t_grid) {
    const auto count = static_cast<double>(pos.end() - std::lower_bound(pos.begin(), pos.end(), t));
    rep.r_hat = std::max(rep.r_hat, t * std::sqrt(count / n));
  }
  const double T = static_cast<double>(horizon);
  if (rep.r_hat > 0.0 && rep.r_hat < T)
    rep.consistency_ok = rep.r_hat * rep.r_hat >= rep.second_moment / (std::log(T / rep.r_hat) + 1.0);
  return rep;
}

double theorem_bound(double eta, std::size_t horizon, double delta, double dec_hull_value,
                     std::size_t num_decisions) {
  return dec_hull_value * static_cast<double>(horizon) +
         (2.0 / eta) * std::log(static_cast<double>(num_decisions) / delta);
}

bool EquivalenceReport::rigorous_ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const EquivalenceCheck& c) { return c.kind != "rigorous" || c.passed; });
}

bool EquivalenceReport::convergence_ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const EquivalenceCheck& c) { return c.kind != "convergence" || c.passed; });
}

EquivalenceReport verify_equivalence(const ModelClass& cls, const EquivalenceBudget& budget) {
  if (cls.num_decisions() > 3 || cls.size() > 3 || cls.num_outcomes() > 4)
    throw ValidationError("equivalence checks need |Pi| <= 3, |class| <= 3, |Z| <= 4");
  if (budget.etas.empty() || budget.resolutions.empty()) throw ValidationError("empty eta or resolution list");
  for (double eta : budget.etas)
    if (!(eta > 0.0)) throw ValidationError("eta must be positive");

  EquivalenceReport rep;
  auto add = [&](std::string name, std::string kind, double eta, std::size_t r, double lhs, double rhs,
                 double tol) {
    rep.checks.push_back({std::move(name), std::move(kind), eta, r, lhs, rhs, lhs <= rhs + tol});
  };

  for (double eta : budget.etas) {
    EquivalenceRow row;
    row.eta = eta;
    const IrResult ir1 = ir_search(cls, 1.0 / eta, budget.ir);
    const IrResult ir8 = ir_search(cls, 1.0 / (8.0 * eta), budget.ir);
    row.ir_eta = ir1.value;
    row.ir_8eta = ir8.value;

    SupQBudget sq = budget.exo;
    // The IR maximizer's prior marginal is where the IR/ExO comparison is tight.
    std::vector<double> marginal(cls.num_decisions(), 0.0);
    for (std::size_t m = 0; m < cls.size(); ++m)
      for (std::size_t pi = 0; pi < cls.num_decisions(); ++pi) marginal[pi] += ir1.best_prior(m, pi);
    sq.extra_q.push_back(marginal);
    const auto mass = ir1.best_prior.mass();
    sq.options.warm_dual.assign(mass.begin(), mass.end());
    const SupQReport exo = exo_sup_q(cls, eta, sq);
    row.exo_lower = exo.lower;
    row.exo_upper = exo.per_q_uppers[exo.best_q];
    row.best_q = exo.q_points[exo.best_q];

    for (std::size_t r : budget.resolutions) {
      const ModelClass hull = hull_grid(cls, r);
      row.resolutions.push_back(r);
      row.dec_4eta.push_back(dec_value_sup(hull, 1.0 / (4.0 * eta)).value);
      row.dec_4_over.push_back(dec_value_sup(hull, 4.0 / eta).value);
      row.dec_8eta.push_back(dec_value_sup(hull, 1.0 / (8.0 * eta)).value);
      row.slack.push_back(std::max(0.0, row.exo_lower - row.dec_8eta.back()));
    }

    for (std::size_t i = 0; i < row.resolutions.size(); ++i) {
      const std::size_t r = row.resolutions[i];
      add("dec_hull(1/(4eta)) <= exo_upper", "rigorous", eta, r, row.dec_4eta[i], row.exo_upper, budget.tol);
      add("dec_hull(4/eta) <= exo_upper", "rigorous", eta, r, row.dec_4_over[i], row.exo_upper, budget.tol);
      add("exo_lower <= dec_hull(1/(8eta)) + slack", "diagnostic", eta, r, row.exo_lower,
          row.dec_8eta[i] + row.slack[i], 0.0);
      add("ir(1/(8eta)) <= dec_hull(1/(8eta))", "diagnostic", eta, r, row.ir_8eta, row.dec_8eta[i], budget.tol);
      if (i > 0)
        add("slack(r) nonincreasing", "convergence", eta, r, row.slack[i], row.slack[i - 1], 1e-12);
    }
    add("ir(1/eta) <= exo_upper", "rigorous", eta, 0, row.ir_eta, row.exo_upper, budget.tol);
    add("exo_lower <= ir(1/(8eta))", "diagnostic", eta, 0, row.exo_lower, row.ir_8eta, budget.tol);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

nlohmann::json to_json(const EquivalenceReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"eta", r.eta},
                    {"ir_at_1_over_eta", r.ir_eta},
                    {"ir_at_1_over_8eta", r.ir_8eta},
                    {"exo_lower", r.exo_lower},
                    {"exo_upper_at_best_q", r.exo_upper},
                    {"best_q", r.best_q},
                    {"resolutions", r.resolutions},
                    {"dec_hull_1_over_4eta", r.dec_4eta},
                    {"dec_hull_4_over_eta", r.dec_4_over},
                    {"dec_hull_1_over_8eta", r.dec_8eta},
                    {"slack", r.slack}});
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"kind", c.kind},
                      {"eta", c.eta},
                      {"resolution", c.resolution},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"passed", c.passed}});
  }
  return {{"rows", rows},
          {"checks", checks},
          {"rigorous_ok", report.rigorous_ok()},
          {"convergence_ok", report.convergence_ok()}};
}

}  // namespace decx
