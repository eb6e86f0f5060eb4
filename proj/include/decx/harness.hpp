#pragma once

// Simulation orchestration, regret accounting, tail statistics, the regret
// bound evaluator and the equivalence-chain verification report.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "decx/algorithms.hpp"
#include "decx/core.hpp"
#include "decx/environments.hpp"
#include "decx/exo.hpp"
#include "decx/info_ratio.hpp"

namespace decx {

/// Reg_DM = max over pi* of sum_t [f^{M_t}(pi*) - E_{p_t} f^{M_t}].
struct RegretLedger {
  std::vector<double> per_comparator;
  double reg_dm = 0.0;
  /// Comparator attaining reg_dm (lowest index on ties).
  std::size_t comparator = 0;
  /// max_pi* sum_t r_t(pi*) - sum_t r_t(pi_t) from realized rewards.
  double realized = 0.0;
  /// Reg_DM after each round.
  std::vector<double> trace;
};

RegretLedger make_ledger(const std::vector<StepRecord>& records);

struct SimulationConfig {
  std::string algorithm = "exo+";  // "exo+" or "exp3"
  std::size_t horizon = 100;
  /// <= 0 selects default_eta(|Pi|, T, delta).
  double eta = 0.0;
  double delta = 0.1;
  std::size_t seeds = 1;
  std::uint64_t base_seed = 0;
  RunOptions options;
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<StepRecord> records;
  RegretLedger ledger;
  /// Non-empty when the seed failed; the run is kept and flagged.
  std::string error;
};

struct SimulationSummary {
  double eta = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
  double mean_realized = 0.0;
  std::size_t failed = 0;
  std::size_t unconverged_rounds = 0;
  std::size_t saturated_rounds = 0;
};

struct SimulationResult {
  std::vector<SeedRun> runs;
  SimulationSummary summary;
};

/// Seed i uses base_seed + i. Seeds run under OpenMP; results are ordered
/// by seed index.
SimulationResult run_simulation(const ModelClass& cls, const Adversary& adversary, const SimulationConfig& cfg);
/// Serial reference implementation of run_simulation.
SimulationResult run_simulation_serial(const ModelClass& cls, const Adversary& adversary,
                                       const SimulationConfig& cfg);

/// "# decx-csv v1" header, then seed,t,pi,r,expected_regret_increment,
/// solver_upper,solver_lower with the increment taken against the seed's
/// final comparator, so the column sums to Reg_DM.
void write_csv(std::ostream& os, const SimulationResult& result);
nlohmann::json to_json(const SimulationResult& result, bool include_rounds = false);

struct TailReport {
  std::vector<double> quantile_levels;
  std::vector<double> quantiles;
  /// max over the t-grid of t * sqrt(P(Reg_+ >= t)).
  double r_hat = 0.0;
  std::vector<double> t_grid;
  double second_moment = 0.0;
  /// R^2 >= E[Reg_+^2] / (log(T/R) + 1); unset when R = 0 or R >= T.
  std::optional<bool> consistency_ok;
};

/// Needs at least 20 values.
TailReport tail_stats(const std::vector<double>& regrets, std::size_t horizon);

/// dec * T + (2/eta) log(|Pi| / delta).
double theorem_bound(double eta, std::size_t horizon, double delta, double dec_hull_value,
                     std::size_t num_decisions);

struct EquivalenceBudget {
  std::vector<double> etas{0.5, 1.0, 2.0};
  std::vector<std::size_t> resolutions{2, 4, 8};
  IrBudget ir;
  SupQBudget exo;
  double tol = 1e-3;
};

struct EquivalenceCheck {
  std::string name;
  std::string kind;  // "rigorous", "convergence" or "diagnostic"
  double eta = 0.0;
  std::size_t resolution = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = true;
};

struct EquivalenceRow {
  double eta = 0.0;
  double ir_eta = 0.0;      // ir_search at 1/eta
  double ir_8eta = 0.0;     // ir_search at 1/(8 eta)
  double exo_lower = 0.0;   // exo_sup_q lower
  double exo_upper = 0.0;   // per-q upper at the best q
  std::vector<double> best_q;
  std::vector<std::size_t> resolutions;
  std::vector<double> dec_4eta;     // dec_hull at 1/(4 eta)
  std::vector<double> dec_4_over;   // dec_hull at 4/eta
  std::vector<double> dec_8eta;     // dec_hull at 1/(8 eta)
  std::vector<double> slack;        // max(0, exo_lower - dec_8eta)
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  std::vector<EquivalenceCheck> checks;
  bool rigorous_ok() const;
  bool convergence_ok() const;
};

/// Tiny instances only: |Pi| <= 3, |class| <= 3, |Z| <= 4.
EquivalenceReport verify_equivalence(const ModelClass& cls, const EquivalenceBudget& budget);
nlohmann::json to_json(const EquivalenceReport& report);

}  // namespace decx
