#include "decx/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decx/error.hpp"
#include "decx/rng.hpp"

namespace decx {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Shared round mechanics: adversary move, sampling, regret bookkeeping.
struct Round {
  std::size_t model = 0;
  std::size_t pi = 0;
  std::size_t z = 0;
};

Round play(const ModelClass& cls, const Adversary& adversary, std::size_t t, std::span<const double> p,
           std::uint64_t seed, StepRecord& rec) {
  Round r;
  r.model = adversary.choose(cls, t, p, seed);
  const Model& m = cls[r.model];
  r.pi = sample_categorical(p, CounterRng(seed, kStreamDecision).uniform_at(t));
  r.z = sample_categorical(m.row(r.pi), CounterRng(seed, kStreamOutcome).uniform_at(t));

  const std::size_t na = cls.num_decisions();
  rec.t = t;
  rec.p.assign(p.begin(), p.end());
  rec.pi = r.pi;
  rec.z = r.z;
  rec.model = r.model;
  rec.reward = cls.space().reward(r.z);
  double played = 0.0;
  for (std::size_t pi = 0; pi < na; ++pi) played += p[pi] * m.mean_reward(pi);
  rec.regret_increments.resize(na);
  for (std::size_t ps = 0; ps < na; ++ps) rec.regret_increments[ps] = m.mean_reward(ps) - played;
  rec.realized_rewards.resize(na);
  const CounterRng realized(seed, kStreamRealized);
  for (std::size_t pi = 0; pi < na; ++pi) {
    if (pi == r.pi) {
      rec.realized_rewards[pi] = rec.reward;
      continue;
    }
    const double u = realized.uniform_at(static_cast<std::uint64_t>(t) * na + pi);
    rec.realized_rewards[pi] = cls.space().reward(sample_categorical(m.row(pi), u));
  }
  return r;
}

void check_run(const ModelClass& cls, const Adversary& adversary, std::size_t horizon, double eta) {
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  if (horizon == 0) throw ValidationError("horizon T must be >= 1");
  (void)cls;
  adversary.check(cls, horizon);
}

}  // namespace

LearnerState LearnerState::fresh(std::size_t num_decisions, double eta, std::uint64_t seed) {
  LearnerState s;
  s.log_weights.assign(num_decisions, 0.0);
  s.eta = eta;
  s.seed = seed;
  return s;
}

std::vector<double> LearnerState::q() const {
  const double hi = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> out(log_weights.size());
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp(log_weights[i] - hi);
    s += out[i];
  }
  for (double& x : out) x /= s;
  return out;
}

LearnerState exp_weights_update(LearnerState state, std::span<const double> fhat) {
  if (fhat.size() != state.log_weights.size()) throw ValidationError("estimator has the wrong dimension");
  for (double f : fhat)
    if (!std::isfinite(f)) throw ValidationError("non-finite reward estimate");
  for (std::size_t i = 0; i < fhat.size(); ++i) state.log_weights[i] += state.eta * fhat[i];
  ++state.round;
  return state;
}

std::vector<StepRecord> exo_plus_run(const ModelClass& cls, const Adversary& adversary, std::size_t horizon,
                                     double eta, const RunOptions& opts) {
  check_run(cls, adversary, horizon, eta);
  const std::size_t na = cls.num_decisions();
  LearnerState state = LearnerState::fresh(na, eta, opts.seed);
  ExoOptions exo = opts.exo;
  std::vector<StepRecord> records;
  records.reserve(horizon);
  for (std::size_t t = 1; t <= horizon; ++t) {
    StepRecord rec;
    rec.q = state.q();
    const ExoSolution sol = exo_solve(cls, rec.q, eta, exo);
    exo.warm_dual = sol.dual;
    const Round r = play(cls, adversary, t, sol.p.probs(), opts.seed, rec);
    rec.solver_upper = sol.upper;
    rec.solver_lower = sol.lower;
    rec.solver_converged = sol.converged;
    rec.solver_saturated = sol.saturated;
    rec.revealed_gamma = -INFINITY;
    for (std::size_t ps = 0; ps < na; ++ps)
      rec.revealed_gamma = std::max(
          rec.revealed_gamma, gamma_objective(rec.q, eta, rec.p, sol.g, ps, cls[r.model]).value);
    rec.fhat.resize(na);
    for (std::size_t tp = 0; tp < na; ++tp) rec.fhat[tp] = sol.g(tp, r.pi, r.z) / rec.p[r.pi];
    state.last_p = rec.p;
    state.last_q = rec.q;
    state = exp_weights_update(std::move(state), rec.fhat);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<StepRecord> exp3_run(const ModelClass& cls, const Adversary& adversary, std::size_t horizon,
                                 double eta, const RunOptions& opts) {
  check_run(cls, adversary, horizon, eta);
  const std::size_t na = cls.num_decisions();
  const double mix =
      opts.exploration > 0.0 ? opts.exploration : std::min(0.5, eta * static_cast<double>(na));
  if (mix > 1.0) throw ValidationError("EXP3 exploration must be <= 1");
  LearnerState state = LearnerState::fresh(na, eta, opts.seed);
  std::vector<StepRecord> records;
  records.reserve(horizon);
  for (std::size_t t = 1; t <= horizon; ++t) {
    StepRecord rec;
    rec.q = state.q();
    std::vector<double> p(na);
    for (std::size_t i = 0; i < na; ++i) p[i] = (1.0 - mix) * rec.q[i] + mix / static_cast<double>(na);
    const Round r = play(cls, adversary, t, p, opts.seed, rec);
    rec.solver_upper = kNaN;
    rec.solver_lower = kNaN;
    rec.revealed_gamma = kNaN;
    rec.fhat.assign(na, 0.0);
    rec.fhat[r.pi] = rec.reward / p[r.pi];
    state.last_p = rec.p;
    state.last_q = rec.q;
    state = exp_weights_update(std::move(state), rec.fhat);
    records.push_back(std::move(rec));
  }
  return records;
}

double default_eta(std::size_t num_decisions, std::size_t horizon, double delta) {
  if (num_decisions == 0 || horizon == 0 || !(delta > 0.0)) throw ValidationError("default eta needs |Pi|, T, delta > 0");
  const double a = static_cast<double>(num_decisions);
  return std::sqrt(std::log(a / delta) / (4.0 * a * static_cast<double>(horizon)));
}

}  // namespace decx
