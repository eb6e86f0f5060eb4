#include "decx/environments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "decx/divergences.hpp"
#include "decx/error.hpp"
#include "decx/rng.hpp"

namespace decx {

namespace {

const OutcomeSpace& bernoulli_space() {
  static const OutcomeSpace space({0.0, 1.0}, {"-"});
  return space;
}

Model bernoulli_model(const std::vector<double>& means, std::string label) {
  std::vector<std::vector<double>> rows;
  rows.reserve(means.size());
  for (double m : means) rows.push_back({1.0 - m, m});
  return make_model(bernoulli_space(), rows, std::move(label));
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

CertificateCheck check_certificate(const ModelClass& cls, const FamilyCertificate& cert, double tol) {
  const std::size_t na = cls.num_decisions();
  if (cert.reference >= cls.size()) throw ValidationError("certificate reference out of range");
  if (cert.u.size() != cert.members.size() || cert.v.size() != cert.members.size())
    throw ValidationError("certificate tables do not match its member list");
  CertificateCheck out;
  out.regret_violation = -INFINITY;
  out.information_violation = -INFINITY;
  const Model& ref = cls[cert.reference];
  std::vector<double> usum(na, 0.0), vsum(na, 0.0);
  for (std::size_t i = 0; i < cert.members.size(); ++i) {
    const Model& m = cls[cert.members[i]];
    for (std::size_t pi = 0; pi < na; ++pi) {
      const double u = cert.u[i][pi], v = cert.v[i][pi];
      usum[pi] += u;
      vsum[pi] += v;
      const double reg = m.opt_value() - m.mean_reward(pi);
      out.regret_violation = std::max(out.regret_violation, cert.alpha * (1.0 - u) - reg);
      const double info = hellinger_sq(m.row(pi), ref.row(pi));
      out.information_violation = std::max(out.information_violation, info - cert.beta * v - cert.delta);
    }
  }
  out.u_sum_violation = -INFINITY;
  out.v_sum_violation = -INFINITY;
  for (std::size_t pi = 0; pi < na; ++pi) {
    out.u_sum_violation = std::max(out.u_sum_violation, usum[pi] - static_cast<double>(cert.n) / 2.0);
    out.v_sum_violation = std::max(out.v_sum_violation, vsum[pi] - 1.0);
  }
  out.ok = out.regret_violation <= tol && out.information_violation <= tol && out.u_sum_violation <= tol &&
           out.v_sum_violation <= tol;
  return out;
}

BuiltFamily build_bandit_grid(std::size_t arms, std::size_t m) {
  if (arms < 2) throw ValidationError("bandit needs A >= 2");
  if (m < 1) throw ValidationError("grid resolution m must be >= 1");
  double count = std::pow(static_cast<double>(m + 1), static_cast<double>(arms));
  if (count > 1e5) throw ValidationError("bandit grid exceeds 1e5 models");
  std::vector<Model> models;
  std::vector<std::size_t> digits(arms, 0);
  for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
    std::vector<double> means(arms);
    std::string label = "grid(";
    for (std::size_t a = 0; a < arms; ++a) {
      means[a] = static_cast<double>(digits[a]) / static_cast<double>(m);
      label += (a ? "," : "") + std::to_string(digits[a]);
    }
    models.push_back(bernoulli_model(means, label + ")/" + std::to_string(m)));
    for (std::size_t a = arms; a-- > 0;) {
      if (++digits[a] <= m) break;
      digits[a] = 0;
    }
  }
  return {ModelClass(std::move(models)), std::nullopt};
}

BuiltFamily build_bandit_hard(std::size_t arms, double delta_gap) {
  if (arms < 2) throw ValidationError("bandit needs A >= 2");
  if (!(delta_gap > 0.0 && delta_gap < 0.5)) throw ValidationError("hard family needs Delta in (0, 1/2)");
  std::vector<Model> models;
  models.push_back(bernoulli_model(std::vector<double>(arms, 0.5), "ref"));
  FamilyCertificate cert;
  cert.alpha = delta_gap;
  cert.beta = 3.0 * delta_gap * delta_gap;
  cert.n = arms;
  cert.reference = 0;
  for (std::size_t i = 0; i < arms; ++i) {
    std::vector<double> means(arms, 0.5);
    means[i] = 0.5 + delta_gap;
    models.push_back(bernoulli_model(means, "arm" + std::to_string(i)));
    cert.members.push_back(i + 1);
    std::vector<double> ind(arms, 0.0);
    ind[i] = 1.0;
    cert.u.push_back(ind);
    cert.v.push_back(ind);
  }
  return {ModelClass(std::move(models)), std::move(cert)};
}

ModelClass build_linear(const std::vector<std::vector<double>>& actions,
                        const std::vector<std::vector<double>>& thetas) {
  if (actions.empty() || thetas.empty()) throw ValidationError("linear class needs actions and thetas");
  const std::size_t d = actions.front().size();
  std::vector<Model> models;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    if (thetas[k].size() != d) throw ValidationError("theta dimension mismatch");
    std::vector<double> means;
    std::string label = "theta(";
    for (std::size_t i = 0; i < d; ++i) label += (i ? "," : "") + fmt(thetas[k][i]);
    for (const auto& a : actions) {
      if (a.size() != d) throw ValidationError("action dimension mismatch");
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += thetas[k][i] * a[i];
      if (s < -1e-12 || s > 1.0 + 1e-12) throw ValidationError("linear mean outside [0,1]");
      means.push_back(std::clamp(s, 0.0, 1.0));
    }
    models.push_back(bernoulli_model(means, label + ")"));
  }
  return ModelClass(std::move(models));
}

std::size_t MdpShape::effective_depth() const { return std::min({states - 1, mixtures, horizon}); }

BuiltFamily build_mdp_hard(const MdpShape& shape, double delta_gap) {
  if (shape.states < 2 || shape.actions < 2) throw ValidationError("MDP family needs S >= 2, A >= 2");
  const std::size_t kbar = shape.effective_depth();
  if (kbar < 1) throw ValidationError("min(S-1, K, H) must be >= 1");
  if (!(delta_gap > 0.0 && delta_gap < 0.5)) throw ValidationError("hard family needs Delta in (0, 1/2)");
  const double npol = std::pow(static_cast<double>(shape.actions), static_cast<double>(kbar));
  if (npol + 1.0 > 1e4) throw ValidationError("A^K + 1 exceeds 1e4 models");
  const std::size_t na = static_cast<std::size_t>(npol);

  std::vector<std::string> exits;
  for (std::size_t h = 1; h <= kbar; ++h) exits.push_back("exit" + std::to_string(h));
  exits.push_back("end");
  const OutcomeSpace space({0.0, 1.0}, exits);
  // Exit at layer h w.p. 1/(K-h+1) given survival: uniform 1/K over the
  // first K labels, nothing left for "end".
  std::vector<double> traj(kbar + 1, 0.0);
  double alive = 1.0;
  for (std::size_t h = 1; h <= kbar; ++h) {
    const double leave = alive / static_cast<double>(kbar - h + 1);
    traj[h - 1] = leave;
    alive -= leave;
  }
  traj[kbar] = std::max(alive, 0.0);

  const double gap = delta_gap / static_cast<double>(kbar);
  auto model = [&](std::optional<std::size_t> target, std::string label) {
    std::vector<std::vector<double>> rows(na, std::vector<double>(space.size(), 0.0));
    for (std::size_t b = 0; b < na; ++b) {
      const double mean = 0.5 + ((target && *target == b) ? gap : 0.0);
      for (std::size_t o = 0; o <= kbar; ++o) {
        rows[b][space.index(0, o)] = (1.0 - mean) * traj[o];
        rows[b][space.index(1, o)] = mean * traj[o];
      }
    }
    return make_model(space, rows, std::move(label));
  };
  auto seq_label = [&](std::size_t b) {
    std::string s = "a";
    std::vector<std::size_t> d(kbar);
    for (std::size_t i = kbar; i-- > 0;) {
      d[i] = b % shape.actions;
      b /= shape.actions;
    }
    for (std::size_t i = 0; i < kbar; ++i) s += (i ? "." : "") + std::to_string(d[i]);
    return s;
  };

  std::vector<Model> models;
  models.push_back(model(std::nullopt, "ref"));
  FamilyCertificate cert;
  cert.alpha = gap;
  cert.beta = 3.0 * gap * gap;
  cert.n = na + 1;
  cert.reference = 0;
  cert.members.push_back(0);
  cert.u.push_back(std::vector<double>(na, 1.0));
  cert.v.push_back(std::vector<double>(na, 0.0));
  for (std::size_t a = 0; a < na; ++a) {
    models.push_back(model(a, seq_label(a)));
    cert.members.push_back(a + 1);
    std::vector<double> ind(na, 0.0);
    ind[a] = 1.0;
    cert.u.push_back(ind);
    cert.v.push_back(ind);
  }
  return {ModelClass(std::move(models)), std::move(cert)};
}

Adversary Adversary::stochastic_mixture(std::vector<double> weights) {
  Adversary a;
  a.kind_ = AdversaryKind::kStochasticMixture;
  a.weights_ = FiniteDistribution::from_weights(std::move(weights)).vector();
  return a;
}

Adversary Adversary::oblivious(std::vector<std::size_t> sequence) {
  Adversary a;
  a.kind_ = AdversaryKind::kOblivious;
  a.sequence_ = std::move(sequence);
  return a;
}

Adversary Adversary::adaptive_best_response() { return Adversary{}; }

void Adversary::check(const ModelClass& cls, std::size_t horizon) const {
  switch (kind_) {
    case AdversaryKind::kStochasticMixture:
      if (weights_.size() != cls.size()) throw ValidationError("mixture weights do not match the class size");
      break;
    case AdversaryKind::kOblivious:
      if (sequence_.size() < horizon) throw ValidationError("oblivious sequence shorter than T");
      for (std::size_t i : sequence_)
        if (i >= cls.size()) throw ValidationError("oblivious sequence index out of range");
      break;
    case AdversaryKind::kAdaptiveBestResponse:
      break;
  }
}

std::size_t Adversary::choose(const ModelClass& cls, std::size_t t, std::span<const double> p,
                              std::uint64_t seed) const {
  switch (kind_) {
    case AdversaryKind::kStochasticMixture:
      return sample_categorical(weights_, CounterRng(seed, kStreamAdversary).uniform_at(t));
    case AdversaryKind::kOblivious:
      if (t == 0 || t > sequence_.size()) throw ValidationError("oblivious sequence shorter than T");
      return sequence_[t - 1];
    case AdversaryKind::kAdaptiveBestResponse:
      break;
  }
  std::size_t best = 0;
  double best_val = -INFINITY;
  for (std::size_t m = 0; m < cls.size(); ++m) {
    double v = 0.0;
    for (std::size_t pi = 0; pi < p.size(); ++pi) v += p[pi] * (cls[m].opt_value() - cls[m].mean_reward(pi));
    if (v > best_val) {
      best_val = v;
      best = m;
    }
  }
  return best;
}

Adversary make_adversary(const ModelClass& cls, const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("kind")) throw ValidationError("adversary spec needs a \"kind\"");
  const std::string kind = spec.at("kind").get<std::string>();
  try {
    if (kind == "stochastic_mixture") {
      std::vector<double> w;
      if (!spec.contains("weights") || (spec["weights"].is_string() && spec["weights"] == "uniform")) {
        w.assign(cls.size(), 1.0 / static_cast<double>(cls.size()));
      } else {
        w = spec.at("weights").get<std::vector<double>>();
      }
      Adversary a = Adversary::stochastic_mixture(std::move(w));
      a.check(cls, 0);
      return a;
    }
    if (kind == "oblivious") {
      Adversary a = Adversary::oblivious(spec.at("sequence").get<std::vector<std::size_t>>());
      a.check(cls, 0);
      return a;
    }
    if (kind == "adaptive_best_response") return Adversary::adaptive_best_response();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed adversary spec: ") + e.what());
  }
  throw ValidationError("unknown adversary kind: " + kind);
}

std::string to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::kStochasticMixture: return "stochastic_mixture";
    case AdversaryKind::kOblivious: return "oblivious";
    case AdversaryKind::kAdaptiveBestResponse: return "adaptive_best_response";
  }
  return "?";
}

}  // namespace decx
