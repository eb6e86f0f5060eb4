#include "decx/dec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "decx/divergences.hpp"
#include "decx/error.hpp"
#include "decx/simplex.hpp"

namespace decx {

namespace {

void check_compatible(const ModelClass& cls, const Model& reference) {
  if (!(reference.space() == cls.space()) || reference.num_decisions() != cls.num_decisions())
    throw ValidationError("reference model does not share (decisions, outcomes) with the class");
}

// Keeps the first result among equal values so merges are order-stable.
bool better(const DecResult& a, const DecResult& b) { return a.value > b.value; }

}  // namespace

GapMatrix gap_matrix(const ModelClass& cls, const Model& reference, double gamma,
                     std::optional<double> eps) {
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
  check_compatible(cls, reference);
  GapMatrix gm;
  gm.gamma = gamma;
  gm.reference_label = reference.label();
  const double ref_opt = reference.opt_value();
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (eps && cls[i].opt_value() > ref_opt + *eps) continue;
    gm.members.push_back(i);
  }
  if (gm.members.empty()) throw ValidationError("localized class is empty");
  const std::size_t na = cls.num_decisions();
  gm.entries = Matrix(gm.members.size(), na);
  for (std::size_t r = 0; r < gm.members.size(); ++r) {
    const Model& m = cls[gm.members[r]];
    for (std::size_t pi = 0; pi < na; ++pi) {
      gm.entries(r, pi) =
          m.opt_value() - m.mean_reward(pi) - gamma * hellinger_sq(m.row(pi), reference.row(pi));
    }
  }
  return gm;
}

DecResult dec_value(const ModelClass& cls, double gamma, const Model& reference,
                    std::optional<double> eps) {
  const GapMatrix gm = gap_matrix(cls, reference, gamma, eps);
  const GameSolution sol = solve_matrix_game(gm.entries);
  DecResult res;
  res.value = sol.value;
  res.p_star = FiniteDistribution::normalized(sol.col_strategy);
  res.worst_model = gm.members[sol.best_response_row];
  res.duality_gap = sol.duality_gap;
  res.reference_label = reference.label();
  res.class_size = gm.members.size();
  return res;
}

DecResult dec_value_sup_serial(const ModelClass& cls, double gamma, std::optional<double> eps) {
  DecResult best;
  bool have = false;
  for (std::size_t r = 0; r < cls.size(); ++r) {
    DecResult cur = dec_value(cls, gamma, cls[r], eps);
    cur.reference = r;
    if (!have || better(cur, best)) {
      best = std::move(cur);
      have = true;
    }
  }
  return best;
}

DecResult dec_value_sup(const ModelClass& cls, double gamma, std::optional<double> eps) {
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
  const auto n = static_cast<std::ptrdiff_t>(cls.size());
  std::vector<DecResult> per_ref(cls.size());
  std::vector<std::string> errors(cls.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    try {
      per_ref[r] = dec_value(cls, gamma, cls[r], eps);
      per_ref[r].reference = static_cast<std::size_t>(r);
    } catch (const std::exception& e) {
      errors[r] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw SolverError(e, INFINITY);
  std::size_t arg = 0;
  for (std::size_t r = 1; r < per_ref.size(); ++r)
    if (better(per_ref[r], per_ref[arg])) arg = r;
  return per_ref[arg];
}

ModelClass hull_grid(const ModelClass& cls, std::size_t resolution, std::uint64_t guard) {
  if (resolution == 0) throw ValidationError("hull resolution must be >= 1");
  const auto grid = simplex_grid(cls.size(), resolution, guard);
  std::vector<Model> models;
  models.reserve(grid.size());
  const double r = static_cast<double>(resolution);
  for (const auto& point : grid) {
    std::size_t nonzero = 0;
    std::size_t vertex = 0;
    std::vector<double> w(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) {
      w[i] = point[i] / r;
      if (point[i] != 0) {
        ++nonzero;
        vertex = i;
      }
    }
    if (nonzero == 1) {
      models.push_back(cls[vertex]);
      continue;
    }
    std::ostringstream label;
    label << "mix[";
    for (std::size_t i = 0; i < point.size(); ++i) label << (i ? "," : "") << point[i];
    label << "]/" << resolution;
    models.push_back(collapse_mixture(cls, MixtureWeights{FiniteDistribution::normalized(w)}, label.str()));
  }
  return ModelClass(std::move(models));
}

HullDecReport dec_hull(const ModelClass& cls, double gamma, std::size_t resolution,
                       std::optional<double> eps, bool refine) {
  HullDecReport rep;
  rep.resolution = resolution;
  rep.at_r = dec_value_sup(hull_grid(cls, resolution), gamma, eps);
  if (refine) {
    rep.at_2r = dec_value_sup(hull_grid(cls, 2 * resolution), gamma, eps);
    rep.refinement_delta = rep.at_2r->value - rep.at_r.value;
  }
  return rep;
}

double likelihood_ratio_bound(const ModelClass& cls) {
  double v = 0.0;
  for (std::size_t a = 0; a < cls.size(); ++a) {
    for (std::size_t b = 0; b < cls.size(); ++b) {
      if (a == b) continue;
      for (std::size_t pi = 0; pi < cls.num_decisions(); ++pi) {
        for (std::size_t z = 0; z < cls.num_outcomes(); ++z) {
          const double num = cls[a].prob(pi, z);
          const double den = cls[b].prob(pi, z);
          double ratio;
          if (den == 0.0) {
            ratio = num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
          } else {
            ratio = num / den;
          }
          v = std::max(v, ratio);
        }
      }
    }
  }
  return std::max(v, std::numbers::e);
}

LowerBoundConstants lower_bound_constants(const ModelClass& cls, std::size_t horizon) {
  if (horizon < 2) throw ValidationError("horizon T must be >= 2");
  LowerBoundConstants c;
  c.horizon = horizon;
  c.v_of_class = likelihood_ratio_bound(cls);
  c.c_of_t = 512.0 * std::log(std::min(static_cast<double>(horizon), c.v_of_class));
  return c;
}

double hard_family_bound(double alpha, double beta, double delta, std::size_t n, double gamma) {
  if (alpha < 0.0 || beta < 0.0 || delta < 0.0) throw ValidationError("alpha, beta, delta must be >= 0");
  if (n < 2) throw ValidationError("family size N must be >= 2");
  return alpha / 2.0 - gamma * (beta / static_cast<double>(n) + delta);
}

double decay_exponent(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw ValidationError("decay exponent needs at least 3 points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [g, d] : points) {
    if (!(g > 0.0) || !(d > 0.0)) throw ValidationError("gamma and dec values must be positive");
    sx += std::log(g);
    sy += -std::log(d);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [g, d] : points) {
    const double dx = std::log(g) - mx;
    sxy += dx * (-std::log(d) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw ValidationError("decay exponent needs distinct gamma values");
  return sxy / sxx;
}

}  // namespace decx
