#include "decx/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "decx/error.hpp"

namespace decx {

namespace {

void check_support(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size() || p.empty()) throw ValidationError("distributions must share a support");
}

}  // namespace

DivergenceKind parse_divergence_kind(const std::string& name) {
  if (name == "hellinger_sq" || name == "hellinger") return DivergenceKind::kHellingerSq;
  if (name == "kl") return DivergenceKind::kKl;
  if (name == "tv") return DivergenceKind::kTv;
  throw ValidationError("unknown divergence kind '" + name + "'");
}

std::string to_string(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::kHellingerSq: return "hellinger_sq";
    case DivergenceKind::kKl: return "kl";
    case DivergenceKind::kTv: return "tv";
  }
  return "?";
}

double hellinger_sq(std::span<const double> p, std::span<const double> q) {
  check_support(p, q);
  double h = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double d = std::sqrt(p[x]) - std::sqrt(q[x]);
    h += d * d;
  }
  return h;
}

double bhattacharyya(std::span<const double> p, std::span<const double> q) {
  check_support(p, q);
  double bc = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) bc += std::sqrt(p[x] * q[x]);
  return bc;
}

double divergence(DivergenceKind kind, std::span<const double> p, std::span<const double> q) {
  check_support(p, q);
  switch (kind) {
    case DivergenceKind::kHellingerSq:
      return hellinger_sq(p, q);
    case DivergenceKind::kKl: {
      double kl = 0.0;
      for (std::size_t x = 0; x < p.size(); ++x) {
        if (p[x] <= 0.0) continue;
        if (q[x] <= 0.0) return std::numeric_limits<double>::infinity();
        kl += p[x] * std::log(p[x] / q[x]);
      }
      return std::max(kl, 0.0);
    }
    case DivergenceKind::kTv: {
      double tv = 0.0;
      for (std::size_t x = 0; x < p.size(); ++x) tv += std::abs(p[x] - q[x]);
      return 0.5 * tv;
    }
  }
  return 0.0;
}

double divergence(DivergenceKind kind, const FiniteDistribution& p, const FiniteDistribution& q) {
  return divergence(kind, p.probs(), q.probs());
}

double mgf_objective(std::span<const double> p, std::span<const double> q,
                     std::span<const double> g) {
  check_support(p, q);
  if (g.size() != p.size()) throw ValidationError("test function must share the support");
  double ep = 0.0;
  double eq = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    ep += p[x] * std::exp(g[x]);
    eq += q[x] * std::exp(-g[x]);
  }
  return 1.0 - ep * eq;
}

double mgf_variational(std::span<const double> p, std::span<const double> q,
                       std::optional<double> clip) {
  check_support(p, q);
  if (!clip) {
    const double bc = bhattacharyya(p, q);
    return 1.0 - bc * bc;
  }
  const double alpha = *clip;
  if (!(alpha >= 1.0)) throw ValidationError("clip alpha must be >= 1");
  std::vector<double> g(p.size(), 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] <= 0.0 && q[x] <= 0.0) continue;
    double half_log_ratio;
    if (p[x] <= 0.0) {
      half_log_ratio = alpha;  // ratio capped at e^{2 alpha}
    } else if (q[x] <= 0.0) {
      half_log_ratio = -alpha;  // ratio floored at e^{-2 alpha}
    } else {
      half_log_ratio = 0.5 * std::log(q[x] / p[x]);
    }
    g[x] = std::clamp(half_log_ratio, -alpha, alpha);
  }
  return mgf_objective(p, q, g);
}

double mgf_variational(const FiniteDistribution& p, const FiniteDistribution& q,
                       std::optional<double> clip) {
  return mgf_variational(p.probs(), q.probs(), clip);
}

}  // namespace decx
