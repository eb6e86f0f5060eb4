#pragma once

// Divergences between distributions on a shared finite support, and the
// Hellinger/MGF variational quantity sup_g {1 - E_P[e^g] E_Q[e^-g]}.

#include <optional>
#include <span>
#include <string>

#include "decx/core.hpp"

namespace decx {

enum class DivergenceKind { kHellingerSq, kKl, kTv };

DivergenceKind parse_divergence_kind(const std::string& name);
std::string to_string(DivergenceKind kind);

/// Squared Hellinger distance, KL (returns +inf without absolute
/// continuity) or total variation. Entries with p = q = 0 contribute 0.
double divergence(DivergenceKind kind, std::span<const double> p, std::span<const double> q);
double divergence(DivergenceKind kind, const FiniteDistribution& p, const FiniteDistribution& q);

double hellinger_sq(std::span<const double> p, std::span<const double> q);

/// Bhattacharyya coefficient sum_x sqrt(p_x q_x).
double bhattacharyya(std::span<const double> p, std::span<const double> q);

/// 1 - E_P[e^g] * E_Q[e^{-g}] for a test function g on the support.
double mgf_objective(std::span<const double> p, std::span<const double> q,
                     std::span<const double> g);

/// Without a clip: the exact supremum 1 - BC(P,Q)^2. With clip alpha: the
/// objective at g = clamp(log(q/p)/2, -alpha, alpha), where a zero density
/// is replaced by the ratio bound e^{-+2 alpha}; a lower bound on the
/// supremum over ||g||_inf <= alpha. Requires alpha >= 1.
double mgf_variational(std::span<const double> p, std::span<const double> q,
                       std::optional<double> clip = std::nullopt);
double mgf_variational(const FiniteDistribution& p, const FiniteDistribution& q,
                       std::optional<double> clip = std::nullopt);

}  // namespace decx
