#pragma once

// Decision-Estimation Coefficient: plain, sup-over-reference and localized
// variants, a finite grid approximation of the convex hull, and the
// constants and closed forms used by the lower bounds.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "decx/core.hpp"
#include "decx/matrix_game.hpp"

namespace decx {

/// c[M][pi] = f^M(pi_M) - f^M(pi) - gamma * H^2(M(pi), ref(pi)).
struct GapMatrix {
  Matrix entries;
  double gamma = 0.0;
  std::string reference_label;
  /// Class indices of the rows (the localized subset, in class order).
  std::vector<std::size_t> members;
};

struct DecResult {
  double value = 0.0;
  FiniteDistribution p_star = FiniteDistribution::uniform(1);
  /// Class index of the maximizing model against p_star.
  std::size_t worst_model = 0;
  double duality_gap = 0.0;
  /// Class index of the reference (the maximizing one for the sup variant).
  std::size_t reference = 0;
  std::string reference_label;
  /// Number of models in the (localized) class for the chosen reference.
  std::size_t class_size = 0;
};

struct LowerBoundConstants {
  /// max likelihood ratio over model pairs/decisions/outcomes, then max with e.
  double v_of_class = 0.0;
  /// 512 * log(min(T, V)).
  double c_of_t = 0.0;
  std::size_t horizon = 0;

  double eps_gamma(double gamma) const { return gamma / (4.0 * c_of_t * static_cast<double>(horizon)); }
};

GapMatrix gap_matrix(const ModelClass& cls, const Model& reference, double gamma,
                     std::optional<double> eps = std::nullopt);

/// dec_gamma(cls, reference), optionally over the localized class
/// {M : f^M(pi_M) <= f^ref(pi_ref) + eps}.
DecResult dec_value(const ModelClass& cls, double gamma, const Model& reference,
                    std::optional<double> eps = std::nullopt);

/// sup over references drawn from the class itself. OpenMP over
/// references; ties go to the lowest reference index.
DecResult dec_value_sup(const ModelClass& cls, double gamma,
                        std::optional<double> eps = std::nullopt);
/// Serial reference implementation of dec_value_sup.
DecResult dec_value_sup_serial(const ModelClass& cls, double gamma,
                               std::optional<double> eps = std::nullopt);

/// Collapsed mixtures over the weight grid with resolution r, in
/// simplex_grid order; vertices keep their labels.
ModelClass hull_grid(const ModelClass& cls, std::size_t resolution,
                     std::uint64_t guard = 1'000'000);

/// sup-reference DEC over hull_grid(cls, r) together with the r -> 2r
/// refinement delta.
struct HullDecReport {
  DecResult at_r;
  std::size_t resolution = 0;
  std::optional<DecResult> at_2r;
  double refinement_delta = 0.0;
};
HullDecReport dec_hull(const ModelClass& cls, double gamma, std::size_t resolution,
                       std::optional<double> eps = std::nullopt, bool refine = false);

/// Largest singleton likelihood ratio over model pairs, decisions and
/// outcomes (0/0 = 1, x/0 = +inf), max with e.
double likelihood_ratio_bound(const ModelClass& cls);
LowerBoundConstants lower_bound_constants(const ModelClass& cls, std::size_t horizon);

/// alpha/2 - gamma * (beta/N + delta).
double hard_family_bound(double alpha, double beta, double delta, std::size_t n, double gamma);

/// Least-squares slope of -log(dec) against log(gamma).
double decay_exponent(std::span<const std::pair<double, double>> points);

}  // namespace decx
