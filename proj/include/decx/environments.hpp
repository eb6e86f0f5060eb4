#pragma once

// Builders for the example model classes (bandits, linear bandits, the
// tabular-MDP hard family) and the three adversary kinds.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "decx/core.hpp"

namespace decx {

/// (alpha, beta, delta)-family witness: for each covered model M,
///   f^M(pi_M) - f^M(pi) >= alpha (1 - u^M(pi)),
///   H^2(M(pi), ref(pi)) <= beta v^M(pi) + delta,
/// with sum_M u^M(pi) <= N/2 and sum_M v^M(pi) <= 1.
struct FamilyCertificate {
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  std::size_t n = 0;
  std::size_t reference = 0;
  /// Class indices covered by the witness tables.
  std::vector<std::size_t> members;
  /// u[i][pi], v[i][pi] for members[i].
  std::vector<std::vector<double>> u;
  std::vector<std::vector<double>> v;
};

struct CertificateCheck {
  bool ok = true;
  /// Largest violation of each property (<= 0 when it holds).
  double regret_violation = 0.0;
  double information_violation = 0.0;
  double u_sum_violation = 0.0;
  double v_sum_violation = 0.0;
};

/// Entrywise check with absolute tolerance tol.
CertificateCheck check_certificate(const ModelClass& cls, const FamilyCertificate& cert,
                                   double tol = 1e-12);

struct BuiltFamily {
  ModelClass cls;
  std::optional<FamilyCertificate> certificate;
};

/// All Bernoulli-arm models with means in {0, 1/m, ..., 1}^A.
BuiltFamily build_bandit_grid(std::size_t arms, std::size_t m);
/// Reference (all arms Ber(1/2)) followed by M_i with arm i at Ber(1/2 + delta).
BuiltFamily build_bandit_hard(std::size_t arms, double delta_gap);

/// One Bernoulli model per theta with mean <theta, action>.
ModelClass build_linear(const std::vector<std::vector<double>>& actions,
                        const std::vector<std::vector<double>>& thetas);

struct MdpShape {
  std::size_t states = 2;
  std::size_t actions = 2;
  std::size_t horizon = 1;
  std::size_t mixtures = 1;
  std::size_t effective_depth() const;
};

/// Induced outcome laws of the mixture-of-chains construction: decisions
/// are action sequences of length K = min(S-1, K, H), outcomes are
/// (reward bit, exit layer). Model 0 is the reference.
BuiltFamily build_mdp_hard(const MdpShape& shape, double delta_gap);

enum class AdversaryKind { kStochasticMixture, kOblivious, kAdaptiveBestResponse };

class Adversary {
 public:
  static Adversary stochastic_mixture(std::vector<double> weights);
  static Adversary oblivious(std::vector<std::size_t> sequence);
  static Adversary adaptive_best_response();

  AdversaryKind kind() const { return kind_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::size_t>& sequence() const { return sequence_; }

  /// Throws ValidationError when the adversary does not fit the class or
  /// an oblivious sequence is shorter than the horizon.
  void check(const ModelClass& cls, std::size_t horizon) const;

  /// Model index for round t (1-based). Stochastic draws are keyed by
  /// (seed, round); p is the learner's published sampling distribution.
  std::size_t choose(const ModelClass& cls, std::size_t t, std::span<const double> p,
                     std::uint64_t seed) const;

 private:
  AdversaryKind kind_ = AdversaryKind::kAdaptiveBestResponse;
  std::vector<double> weights_;
  std::vector<std::size_t> sequence_;
};

/// {"kind":"stochastic_mixture","weights":[...]} | {"kind":"oblivious","sequence":[...]}
/// | {"kind":"adaptive_best_response"}. "weights":"uniform" is accepted.
Adversary make_adversary(const ModelClass& cls, const nlohmann::json& spec);
std::string to_string(AdversaryKind kind);

/// RNG stream ids shared by the simulators.
inline constexpr std::uint64_t kStreamAdversary = 0xAD0000;
inline constexpr std::uint64_t kStreamDecision = 0xDE0000;
inline constexpr std::uint64_t kStreamOutcome = 0x0C0000;
inline constexpr std::uint64_t kStreamRealized = 0x4E0000;

}  // namespace decx
