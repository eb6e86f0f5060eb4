#pragma once

// Shared data model: finite outcome spaces, tabular models, model classes,
// mixtures and priors over (model, decision) pairs.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace decx {

/// Tolerance applied to probability vectors read from user input.
inline constexpr double kIngestTolerance = 1e-6;
/// Tolerance for stored normalization invariants.
inline constexpr double kStoredTolerance = 1e-9;

/// Reward grid R times observation labels O, enumerated as
/// z = reward_index * |O| + observation_index.
class OutcomeSpace {
 public:
  OutcomeSpace(std::vector<double> rewards, std::vector<std::string> observations);

  std::size_t size() const { return rewards_.size() * observations_.size(); }
  std::size_t num_rewards() const { return rewards_.size(); }
  std::size_t num_observations() const { return observations_.size(); }

  const std::vector<double>& rewards() const { return rewards_; }
  const std::vector<std::string>& observations() const { return observations_; }

  std::size_t index(std::size_t reward_index, std::size_t observation_index) const;
  std::size_t reward_index(std::size_t z) const { return z / observations_.size(); }
  std::size_t observation_index(std::size_t z) const { return z % observations_.size(); }
  double reward(std::size_t z) const { return rewards_[reward_index(z)]; }
  const std::string& observation(std::size_t z) const {
    return observations_[observation_index(z)];
  }

  /// Smallest gap between consecutive reward values (1 for a single value).
  double resolution() const;

  bool operator==(const OutcomeSpace&) const = default;

 private:
  std::vector<double> rewards_;
  std::vector<std::string> observations_;
};

/// Probability vector over an enumerated support.
class FiniteDistribution {
 public:
  /// Clamps entries in [-tol, 0) to zero and renormalizes; throws
  /// ValidationError if an entry is below -tol or the sum is off by more
  /// than tol.
  static FiniteDistribution from_weights(std::vector<double> weights,
                                         double tol = kIngestTolerance);
  /// Normalizes arbitrary nonnegative weights (sum must be positive).
  static FiniteDistribution normalized(std::vector<double> weights);
  static FiniteDistribution uniform(std::size_t n);
  static FiniteDistribution point_mass(std::size_t n, std::size_t at);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }
  const std::vector<double>& vector() const { return probs_; }

  bool operator==(const FiniteDistribution&) const = default;

 private:
  explicit FiniteDistribution(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

/// Conditional law decision -> Delta(Z), with derived mean rewards and the
/// optimal decision (lowest index among maximizers).
class Model {
 public:
  Model(OutcomeSpace space, std::vector<FiniteDistribution> rows, std::string label);

  const OutcomeSpace& space() const { return space_; }
  std::size_t num_decisions() const { return num_decisions_; }
  std::size_t num_outcomes() const { return space_.size(); }
  const std::string& label() const { return label_; }

  std::span<const double> row(std::size_t decision) const {
    return {table_.data() + decision * num_outcomes(), num_outcomes()};
  }
  double prob(std::size_t decision, std::size_t z) const {
    return table_[decision * num_outcomes() + z];
  }
  const std::vector<double>& mean_rewards() const { return mean_rewards_; }
  double mean_reward(std::size_t decision) const { return mean_rewards_[decision]; }
  std::size_t opt_decision() const { return opt_decision_; }
  double opt_value() const { return mean_rewards_[opt_decision_]; }

 private:
  OutcomeSpace space_;
  std::size_t num_decisions_;
  std::vector<double> table_;
  std::vector<double> mean_rewards_;
  std::size_t opt_decision_ = 0;
  std::string label_;
};

/// Nonempty list of models over a shared (decisions, outcome space).
class ModelClass {
 public:
  explicit ModelClass(std::vector<Model> models);

  const OutcomeSpace& space() const { return models_.front().space(); }
  std::size_t num_decisions() const { return models_.front().num_decisions(); }
  std::size_t num_outcomes() const { return space().size(); }
  std::size_t size() const { return models_.size(); }
  const Model& operator[](std::size_t i) const { return models_[i]; }
  const std::vector<Model>& models() const { return models_; }

  /// Index of the first model with the given label; throws if absent.
  std::size_t find(const std::string& label) const;

 private:
  std::vector<Model> models_;
};

/// Finitely supported mixture over the members of a ModelClass.
struct MixtureWeights {
  FiniteDistribution weights;
};

/// Distribution over (model index, decision index) pairs, row-major.
class Prior {
 public:
  Prior(std::size_t num_models, std::size_t num_decisions, std::vector<double> mass);
  static Prior uniform(std::size_t num_models, std::size_t num_decisions);
  static Prior point_mass(std::size_t num_models, std::size_t num_decisions,
                          std::size_t model, std::size_t decision);

  std::size_t num_models() const { return num_models_; }
  std::size_t num_decisions() const { return num_decisions_; }
  double operator()(std::size_t model, std::size_t decision) const {
    return mass_[model * num_decisions_ + decision];
  }
  std::span<const double> mass() const { return mass_; }

 private:
  std::size_t num_models_;
  std::size_t num_decisions_;
  std::vector<double> mass_;
};

/// Builds a model from raw row vectors (one per decision, each of length |Z|).
Model make_model(const OutcomeSpace& space, const std::vector<std::vector<double>>& rows,
                 std::string label);

/// The model whose row at each decision is the nu-weighted average of the
/// member rows.
Model collapse_mixture(const ModelClass& cls, const MixtureWeights& nu,
                       std::string label = {});

/// (argmax decision, value), lowest index on ties.
std::pair<std::size_t, double> optimal_decision(const Model& model);

ModelClass parse_model_class(const nlohmann::json& doc);
nlohmann::json to_json(const ModelClass& cls);
ModelClass load_model_class(const std::string& path);

}  // namespace decx
