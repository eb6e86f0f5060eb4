#include "decx/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "decx/error.hpp"

namespace decx {

OutcomeSpace::OutcomeSpace(std::vector<double> rewards, std::vector<std::string> observations)
    : rewards_(std::move(rewards)), observations_(std::move(observations)) {
  if (rewards_.empty()) throw ValidationError("reward grid must be nonempty");
  if (observations_.empty()) throw ValidationError("observation set must be nonempty");
  for (std::size_t i = 0; i < rewards_.size(); ++i) {
    if (!(rewards_[i] >= 0.0 && rewards_[i] <= 1.0))
      throw ValidationError("reward grid value outside [0,1]");
    if (i > 0 && !(rewards_[i] > rewards_[i - 1]))
      throw ValidationError("reward grid must be strictly increasing");
  }
}

std::size_t OutcomeSpace::index(std::size_t reward_index, std::size_t observation_index) const {
  return reward_index * observations_.size() + observation_index;
}

double OutcomeSpace::resolution() const {
  double res = 1.0;
  for (std::size_t i = 1; i < rewards_.size(); ++i) res = std::min(res, rewards_[i] - rewards_[i - 1]);
  return res;
}

FiniteDistribution FiniteDistribution::from_weights(std::vector<double> weights, double tol) {
  if (weights.empty()) throw ValidationError("distribution must have positive support size");
  double sum = 0.0;
  for (double& w : weights) {
    if (!std::isfinite(w)) throw ValidationError("non-finite probability");
    if (w < -tol) throw ValidationError("negative probability");
    if (w < 0.0) w = 0.0;
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol) {
    std::ostringstream os;
    os << "probabilities sum to " << sum << ", outside tolerance " << tol;
    throw ValidationError(os.str());
  }
  for (double& w : weights) w /= sum;
  return FiniteDistribution(std::move(weights));
}

FiniteDistribution FiniteDistribution::normalized(std::vector<double> weights) {
  if (weights.empty()) throw ValidationError("distribution must have positive support size");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("weights must be finite and nonnegative");
    sum += w;
  }
  if (!(sum > 0.0)) throw ValidationError("weights sum to zero");
  for (double& w : weights) w /= sum;
  return FiniteDistribution(std::move(weights));
}

FiniteDistribution FiniteDistribution::uniform(std::size_t n) {
  if (n == 0) throw ValidationError("distribution must have positive support size");
  return FiniteDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiniteDistribution FiniteDistribution::point_mass(std::size_t n, std::size_t at) {
  if (at >= n) throw ValidationError("point mass index out of range");
  std::vector<double> p(n, 0.0);
  p[at] = 1.0;
  return FiniteDistribution(std::move(p));
}

Model::Model(OutcomeSpace space, std::vector<FiniteDistribution> rows, std::string label)
    : space_(std::move(space)), num_decisions_(rows.size()), label_(std::move(label)) {
  if (rows.empty()) throw ValidationError("model needs at least one decision");
  const std::size_t nz = space_.size();
  table_.reserve(num_decisions_ * nz);
  mean_rewards_.resize(num_decisions_);
  for (std::size_t pi = 0; pi < num_decisions_; ++pi) {
    if (rows[pi].size() != nz) throw ValidationError("row length does not match |Z|");
    double mean = 0.0;
    for (std::size_t z = 0; z < nz; ++z) {
      table_.push_back(rows[pi][z]);
      mean += rows[pi][z] * space_.reward(z);
    }
    mean_rewards_[pi] = std::clamp(mean, 0.0, 1.0);
  }
  opt_decision_ = static_cast<std::size_t>(
      std::max_element(mean_rewards_.begin(), mean_rewards_.end()) - mean_rewards_.begin());
}

ModelClass::ModelClass(std::vector<Model> models) : models_(std::move(models)) {
  if (models_.empty()) throw ValidationError("model class must be nonempty");
  const auto& first = models_.front();
  for (const auto& m : models_) {
    if (!(m.space() == first.space())) throw ValidationError("models must share the outcome space");
    if (m.num_decisions() != first.num_decisions())
      throw ValidationError("models must share the decision space");
  }
}

std::size_t ModelClass::find(const std::string& label) const {
  for (std::size_t i = 0; i < models_.size(); ++i)
    if (models_[i].label() == label) return i;
  throw ValidationError("no model labeled '" + label + "'");
}

Prior::Prior(std::size_t num_models, std::size_t num_decisions, std::vector<double> mass)
    : num_models_(num_models), num_decisions_(num_decisions), mass_(std::move(mass)) {
  if (mass_.size() != num_models_ * num_decisions_)
    throw ValidationError("prior shape does not match (models, decisions)");
  // from_weights enforces nonnegativity and total mass 1.
  mass_ = FiniteDistribution::from_weights(std::move(mass_)).vector();
}

Prior Prior::uniform(std::size_t num_models, std::size_t num_decisions) {
  const double w = 1.0 / static_cast<double>(num_models * num_decisions);
  return Prior(num_models, num_decisions, std::vector<double>(num_models * num_decisions, w));
}

Prior Prior::point_mass(std::size_t num_models, std::size_t num_decisions, std::size_t model,
                        std::size_t decision) {
  std::vector<double> mass(num_models * num_decisions, 0.0);
  mass.at(model * num_decisions + decision) = 1.0;
  return Prior(num_models, num_decisions, std::move(mass));
}

Model make_model(const OutcomeSpace& space, const std::vector<std::vector<double>>& rows,
                 std::string label) {
  std::vector<FiniteDistribution> dists;
  dists.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != space.size()) throw ValidationError("row length does not match |Z|");
    dists.push_back(FiniteDistribution::from_weights(row, kIngestTolerance));
  }
  return Model(space, std::move(dists), std::move(label));
}

Model collapse_mixture(const ModelClass& cls, const MixtureWeights& nu, std::string label) {
  if (nu.weights.size() != cls.size()) throw ValidationError("mixture weights do not match class size");
  const std::size_t na = cls.num_decisions();
  const std::size_t nz = cls.num_outcomes();
  std::vector<FiniteDistribution> rows;
  rows.reserve(na);
  for (std::size_t pi = 0; pi < na; ++pi) {
    std::vector<double> row(nz, 0.0);
    for (std::size_t i = 0; i < cls.size(); ++i) {
      const double w = nu.weights[i];
      if (w == 0.0) continue;
      const auto src = cls[i].row(pi);
      for (std::size_t z = 0; z < nz; ++z) row[z] += w * src[z];
    }
    rows.push_back(FiniteDistribution::normalized(std::move(row)));
  }
  if (label.empty()) {
    std::ostringstream os;
    os << "mix(";
    for (std::size_t i = 0; i < cls.size(); ++i) os << (i ? "," : "") << nu.weights[i];
    os << ")";
    label = os.str();
  }
  return Model(cls.space(), std::move(rows), std::move(label));
}

std::pair<std::size_t, double> optimal_decision(const Model& model) {
  return {model.opt_decision(), model.opt_value()};
}

ModelClass parse_model_class(const nlohmann::json& doc) {
  try {
    auto rewards = doc.at("rewards").get<std::vector<double>>();
    std::vector<std::string> observations;
    if (doc.contains("observations")) {
      for (const auto& o : doc.at("observations"))
        observations.push_back(o.is_string() ? o.get<std::string>() : o.dump());
    } else {
      observations.push_back("");
    }
    OutcomeSpace space(std::move(rewards), std::move(observations));
    const auto num_decisions = doc.at("decisions").get<std::size_t>();
    std::vector<Model> models;
    for (const auto& m : doc.at("models")) {
      auto rows = m.at("rows").get<std::vector<std::vector<double>>>();
      if (rows.size() != num_decisions)
        throw ValidationError("model row count does not match 'decisions'");
      std::string label = m.contains("label") ? m.at("label").get<std::string>()
                                              : "M" + std::to_string(models.size());
      models.push_back(make_model(space, rows, std::move(label)));
    }
    return ModelClass(std::move(models));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model class document: ") + e.what());
  }
}

nlohmann::json to_json(const ModelClass& cls) {
  nlohmann::json doc;
  doc["rewards"] = cls.space().rewards();
  doc["observations"] = cls.space().observations();
  doc["decisions"] = cls.num_decisions();
  doc["models"] = nlohmann::json::array();
  for (const auto& m : cls.models()) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t pi = 0; pi < m.num_decisions(); ++pi) {
      const auto r = m.row(pi);
      rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    doc["models"].push_back({{"label", m.label()}, {"rows", rows}});
  }
  return doc;
}

ModelClass load_model_class(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model class file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return parse_model_class(doc);
}

}  // namespace decx
