#include "fcm/intervention.hpp"

#include <algorithm>
#include <cmath>

#include "fcm/error.hpp"

namespace fcm::intervention {

const sim::SimulationTrace& InterventionAnalysis::initialize(const StateVector& initial, const WeightMatrix& w,
                                                             const sim::SimulationConfig& cfg) {
  auto trace = sim::simulate(initial, w, cfg);
  baseline_w_ = w;
  cfg_ = cfg;
  specs_.clear();
  tested_.assign(1, kBaseline);
  traces_.clear();
  initialized_ = true;
  return traces_[kBaseline] = std::move(trace);
}

void InterventionAnalysis::add_intervention(const InterventionSpec& spec) {
  if (!initialized_) throw InvalidConfig("initialize the baseline before adding interventions");
  if (spec.name == kBaseline || std::any_of(specs_.begin(), specs_.end(),
                                            [&](const InterventionSpec& s) { return s.name == spec.name; })) {
    throw DuplicateName(spec.name);
  }
  if (spec.kind == Kind::continuous) {
    if (!(spec.effectiveness >= 0.0 && spec.effectiveness <= 1.0)) throw EffectivenessOutOfRange(spec.effectiveness);
    for (const auto& [id, weight] : spec.weights) {
      baseline_w_.index_of(id);
      if (!(weight >= -1.0 && weight <= 1.0)) {
        throw InvalidConfig("intervention weight on '" + id + "' must lie in [-1, 1]");
      }
    }
  } else {
    for (const auto& [id, value] : spec.state_overrides) baseline_w_.index_of(id);
  }
  specs_.push_back(spec);
}

const InterventionSpec& InterventionAnalysis::spec_of(const std::string& name) const {
  const auto it = std::find_if(specs_.begin(), specs_.end(), [&](const InterventionSpec& s) { return s.name == name; });
  if (it == specs_.end()) throw UnknownIntervention(name);
  return *it;
}

WeightMatrix InterventionAnalysis::extended_matrix(const std::string& name) const {
  const auto& spec = spec_of(name);
  if (spec.kind == Kind::single_shot) return baseline_w_;

  const auto n = static_cast<Eigen::Index>(baseline_w_.size());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n + 1, n + 1);
  w.topLeftCorner(n, n) = baseline_w_.values();
  for (const auto& [id, weight] : spec.weights) {
    w(n, static_cast<Eigen::Index>(baseline_w_.index_of(id))) = weight * spec.effectiveness;
  }
  auto ids = baseline_w_.concepts();
  ids.emplace_back(kInterventionNode);
  return WeightMatrix(std::move(ids), std::move(w));
}

const sim::SimulationTrace& InterventionAnalysis::test_intervention(const std::string& name,
                                                                    std::optional<int> iterations) {
  const auto& spec = spec_of(name);
  const StateVector& equilibrium = traces_.at(kBaseline).final_state();
  sim::SimulationConfig cfg = cfg_;
  if (iterations) cfg.max_iterations = *iterations;

  sim::SimulationTrace trace;
  if (spec.kind == Kind::continuous) {
    const auto extended = extended_matrix(name);
    const auto n = equilibrium.size();
    StateVector start(n + 1);
    start.head(n) = equilibrium;
    start(n) = 1.0;
    cfg.clamped[kInterventionNode] = 1.0;
    if (cfg.output_concepts.empty()) cfg.output_concepts = baseline_w_.concepts();

    const auto full = sim::simulate(start, extended, cfg);
    trace.concepts = baseline_w_.concepts();
    trace.converged_at = full.converged_at;
    for (const auto& row : full.rows) trace.rows.push_back(row.head(n));
  } else {
    StateVector start = equilibrium;
    for (const auto& [id, value] : spec.state_overrides) start(static_cast<Eigen::Index>(baseline_w_.index_of(id))) = value;
    trace = sim::simulate(start, baseline_w_, cfg);
  }

  if (traces_.count(name) == 0) tested_.push_back(name);
  return traces_[name] = std::move(trace);
}

std::vector<std::string> InterventionAnalysis::scenarios() const {
  std::vector<std::string> names;
  for (const auto& s : specs_) names.push_back(s.name);
  return names;
}

const sim::SimulationTrace& InterventionAnalysis::trace(const std::string& name) const {
  const auto it = traces_.find(name);
  if (it == traces_.end()) throw UnknownIntervention(name);
  return it->second;
}

std::vector<std::pair<std::string, ConceptValues>> InterventionAnalysis::equilibriums() const {
  std::vector<std::pair<std::string, ConceptValues>> out;
  for (const auto& name : tested_) {
    const auto& eq = traces_.at(name).final_state();
    out.emplace_back(name, ConceptValues(eq.data(), eq.data() + eq.size()));
  }
  return out;
}

std::vector<std::pair<std::string, ConceptValues>> InterventionAnalysis::comparison_table() const {
  if (!initialized_) throw InvalidConfig("no baseline has been simulated");
  const auto& base = traces_.at(kBaseline).final_state();
  for (Eigen::Index i = 0; i < base.size(); ++i) {
    if (base(i) == 0.0) throw ZeroBaseline(baseline_w_.concepts()[static_cast<std::size_t>(i)]);
  }
  std::vector<std::pair<std::string, ConceptValues>> out;
  for (const auto& name : tested_) {
    const auto& eq = traces_.at(name).final_state();
    ConceptValues row(static_cast<std::size_t>(base.size()));
    for (Eigen::Index i = 0; i < base.size(); ++i) {
      row[static_cast<std::size_t>(i)] = name == kBaseline ? 0.0 : 100.0 * (eq(i) - base(i)) / base(i);
    }
    out.emplace_back(name, std::move(row));
  }
  return out;
}

}  // namespace fcm::intervention
