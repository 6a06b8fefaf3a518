#pragma once

// What-if scenario analysis on a settled FCM.
//
// A continuous intervention adds one node with no incoming edges, held at 1 on
// every step, whose outgoing weights are the scenario weights scaled by its
// effectiveness. A single-shot intervention overrides concept values once and
// lets the unchanged map evolve. Both start from the baseline equilibrium.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcm/simulation.hpp"
#include "fcm/weight_matrix.hpp"

namespace fcm::intervention {

inline constexpr const char* kBaseline = "baseline";
/// Id of the node a continuous intervention adds to the extended map.
inline constexpr const char* kInterventionNode = "intervention";

enum class Kind { single_shot, continuous };

struct InterventionSpec {
  std::string name;
  Kind kind = Kind::continuous;
  /// single_shot only.
  std::map<std::string, double> state_overrides;
  /// continuous only; each in [-1, 1].
  std::map<std::string, double> weights;
  double effectiveness = 1.0;
};

/// Per-concept values in the baseline concept order.
using ConceptValues = std::vector<double>;

class InterventionAnalysis {
 public:
  /// Runs the baseline simulation and stores its final row as the equilibrium.
  const sim::SimulationTrace& initialize(const StateVector& initial, const WeightMatrix& w,
                                         const sim::SimulationConfig& cfg);

  /// Throws InvalidConfig before initialize(), DuplicateName, UnknownConcept,
  /// EffectivenessOutOfRange, or InvalidConfig for weights outside [-1, 1].
  void add_intervention(const InterventionSpec& spec);

  /// Simulates a registered scenario from the baseline equilibrium.
  /// Throws UnknownIntervention.
  const sim::SimulationTrace& test_intervention(const std::string& name, std::optional<int> iterations = {});

  /// Weight matrix the scenario is simulated on (baseline size + 1 for
  /// continuous scenarios, with the added node last). Throws UnknownIntervention.
  WeightMatrix extended_matrix(const std::string& name) const;

  const std::vector<std::string>& concepts() const noexcept { return baseline_w_.concepts(); }
  const sim::SimulationConfig& config() const noexcept { return cfg_; }

  /// Registered scenario names in insertion order.
  std::vector<std::string> scenarios() const;
  /// Tested scenario names in test order, baseline first.
  const std::vector<std::string>& tested() const noexcept { return tested_; }

  /// Throws UnknownIntervention when `name` has not been tested.
  const sim::SimulationTrace& trace(const std::string& name) const;

  /// Equilibrium of every tested scenario (baseline first), without the
  /// intervention node.
  std::vector<std::pair<std::string, ConceptValues>> equilibriums() const;

  /// 100 * (eq - eq_baseline) / eq_baseline for every tested scenario; the
  /// baseline row is all zero. Throws ZeroBaseline.
  std::vector<std::pair<std::string, ConceptValues>> comparison_table() const;

 private:
  const InterventionSpec& spec_of(const std::string& name) const;

  bool initialized_ = false;
  WeightMatrix baseline_w_;
  sim::SimulationConfig cfg_;
  std::vector<InterventionSpec> specs_;
  std::vector<std::string> tested_;
  std::map<std::string, sim::SimulationTrace> traces_;
};

}  // namespace fcm::intervention
