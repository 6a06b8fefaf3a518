#pragma once

// Hebbian refinement of an expert weight matrix so that designated output
// concepts (DOCs) settle inside desired ranges.
//
// NHL updates every existing edge and every concept synchronously:
//   w_ji <- gamma * w_ji + eta * A_j * (A_i - |w_ji| * A_j)
// keeping the zero pattern and the sign of every edge of the initial matrix.
//
// AHL visits groups of concepts in activation order. Only the activated
// concepts and their incoming edges change, and edges may be created:
//   w_ji <- (1 - gamma) * w_ji + eta * A_j * (A_i - |w_ji| * A_j)
//
// Both update states with the modified Kosko rule and a sigmoid of slope lambda.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fcm/weight_matrix.hpp"

namespace fcm::hebbian {

struct DocRange {
  std::string concept_id;
  double min = 0.0;
  double max = 1.0;

  double midpoint() const noexcept { return 0.5 * (min + max); }
  bool contains(double v) const noexcept { return v >= min && v <= max; }
};

using DocRanges = std::vector<DocRange>;

struct HebbianConfig {
  double learning_rate = 0.01;
  double decay = 1.0;
  double lambda = 1.0;
  double thresh = 0.002;
  int max_iterations = 100;
  /// Number of trailing steps over which F1 must not increase.
  int f1_window = 5;
};

struct AhlConfig {
  HebbianConfig base{0.01, 0.03, 1.0, 0.002, 100, 5};
  /// Activation groups fired in ascending key order; one full pass is one step.
  std::map<int, std::vector<std::string>> activation_pattern;
  /// When set, eta(k) = b1 * exp(-lbd1 * k) and gamma(k) = b2 * exp(-lbd2 * k).
  bool auto_learn = false;
  double b1 = 0.003;
  double lbd1 = 0.1;
  double b2 = 0.005;
  double lbd2 = 1.0;
};

enum class Termination { both_conditions_met, max_iterations };

const char* to_string(Termination t);

struct LearningOutcome {
  WeightMatrix weights;
  std::optional<int> converged_at;
  StateVector final_state;
  Termination termination = Termination::max_iterations;
  /// doc_trace[k][d]: value of DOC d after step k (k = 0 is the initial state).
  std::vector<std::vector<double>> doc_trace;
  /// Full state after every step, initial state first.
  std::vector<StateVector> state_trace;
};

struct TerminationMetrics {
  /// f1[d][k] = |DOC_d(k) - midpoint_d|.
  std::vector<std::vector<double>> f1;
  /// Every DOC changed by less than the threshold over the last step.
  bool f2_satisfied = false;
};

/// Evaluates the two termination conditions over a recorded DOC trace
/// (indexed [step][doc], at least two steps).
TerminationMetrics termination_metrics(const std::vector<std::vector<double>>& doc_trace, const DocRanges& docs,
                                       double thresh);

/// True when, for every DOC, F1 has not increased over the last `window`
/// steps, F2 holds and the latest value lies inside its range.
bool should_terminate(const std::vector<std::vector<double>>& doc_trace, const DocRanges& docs, double thresh,
                      int window);

/// Throws UnknownDoc, InvalidLearningRate, InvalidConfig or DimensionMismatch.
LearningOutcome nhl_run(const StateVector& initial_state, const WeightMatrix& w0, const DocRanges& docs,
                        const HebbianConfig& cfg);

/// Throws IncompletePattern, UnknownDoc, InvalidLearningRate or InvalidConfig.
LearningOutcome ahl_run(const StateVector& initial_state, const WeightMatrix& w0, const DocRanges& docs,
                        const AhlConfig& cfg);

/// "The <NHL|AHL> learning process converged at step <k> with the learning
/// rate eta = <eta> and decay = <gamma>!"
std::string convergence_message(const std::string& algorithm, const LearningOutcome& outcome, double eta,
                                double decay);

}  // namespace fcm::hebbian
