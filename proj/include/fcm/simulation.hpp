#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcm/weight_matrix.hpp"

namespace fcm::sim {

enum class Inference { kosko, mkosko, rescaled };
enum class Transfer { sigmoid, tanh, bivalent, trivalent };

Inference parse_inference(const std::string& name);
Transfer parse_transfer(const std::string& name);
const char* to_string(Inference inference);
const char* to_string(Transfer transfer);

struct SimulationConfig {
  Inference inference = Inference::mkosko;
  Transfer transfer = Transfer::sigmoid;
  /// Sigmoid steepness.
  double lambda = 1.0;
  double thresh = 0.001;
  int max_iterations = 50;
  /// Concepts checked for convergence; empty means all.
  std::vector<std::string> output_concepts;
  /// Concepts held at a fixed value on every step (including the initial state).
  std::map<std::string, double> clamped;
};

/// Throws InvalidConfig for non-positive lambda/thresh or negative
/// max_iterations, UnknownConcept for output/clamped ids not in `concepts`.
void validate(const SimulationConfig& cfg, const std::vector<std::string>& concepts);

double transfer(double x, Transfer kind, double lambda = 1.0);

/// Weighted input each concept receives under `inference`, before transfer.
StateVector net_input(const StateVector& state, const Eigen::MatrixXd& w, Inference inference);

/// One synchronous update: every concept is computed from the same snapshot.
/// Throws DimensionMismatch.
StateVector step(const StateVector& state, const WeightMatrix& w, const SimulationConfig& cfg);
StateVector step(const StateVector& state, const Eigen::MatrixXd& w, Inference inference, Transfer transfer,
                 double lambda);

struct SimulationTrace {
  std::vector<std::string> concepts;
  /// rows[0] is the initial state.
  std::vector<StateVector> rows;
  /// Index t of the first row whose change from row t-1 fell below the
  /// threshold over the output concepts. Human-facing output counts rows from
  /// one, so this is reported as state t+1.
  std::optional<std::size_t> converged_at;

  const StateVector& final_state() const { return rows.back(); }
};

/// Iterates step() until the output concepts change by less than cfg.thresh
/// (infinity norm) or cfg.max_iterations steps have been taken. Reaching the
/// cap is not an error; converged_at is left unset.
SimulationTrace simulate(const StateVector& initial, const WeightMatrix& w, const SimulationConfig& cfg);

/// "The values converged in the <t> state (e <= <thresh>)" or a
/// non-convergence notice.
std::string convergence_message(const SimulationTrace& trace, double thresh);

}  // namespace fcm::sim
