#pragma once

// Real-coded genetic algorithm that learns a weight matrix from longitudinal
// state observations, plus in-sample / out-of-sample validation.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fcm/simulation.hpp"
#include "fcm/weight_matrix.hpp"

namespace fcm::rcga {

using Rng = std::mt19937_64;

/// Uniform draw in [0, 1) from the top 53 bits of one engine output.
double uniform01(Rng& rng);
/// Uniform draw in [lo, hi).
double uniform(Rng& rng, double lo, double hi);
/// Uniform integer in [lo, hi].
std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi);

/// Observed states, one row per time step, one column per concept.
struct LongitudinalData {
  std::vector<std::string> concepts;
  Eigen::MatrixXd rows;

  std::size_t steps() const noexcept { return static_cast<std::size_t>(rows.rows()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(rows.cols()); }
};

/// Throws InvalidConfig unless there are at least two rows and one column per concept.
void validate(const LongitudinalData& data);

/// The first `steps` rows of a simulated trace.
LongitudinalData from_trace(const sim::SimulationTrace& trace, std::size_t steps);

struct Dynamics {
  sim::Inference inference = sim::Inference::mkosko;
  sim::Transfer transfer = sim::Transfer::sigmoid;
  double lambda = 1.0;
};

struct Chromosome {
  /// Full N x N matrix, row = source, every entry in [-1, 1].
  Eigen::MatrixXd genes;
  double fitness = 0.0;
};

enum class GaType { generational, ssga };
enum class SelectionStrategy { roulette, tournament, random };

GaType parse_ga_type(const std::string& name);
const char* to_string(GaType type);

struct RcgaConfig {
  std::size_t population_size = 100;
  GaType ga_type = GaType::generational;
  double p_recombination = 0.9;
  /// Per-gene mutation probability; unset means 0.5 / N^2.
  std::optional<double> p_mutation;
  int n_iterations = 30000;
  double threshold = 0.99;
  /// Fitness = 1 / (a * Error + 1).
  double a = 100.0;
  /// Exponent of the per-cell deviation.
  double p = 1.0;
  /// Error normalization; unset means 1 / ((T - 1) * N).
  std::optional<double> alpha;
  Dynamics dynamics;
  /// Predict each row from the observed previous row. When false the
  /// prediction runs freely from the first observed row.
  bool teacher_forcing = true;
  std::size_t tournament_size = 2;
  /// Degree of the non-uniform mutation's shrinkage.
  double nonuniform_b = 5.0;
  std::uint64_t seed = 42;
};

/// Throws InvalidConfig.
void validate(const RcgaConfig& cfg);

double mutation_probability(const RcgaConfig& cfg, std::size_t n);

/// Error = alpha * sum_t sum_n |C_n(t) - C^_n(t)|^p over t = 1..T-1.
double prediction_error(const Eigen::MatrixXd& genes, const LongitudinalData& data, const RcgaConfig& cfg);

/// 1 / (a * Error + 1). Throws DimensionMismatch.
double fitness(const Eigen::MatrixXd& genes, const LongitudinalData& data, const RcgaConfig& cfg);
double fitness_from_error(double error, double a);

/// Index of one parent. Throws EmptyPopulation.
std::size_t select_one(std::span<const Chromosome> population, SelectionStrategy strategy, Rng& rng,
                       std::size_t tournament_size = 2);

/// Two parents. With SelectionStrategy::random each draw picks roulette or
/// tournament with equal probability. Throws EmptyPopulation.
std::pair<std::size_t, std::size_t> select(std::span<const Chromosome> population, SelectionStrategy strategy,
                                           Rng& rng, std::size_t tournament_size = 2);

/// One-point crossover on the row-major genome: children take the first `cut`
/// genes from one parent and the rest from the other. cut in [0, N^2].
std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b, std::size_t cut);

/// With probability p_recombination, crossover at a cut drawn uniformly in [1, N^2 - 1]; otherwise copies.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, double p_recombination,
                                            Rng& rng);

/// Michalewicz shrinkage y * (1 - u^((1 - g/g_max)^b)).
double nonuniform_delta(int generation, int max_generation, double y, double u, double b);

/// Each gene mutates with probability p_mutation, picking uniformly between a
/// uniform resample in [-1, 1] and a non-uniform perturbation. Results are
/// clamped to [-1, 1].
Chromosome mutate(const Chromosome& c, double p_mutation, int generation, const RcgaConfig& cfg, Rng& rng);

/// Mean absolute gene difference between two chromosomes.
double gene_distance(const Chromosome& a, const Chromosome& b);

/// Steady-state replacement test for an offspring against the current worst
/// member: accept when it is fitter, or when it is at least as fit as the
/// median and adds more diversity than the worst member contributes.
bool useful_diversity_accepts(std::span<const Chromosome> population, const Chromosome& offspring,
                              std::size_t worst);

struct RcgaResult {
  WeightMatrix solution;
  double fitness = 0.0;
  /// Best-ever fitness after each generation (each steady-state step for ssga).
  std::vector<double> history;
  int generations = 0;
  std::uint64_t seed = 0;
};

/// Runs the GA until the best fitness reaches cfg.threshold or
/// cfg.n_iterations generations elapse. `planted` matrices replace the first
/// members of the random initial population.
RcgaResult run(const LongitudinalData& data, const RcgaConfig& cfg, std::span<const Eigen::MatrixXd> planted = {});

/// Simulates T-1 steps from `initial` (data row 0 when unset) and returns the
/// mean absolute deviation from the observed rows 1..T-1.
double validate_ise(const std::optional<StateVector>& initial, const WeightMatrix& w, const LongitudinalData& data,
                    const Dynamics& dynamics);

struct OseResult {
  double mean = 0.0;
  double std = 0.0;
};

/// Draws k initial states uniformly in [low, high]^N and compares the one-step
/// predictions of `w` and `generator`; returns mean and population standard
/// deviation of the per-draw mean absolute errors. Throws InvalidRange.
OseResult validate_ose(const WeightMatrix& w, const WeightMatrix& generator, std::size_t k, double low, double high,
                       const Dynamics& dynamics, Rng& rng);

}  // namespace fcm::rcga
