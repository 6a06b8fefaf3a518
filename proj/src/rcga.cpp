#include "fcm/rcga.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "fcm/error.hpp"

namespace fcm::rcga {

namespace {

/// Transfer(net input) for concept i given the previous state, without allocating.
double predict_concept(const Eigen::MatrixXd& genes, const double* prev, Eigen::Index n, Eigen::Index i,
                       const Dynamics& d) {
  double net = 0.0;
  switch (d.inference) {
    case sim::Inference::kosko:
      for (Eigen::Index j = 0; j < n; ++j) net += prev[j] * genes(j, i);
      break;
    case sim::Inference::mkosko:
      net = prev[i];
      for (Eigen::Index j = 0; j < n; ++j) net += prev[j] * genes(j, i);
      break;
    case sim::Inference::rescaled:
      net = 2.0 * prev[i] - 1.0;
      for (Eigen::Index j = 0; j < n; ++j) net += (2.0 * prev[j] - 1.0) * genes(j, i);
      break;
  }
  return sim::transfer(net, d.transfer, d.lambda);
}

double deviation(double diff, double p) {
  const double a = std::abs(diff);
  return p == 1.0 ? a : std::pow(a, p);
}

void clamp_genes(Eigen::MatrixXd& genes) { genes = genes.cwiseMax(-1.0).cwiseMin(1.0); }

Chromosome random_chromosome(Eigen::Index n, Rng& rng) {
  Chromosome c;
  c.genes.resize(n, n);
  // Row-major fill keeps the draw order aligned with the crossover genome.
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index col = 0; col < n; ++col) c.genes(r, col) = uniform(rng, -1.0, 1.0);
  }
  return c;
}

std::size_t worst_index(std::span<const Chromosome> population) {
  std::size_t worst = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (population[i].fitness < population[worst].fitness) worst = i;
  }
  return worst;
}

std::size_t best_index(std::span<const Chromosome> population) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (population[i].fitness > population[best].fitness) best = i;
  }
  return best;
}

}  // namespace

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  const auto span = static_cast<double>(hi - lo + 1);
  const auto offset = static_cast<std::size_t>(uniform01(rng) * span);
  return lo + std::min(offset, hi - lo);
}

void validate(const LongitudinalData& data) {
  if (data.steps() < 2) throw InvalidConfig("longitudinal data needs at least two rows");
  if (data.concepts.size() != data.size()) throw DimensionMismatch(data.concepts.size(), data.size());
  if (data.size() == 0) throw InvalidConfig("longitudinal data has no concepts");
}

LongitudinalData from_trace(const sim::SimulationTrace& trace, std::size_t steps) {
  steps = std::min(steps, trace.rows.size());
  LongitudinalData data;
  data.concepts = trace.concepts;
  data.rows.resize(static_cast<Eigen::Index>(steps), static_cast<Eigen::Index>(trace.concepts.size()));
  for (std::size_t t = 0; t < steps; ++t) data.rows.row(static_cast<Eigen::Index>(t)) = trace.rows[t].transpose();
  return data;
}

GaType parse_ga_type(const std::string& name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  if (n == "generational") return GaType::generational;
  if (n == "ssga") return GaType::ssga;
  throw InvalidConfig("unknown GA type '" + name + "'");
}

const char* to_string(GaType type) { return type == GaType::generational ? "generational" : "ssga"; }

void validate(const RcgaConfig& cfg) {
  if (cfg.population_size < 1) throw InvalidConfig("population size must be positive");
  if (!(cfg.p_recombination >= 0.0 && cfg.p_recombination <= 1.0)) {
    throw InvalidConfig("p_recombination must lie in [0, 1]");
  }
  if (cfg.p_mutation && !(*cfg.p_mutation >= 0.0 && *cfg.p_mutation <= 1.0)) {
    throw InvalidConfig("p_mutation must lie in [0, 1]");
  }
  if (cfg.n_iterations < 1) throw InvalidConfig("n_iterations must be positive");
  if (!(cfg.threshold >= 0.0 && cfg.threshold <= 1.0)) throw InvalidConfig("threshold must lie in [0, 1]");
  if (!(cfg.a > 0.0)) throw InvalidConfig("fitness scale a must be positive");
  if (!(cfg.p > 0.0)) throw InvalidConfig("norm exponent p must be positive");
  if (cfg.alpha && !(*cfg.alpha > 0.0)) throw InvalidConfig("normalization alpha must be positive");
  if (!(cfg.dynamics.lambda > 0.0)) throw InvalidConfig("lambda must be positive");
  if (cfg.tournament_size < 1) throw InvalidConfig("tournament size must be positive");
  if (!(cfg.nonuniform_b > 0.0)) throw InvalidConfig("non-uniform mutation degree must be positive");
}

double mutation_probability(const RcgaConfig& cfg, std::size_t n) {
  if (cfg.p_mutation) return *cfg.p_mutation;
  return n == 0 ? 0.0 : 0.5 / static_cast<double>(n * n);
}

double prediction_error(const Eigen::MatrixXd& genes, const LongitudinalData& data, const RcgaConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(data.size());
  if (genes.rows() != n || genes.cols() != n) {
    throw DimensionMismatch(data.size(), static_cast<std::size_t>(genes.rows()));
  }
  const auto steps = static_cast<Eigen::Index>(data.steps());
  if (steps < 2) throw InvalidConfig("longitudinal data needs at least two rows");

  std::vector<double> prev(static_cast<std::size_t>(n));
  std::vector<double> next(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) prev[static_cast<std::size_t>(j)] = data.rows(0, j);

  double sum = 0.0;
  for (Eigen::Index t = 1; t < steps; ++t) {
    if (cfg.teacher_forcing) {
      for (Eigen::Index j = 0; j < n; ++j) prev[static_cast<std::size_t>(j)] = data.rows(t - 1, j);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double predicted = predict_concept(genes, prev.data(), n, i, cfg.dynamics);
      next[static_cast<std::size_t>(i)] = predicted;
      sum += deviation(data.rows(t, i) - predicted, cfg.p);
    }
    prev.swap(next);
  }
  const double alpha = cfg.alpha.value_or(1.0 / (static_cast<double>(steps - 1) * static_cast<double>(n)));
  return alpha * sum;
}

double fitness_from_error(double error, double a) { return 1.0 / (a * error + 1.0); }

double fitness(const Eigen::MatrixXd& genes, const LongitudinalData& data, const RcgaConfig& cfg) {
  return fitness_from_error(prediction_error(genes, data, cfg), cfg.a);
}

std::size_t select_one(std::span<const Chromosome> population, SelectionStrategy strategy, Rng& rng,
                       std::size_t tournament_size) {
  if (population.empty()) throw EmptyPopulation();
  if (population.size() == 1) return 0;
  if (strategy == SelectionStrategy::random) {
    strategy = uniform01(rng) < 0.5 ? SelectionStrategy::roulette : SelectionStrategy::tournament;
  }

  if (strategy == SelectionStrategy::roulette) {
    double total = 0.0;
    for (const auto& c : population) total += std::max(0.0, c.fitness);
    if (!(total > 0.0)) return uniform_index(rng, 0, population.size() - 1);
    const double target = uniform01(rng) * total;
    double running = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < population.size(); ++i) {
      const double f = std::max(0.0, population[i].fitness);
      if (f <= 0.0) continue;
      running += f;
      last_positive = i;
      if (target < running) return i;
    }
    return last_positive;
  }

  std::size_t best = uniform_index(rng, 0, population.size() - 1);
  for (std::size_t k = 1; k < tournament_size; ++k) {
    const std::size_t challenger = uniform_index(rng, 0, population.size() - 1);
    if (population[challenger].fitness > population[best].fitness) best = challenger;
  }
  return best;
}

std::pair<std::size_t, std::size_t> select(std::span<const Chromosome> population, SelectionStrategy strategy,
                                           Rng& rng, std::size_t tournament_size) {
  const auto first = select_one(population, strategy, rng, tournament_size);
  const auto second = select_one(population, strategy, rng, tournament_size);
  return {first, second};
}

std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b, std::size_t cut) {
  if (a.genes.rows() != b.genes.rows() || a.genes.cols() != b.genes.cols()) {
    throw DimensionMismatch(static_cast<std::size_t>(a.genes.size()), static_cast<std::size_t>(b.genes.size()));
  }
  const auto cols = a.genes.cols();
  const auto total = static_cast<std::size_t>(a.genes.size());
  cut = std::min(cut, total);

  Chromosome first = a;
  Chromosome second = b;
  for (std::size_t g = cut; g < total; ++g) {
    const auto r = static_cast<Eigen::Index>(g) / cols;
    const auto c = static_cast<Eigen::Index>(g) % cols;
    first.genes(r, c) = b.genes(r, c);
    second.genes(r, c) = a.genes(r, c);
  }
  return {std::move(first), std::move(second)};
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, double p_recombination,
                                            Rng& rng) {
  const auto total = static_cast<std::size_t>(a.genes.size());
  if (total < 2 || !(uniform01(rng) < p_recombination)) return {a, b};
  return crossover_at(a, b, uniform_index(rng, 1, total - 1));
}

double nonuniform_delta(int generation, int max_generation, double y, double u, double b) {
  const double progress = max_generation > 0 ? std::clamp(static_cast<double>(generation) / max_generation, 0.0, 1.0)
                                             : 1.0;
  return y * (1.0 - std::pow(u, std::pow(1.0 - progress, b)));
}

Chromosome mutate(const Chromosome& c, double p_mutation, int generation, const RcgaConfig& cfg, Rng& rng) {
  Chromosome out = c;
  if (p_mutation <= 0.0) return out;
  const auto rows = out.genes.rows();
  const auto cols = out.genes.cols();
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index col = 0; col < cols; ++col) {
      if (!(uniform01(rng) < p_mutation)) continue;
      double& gene = out.genes(r, col);
      if (uniform01(rng) < 0.5) {
        gene = uniform(rng, -1.0, 1.0);
      } else {
        const bool up = uniform01(rng) < 0.5;
        const double u = uniform01(rng);
        gene = up ? gene + nonuniform_delta(generation, cfg.n_iterations, 1.0 - gene, u, cfg.nonuniform_b)
                  : gene - nonuniform_delta(generation, cfg.n_iterations, gene + 1.0, u, cfg.nonuniform_b);
      }
    }
  }
  clamp_genes(out.genes);
  return out;
}

double gene_distance(const Chromosome& a, const Chromosome& b) {
  if (a.genes.size() == 0) return 0.0;
  return (a.genes - b.genes).cwiseAbs().mean();
}

bool useful_diversity_accepts(std::span<const Chromosome> population, const Chromosome& offspring,
                              std::size_t worst) {
  if (population.empty()) return true;
  const auto& victim = population[worst];
  if (offspring.fitness > victim.fitness) return true;

  std::vector<double> fitnesses;
  fitnesses.reserve(population.size());
  for (const auto& c : population) fitnesses.push_back(c.fitness);
  const auto mid = fitnesses.begin() + static_cast<std::ptrdiff_t>(fitnesses.size() / 2);
  std::nth_element(fitnesses.begin(), mid, fitnesses.end());
  if (offspring.fitness < *mid) return false;

  double offspring_spread = 0.0;
  double victim_spread = 0.0;
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (i == worst) continue;
    offspring_spread += gene_distance(offspring, population[i]);
    victim_spread += gene_distance(victim, population[i]);
  }
  return offspring_spread > victim_spread;
}

RcgaResult run(const LongitudinalData& data, const RcgaConfig& cfg, std::span<const Eigen::MatrixXd> planted) {
  validate(data);
  validate(cfg);
  const auto n = static_cast<Eigen::Index>(data.size());
  const double p_mut = mutation_probability(cfg, data.size());

  Rng rng(cfg.seed);
  std::vector<Chromosome> population;
  population.reserve(cfg.population_size);
  for (std::size_t i = 0; i < cfg.population_size; ++i) population.push_back(random_chromosome(n, rng));
  for (std::size_t i = 0; i < planted.size() && i < population.size(); ++i) {
    if (planted[i].rows() != n || planted[i].cols() != n) {
      throw DimensionMismatch(data.size(), static_cast<std::size_t>(planted[i].rows()));
    }
    population[i].genes = planted[i];
    clamp_genes(population[i].genes);
  }
  for (auto& c : population) c.fitness = fitness(c.genes, data, cfg);

  Chromosome best = population[best_index(population)];
  RcgaResult result;
  result.seed = cfg.seed;

  const auto record = [&](int generation) {
    const auto& champion = population[best_index(population)];
    if (champion.fitness > best.fitness) best = champion;
    result.history.push_back(best.fitness);
    result.generations = generation;
    return best.fitness >= cfg.threshold;
  };

  if (cfg.ga_type == GaType::generational) {
    for (int g = 1; g <= cfg.n_iterations; ++g) {
      if (record(g) || g == cfg.n_iterations) break;
      std::vector<Chromosome> next;
      next.reserve(cfg.population_size);
      while (next.size() < cfg.population_size) {
        const auto [i, j] = select(population, SelectionStrategy::random, rng, cfg.tournament_size);
        auto [c1, c2] = crossover(population[i], population[j], cfg.p_recombination, rng);
        next.push_back(mutate(c1, p_mut, g, cfg, rng));
        if (next.size() < cfg.population_size) next.push_back(mutate(c2, p_mut, g, cfg, rng));
      }
      for (auto& c : next) c.fitness = fitness(c.genes, data, cfg);
      population = std::move(next);
    }
  } else {
    for (int g = 1; g <= cfg.n_iterations; ++g) {
      if (g > 1) {
        const auto [i, j] = select(population, SelectionStrategy::random, rng, cfg.tournament_size);
        auto [c1, c2] = crossover(population[i], population[j], cfg.p_recombination, rng);
        for (auto* child : {&c1, &c2}) {
          Chromosome offspring = mutate(*child, p_mut, g, cfg, rng);
          offspring.fitness = fitness(offspring.genes, data, cfg);
          const auto worst = worst_index(population);
          if (useful_diversity_accepts(population, offspring, worst)) population[worst] = std::move(offspring);
        }
      }
      if (record(g)) break;
    }
  }

  result.solution = WeightMatrix(data.concepts, best.genes);
  result.fitness = best.fitness;
  return result;
}

double validate_ise(const std::optional<StateVector>& initial, const WeightMatrix& w, const LongitudinalData& data,
                    const Dynamics& dynamics) {
  validate(data);
  if (w.size() != data.size()) throw DimensionMismatch(data.size(), w.size());
  StateVector state = initial ? *initial : StateVector(data.rows.row(0).transpose());
  if (static_cast<std::size_t>(state.size()) != data.size()) {
    throw DimensionMismatch(data.size(), static_cast<std::size_t>(state.size()));
  }

  double total = 0.0;
  for (Eigen::Index t = 1; t < data.rows.rows(); ++t) {
    state = sim::step(state, w.values(), dynamics.inference, dynamics.transfer, dynamics.lambda);
    total += (data.rows.row(t).transpose() - state).cwiseAbs().sum();
  }
  return total / (static_cast<double>(data.rows.rows() - 1) * static_cast<double>(data.size()));
}

OseResult validate_ose(const WeightMatrix& w, const WeightMatrix& generator, std::size_t k, double low, double high,
                       const Dynamics& dynamics, Rng& rng) {
  if (k < 1) throw InvalidRange("k_validation must be at least 1");
  if (!(low < high)) throw InvalidRange("OSE needs low < high");
  if (w.size() != generator.size()) throw DimensionMismatch(generator.size(), w.size());

  const auto n = static_cast<Eigen::Index>(w.size());
  std::vector<double> errors;
  errors.reserve(k);
  for (std::size_t draw = 0; draw < k; ++draw) {
    StateVector start(n);
    for (Eigen::Index i = 0; i < n; ++i) start(i) = uniform(rng, low, high);
    const StateVector a = sim::step(start, w.values(), dynamics.inference, dynamics.transfer, dynamics.lambda);
    const StateVector b =
        sim::step(start, generator.values(), dynamics.inference, dynamics.transfer, dynamics.lambda);
    errors.push_back(n == 0 ? 0.0 : (a - b).cwiseAbs().mean());
  }

  OseResult r;
  r.mean = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(k);
  double var = 0.0;
  for (double e : errors) var += (e - r.mean) * (e - r.mean);
  r.std = std::sqrt(var / static_cast<double>(k));
  return r;
}

}  // namespace fcm::rcga
