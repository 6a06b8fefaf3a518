#include <doctest.h>

#include <cmath>

#include "fcm/fuzzy.hpp"
#include "fcm/rcga.hpp"
#include "support.hpp"

using namespace fcm;

namespace {

constexpr fuzzy::Aggregation kAggregations[] = {fuzzy::Aggregation::fmax, fuzzy::Aggregation::algsum,
                                                fuzzy::Aggregation::esum, fuzzy::Aggregation::hsum};

}  // namespace

TEST_CASE("aggregation stays in [0,1] and is commutative") {
  rcga::Rng rng(17);
  for (auto method : kAggregations) {
    CHECK(fuzzy::aggregate(0.0, 0.0, method) == 0.0);
    for (int i = 0; i < 1000; ++i) {
      const double x = rcga::uniform01(rng);
      const double y = rcga::uniform01(rng);
      const double xy = fuzzy::aggregate(x, y, method);
      CHECK(xy >= 0.0);
      CHECK(xy <= 1.0);
      CHECK(xy == doctest::Approx(fuzzy::aggregate(y, x, method)).epsilon(1e-15));
      CHECK(xy >= std::max(x, y) - 1e-15);
    }
  }
}

TEST_CASE("mamdani cut is monotone in the activation level") {
  const auto universe = fuzzy::Universe::standard();
  const auto terms = fuzzy::standard_terms();
  const auto mfs = fuzzy::generate_memberships(universe, terms);
  for (const auto& [id, mf] : mfs) {
    auto prev = fuzzy::implication(mf, fuzzy::ActivationWeight(0.0), fuzzy::Implication::mamdani);
    for (int k = 1; k <= 10; ++k) {
      const auto cur = fuzzy::implication(mf, fuzzy::ActivationWeight(k / 10.0), fuzzy::Implication::mamdani);
      for (std::size_t i = 0; i < cur.size(); ++i) {
        REQUIRE(cur[i] >= prev[i]);
        REQUIRE(cur[i] <= mf[i]);
      }
      prev = cur;
    }
  }
}

TEST_CASE("defuzzified values lie inside the support") {
  const auto universe = fuzzy::Universe::standard();
  const auto terms = fuzzy::standard_terms();
  const auto mfs = fuzzy::generate_memberships(universe, terms);
  rcga::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::string, double> act;
    for (const auto& t : terms) {
      if (rcga::uniform01(rng) < 0.3) act[t.id] = rcga::uniform01(rng);
    }
    if (act.empty()) continue;
    for (auto defuzz : {fuzzy::Defuzzification::centroid, fuzzy::Defuzzification::bisector,
                        fuzzy::Defuzzification::mom, fuzzy::Defuzzification::som, fuzzy::Defuzzification::lom}) {
      fuzzy::BuildOptions opts;
      opts.defuzzification = defuzz;
      const double v = fuzzy::edge_weight(mfs, terms, act, universe, opts);
      double lo = 1.0;
      double hi = -1.0;
      for (const auto& [id, level] : act) {
        if (level == 0.0) continue;
        const auto& mf = mfs.at(id);
        for (std::size_t i = 0; i < mf.size(); ++i) {
          if (mf[i] > 0.0) {
            lo = std::min(lo, universe.samples()[i]);
            hi = std::max(hi, universe.samples()[i]);
          }
        }
      }
      if (lo > hi) continue;
      CHECK(v >= lo - 1e-12);
      CHECK(v <= hi + 1e-12);
    }
  }
}

TEST_CASE("GA operators keep every gene in [-1,1]") {
  rcga::RcgaConfig cfg;
  cfg.n_iterations = 100;
  rcga::Rng rng(31);
  rcga::Chromosome a{Eigen::MatrixXd::Constant(3, 3, 0.99), 0.0};
  rcga::Chromosome b{Eigen::MatrixXd::Constant(3, 3, -0.99), 0.0};
  for (int i = 0; i < 10000; ++i) {
    const int g = static_cast<int>(rcga::uniform_index(rng, 0, 100));
    auto [c1, c2] = rcga::crossover(a, b, 0.9, rng);
    c1 = rcga::mutate(c1, 0.5, g, cfg, rng);
    REQUIRE(c1.genes.cwiseAbs().maxCoeff() <= 1.0);
    REQUIRE(c2.genes.cwiseAbs().maxCoeff() <= 1.0);
    a = c1;
  }
}

TEST_CASE("a fixed seed reproduces a run exactly") {
  const auto data = io::read_data(test::data("water_tank_data.csv"));
  rcga::RcgaConfig cfg;
  cfg.population_size = 30;
  cfg.n_iterations = 100;
  cfg.seed = 2024;
  const auto a = rcga::run(data, cfg);
  const auto b = rcga::run(data, cfg);
  CHECK(a.solution.values() == b.solution.values());
  CHECK(a.fitness == b.fitness);
  CHECK(a.history == b.history);
}
