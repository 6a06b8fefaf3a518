#include <doctest.h>

#include <cmath>

#include "fcm/error.hpp"
#include "fcm/hebbian.hpp"
#include "fcm/simulation.hpp"
#include "support.hpp"

using namespace fcm;
using namespace fcm::hebbian;

namespace {

const DocRanges kDocs = {{"C1", 0.68, 0.74}, {"C5", 0.74, 0.80}};

AhlConfig water_tank_ahl() {
  AhlConfig cfg;
  cfg.activation_pattern = {{0, {"C1"}}, {1, {"C2", "C3"}}, {2, {"C5"}}, {3, {"C4"}}};
  return cfg;
}

double sign(double v) { return (v > 0) - (v < 0); }

}  // namespace

TEST_CASE("NHL on the water tank terminates inside both DOC ranges") {
  const auto w0 = test::water_tank();
  HebbianConfig cfg;
  cfg.lambda = 0.98;
  const auto out = nhl_run(test::water_tank_state(), w0, kDocs, cfg);
  REQUIRE(out.converged_at.has_value());
  CHECK(*out.converged_at <= 100);
  CHECK(out.termination == Termination::both_conditions_met);
  CHECK(kDocs[0].contains(out.final_state(0)));
  CHECK(kDocs[1].contains(out.final_state(4)));
  CHECK(out.doc_trace.size() == static_cast<std::size_t>(*out.converged_at) + 1);
  for (std::size_t r = 0; r < w0.size(); ++r) {
    for (std::size_t c = 0; c < w0.size(); ++c) {
      if (w0(r, c) == 0.0) {
        CHECK(out.weights(r, c) == 0.0);
      } else {
        CHECK((out.weights(r, c) == 0.0 || sign(out.weights(r, c)) == sign(w0(r, c))));
      }
    }
  }
  CHECK(convergence_message("NHL", out, 0.01, 1.0) ==
        "The NHL learning process converged at step " + std::to_string(*out.converged_at) +
            " with the learning rate eta = 0.01 and decay = 1!");
}

TEST_CASE("AHL on the water tank terminates inside both DOC ranges and may create edges") {
  const auto w0 = test::water_tank();
  const auto out = ahl_run(test::water_tank_state(), w0, kDocs, water_tank_ahl());
  REQUIRE(out.converged_at.has_value());
  CHECK(*out.converged_at <= 100);
  CHECK(kDocs[0].contains(out.final_state(0)));
  CHECK(kDocs[1].contains(out.final_state(4)));
  bool created = false;
  for (std::size_t r = 0; r < w0.size(); ++r) {
    CHECK(out.weights(r, r) == 0.0);
    for (std::size_t c = 0; c < w0.size(); ++c) created = created || (w0(r, c) == 0.0 && out.weights(r, c) != 0.0);
  }
  CHECK(created);
}

TEST_CASE("zero learning rate and unit decay leave NHL weights untouched") {
  const auto w0 = test::water_tank();
  HebbianConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.max_iterations = 5;
  const auto out = nhl_run(test::water_tank_state(), w0, kDocs, cfg);
  CHECK(out.weights == w0);
  // With fixed weights the state follows plain mkosko simulation.
  sim::SimulationConfig sc;
  sc.max_iterations = 5;
  sc.thresh = 1e-15;
  const auto trace = sim::simulate(test::water_tank_state(), w0, sc);
  for (std::size_t k = 0; k < out.state_trace.size(); ++k) CHECK(out.state_trace[k].isApprox(trace.rows[k], 1e-12));
}

TEST_CASE("zero learning rate and zero decay reduce AHL to simulation") {
  const auto w0 = test::water_tank();
  auto cfg = water_tank_ahl();
  cfg.base.learning_rate = 0.0;
  cfg.base.decay = 0.0;
  cfg.base.max_iterations = 3;
  const auto out = ahl_run(test::water_tank_state(), w0, kDocs, cfg);
  CHECK(out.weights == w0);
}

TEST_CASE("auto-learn with zero schedule coefficients keeps AHL weights") {
  const auto w0 = test::water_tank();
  auto cfg = water_tank_ahl();
  cfg.auto_learn = true;
  cfg.b1 = 0.0;
  cfg.b2 = 0.0;
  cfg.base.max_iterations = 3;
  CHECK(ahl_run(test::water_tank_state(), w0, kDocs, cfg).weights == w0);
}

TEST_CASE("termination metrics") {
  const DocRanges docs = {{"A", 0.0, 1.0}};
  std::vector<std::vector<double>> trace = {{0.9}, {0.7}, {0.6}, {0.55}, {0.5505}};
  const auto m = termination_metrics(trace, docs, 0.01);
  CHECK(m.f1[0][0] == doctest::Approx(0.4));
  CHECK(m.f2_satisfied);
  CHECK_FALSE(should_terminate(trace, docs, 0.01, 5));  // F1 rose on the last step.
  trace.back() = {0.5495};
  CHECK(should_terminate(trace, docs, 0.01, 5));
  CHECK_FALSE(should_terminate(trace, docs, 0.0005, 5));
  CHECK_FALSE(should_terminate({{0.5}}, docs, 0.01, 5));
}

TEST_CASE("hebbian input errors") {
  const auto w0 = test::water_tank();
  HebbianConfig cfg;
  CHECK_THROWS_AS(nhl_run(test::water_tank_state(), w0, {{"C9", 0, 1}}, cfg), UnknownDoc);
  cfg.learning_rate = -0.1;
  CHECK_THROWS_AS(nhl_run(test::water_tank_state(), w0, kDocs, cfg), InvalidLearningRate);
  CHECK_THROWS_AS(nhl_run(StateVector::Zero(2), w0, kDocs, {}), DimensionMismatch);

  auto ahl = water_tank_ahl();
  ahl.activation_pattern.erase(3);
  CHECK_THROWS_AS(ahl_run(test::water_tank_state(), w0, kDocs, ahl), IncompletePattern);
  ahl = water_tank_ahl();
  ahl.activation_pattern[4] = {"C1"};
  CHECK_THROWS_AS(ahl_run(test::water_tank_state(), w0, kDocs, ahl), IncompletePattern);
  ahl = water_tank_ahl();
  ahl.activation_pattern[4] = {"C7"};
  CHECK_THROWS_AS(ahl_run(test::water_tank_state(), w0, kDocs, ahl), IncompletePattern);
}
