#include <doctest.h>

#include <cmath>

#include "fcm/error.hpp"
#include "fcm/intervention.hpp"
#include "support.hpp"

using namespace fcm;
using namespace fcm::intervention;

namespace {

InterventionAnalysis baseline() {
  InterventionAnalysis a;
  a.initialize(test::map8_state(), test::map8(), {});
  return a;
}

InterventionSpec continuous(const std::string& name, std::map<std::string, double> weights, double eff = 1.0) {
  InterventionSpec s;
  s.name = name;
  s.kind = Kind::continuous;
  s.weights = std::move(weights);
  s.effectiveness = eff;
  return s;
}

const ConceptValues& row_of(const std::vector<std::pair<std::string, ConceptValues>>& table, const std::string& name) {
  for (const auto& [n, v] : table) {
    if (n == name) return v;
  }
  throw UnknownIntervention(name);
}

}  // namespace

TEST_CASE("three continuous scenarios reproduce the reference tables") {
  auto a = baseline();
  for (const auto& spec : io::read_interventions(test::data("interventions.json"))) a.add_intervention(spec);
  a.test_intervention("intervention_1", 10);
  a.test_intervention("intervention_2");
  a.test_intervention("intervention_3");

  const auto expected_eq = test::labelled_table("equilibriums.csv");
  const auto expected_cmp = test::labelled_table("comparison.csv");
  const auto eq = a.equilibriums();
  const auto cmp = a.comparison_table();
  REQUIRE(eq.size() == 4);
  CHECK(eq[0].first == kBaseline);
  CHECK(eq[3].first == "intervention_3");
  for (std::size_t s = 0; s < eq.size(); ++s) {
    for (std::size_t i = 0; i < 8; ++i) {
      const auto r = static_cast<Eigen::Index>(s);
      const auto c = static_cast<Eigen::Index>(i);
      CHECK(std::abs(eq[s].second[i] - expected_eq(r, c)) < 1e-6);
      CHECK(std::abs(cmp[s].second[i] - expected_cmp(r, c)) < 1e-4);
    }
  }
  CHECK(a.trace("intervention_1").converged_at.value() == 5);
}

TEST_CASE("continuous scenario extends the matrix with a scaled source row") {
  auto a = baseline();
  a.add_intervention(continuous("i", {{"C1", -0.3}, {"C2", 0.5}}));
  a.add_intervention(continuous("weak", {{"C1", -0.5}}, 0.2));
  const auto w = a.extended_matrix("i");
  REQUIRE(w.size() == 9);
  CHECK(w.concepts().back() == kInterventionNode);
  CHECK(w(8, 0) == -0.3);
  CHECK(w(8, 1) == 0.5);
  CHECK(w.values().col(8).isZero());
  CHECK(a.extended_matrix("weak")(8, 0) == doctest::Approx(-0.1));
}

TEST_CASE("a scenario with all-zero weights reproduces the baseline") {
  auto a = baseline();
  a.add_intervention(continuous("none", {{"C3", 0.0}}));
  const auto& trace = a.test_intervention("none");
  const auto base = a.trace(kBaseline).final_state();
  CHECK((trace.final_state() - base).cwiseAbs().maxCoeff() < a.config().thresh);
  const auto table = a.comparison_table();
  for (double v : row_of(table, "none")) CHECK(std::abs(v) < 0.2);
}

TEST_CASE("single-shot scenarios start from the baseline equilibrium") {
  auto a = baseline();
  InterventionSpec nothing;
  nothing.name = "nothing";
  nothing.kind = Kind::single_shot;
  a.add_intervention(nothing);
  const auto& t = a.test_intervention("nothing");
  CHECK(t.rows.front() == a.trace(kBaseline).final_state());
  CHECK(t.converged_at.value() == 1);

  InterventionSpec shock = nothing;
  shock.name = "shock";
  shock.state_overrides = {{"C1", 0.9}, {"C2", 0.4}};
  a.add_intervention(shock);
  const auto& s = a.test_intervention("shock");
  CHECK(s.rows.front()(0) == 0.9);
  CHECK(s.rows.front()(1) == 0.4);
  CHECK(s.rows.front()(2) == a.trace(kBaseline).final_state()(2));
}

TEST_CASE("a negative continuous edge lowers its target on a feedback-free chain") {
  Eigen::MatrixXd m(2, 2);
  m << 0.0, 0.6, 0.0, 0.0;
  InterventionAnalysis a;
  a.initialize(StateVector::Constant(2, 0.5), WeightMatrix({"X", "Y"}, m), {});
  a.add_intervention(continuous("down", {{"X", -0.7}}));
  a.test_intervention("down");
  const auto eq = a.equilibriums();
  CHECK(eq[1].second[0] <= eq[0].second[0]);
  CHECK(eq[1].second[1] <= eq[0].second[1]);
}

TEST_CASE("comparison values do not depend on concept order") {
  const auto w = test::map8();
  std::vector<std::string> reversed(w.concepts().rbegin(), w.concepts().rend());
  Eigen::MatrixXd flipped = w.values().reverse();
  const WeightMatrix wr(reversed, flipped);
  InterventionAnalysis a;
  a.initialize(make_state(reversed, {{"C1", 1}, {"C2", 1}}), wr, {});
  a.add_intervention(continuous("i3", {{"C5", -1.0}}));
  a.test_intervention("i3");
  const auto cmp = a.comparison_table();
  const auto c5 = static_cast<std::size_t>(wr.index_of("C5"));
  CHECK(cmp[1].second[c5] == doctest::Approx(-31.175022).epsilon(1e-6));
}

TEST_CASE("intervention errors") {
  InterventionAnalysis fresh;
  CHECK_THROWS_AS(fresh.add_intervention(continuous("x", {{"C1", 0.1}})), InvalidConfig);

  auto a = baseline();
  a.add_intervention(continuous("x", {{"C1", 0.1}}));
  CHECK_THROWS_AS(a.add_intervention(continuous("x", {{"C1", 0.1}})), DuplicateName);
  CHECK_THROWS_AS(a.add_intervention(continuous(kBaseline, {{"C1", 0.1}})), DuplicateName);
  CHECK_THROWS_AS(a.add_intervention(continuous("y", {{"C42", 0.1}})), UnknownConcept);
  CHECK_THROWS_AS(a.add_intervention(continuous("y", {{"C1", 0.1}}, 1.5)), EffectivenessOutOfRange);
  CHECK_THROWS_AS(a.add_intervention(continuous("y", {{"C1", 1.5}})), InvalidConfig);
  CHECK_THROWS_AS(a.test_intervention("nope"), UnknownIntervention);

  sim::SimulationConfig kosko;
  kosko.inference = sim::Inference::kosko;
  InterventionAnalysis z;
  z.initialize(StateVector::Zero(1), WeightMatrix({"A"}), kosko);
  CHECK_NOTHROW(z.comparison_table());
  sim::SimulationConfig bivalent;
  bivalent.inference = sim::Inference::kosko;
  bivalent.transfer = sim::Transfer::bivalent;
  z.initialize(StateVector::Zero(1), WeightMatrix({"A"}), bivalent);
  CHECK_THROWS_AS(z.comparison_table(), ZeroBaseline);
}
