#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fcm/error.hpp"
#include "fcm/fuzzy.hpp"
#include "support.hpp"

using namespace fcm;
using namespace fcm::fuzzy;

namespace {

const LinguisticTerm& term(const LinguisticTermSet& set, const std::string& id) {
  for (const auto& t : set) {
    if (t.id == id) return t;
  }
  throw UnknownTerm(id);
}

// Values from an independent numpy implementation of the same sampled pipeline.
constexpr double kC1C2 = 0.7021894176529601;
constexpr double kC2C1 = 0.607538621520759;
constexpr double kC3C1 = 0.5559208199438145;
constexpr double kC3C4 = 0.1619509589877222;

}  // namespace

TEST_CASE("universe sampling") {
  const auto u = Universe::standard();
  CHECK(u.size() == 2001);
  CHECK(u.samples().front() == -1.0);
  CHECK(u.samples().back() == 1.0);
  CHECK(u.samples()[1000] == doctest::Approx(0.0));
  CHECK_THROWS_AS(Universe(1, -1, 0.1), InvalidConfig);
  CHECK_THROWS_AS(Universe(-1, 1, 0), InvalidConfig);
  CHECK_THROWS_AS(Universe(0, 1, 0.3), InvalidConfig);
}

TEST_CASE("triangular membership, including shoulders") {
  const auto terms = standard_terms();
  CHECK(membership(term(terms, "+H"), 0.75) == 1.0);
  CHECK(membership(term(terms, "+H"), 0.625) == doctest::Approx(0.5));
  CHECK(membership(term(terms, "+H"), 0.5) == 0.0);
  CHECK(membership(term(terms, "+VH"), 1.0) == 1.0);
  CHECK(membership(term(terms, "-VH"), -1.0) == 1.0);
  CHECK(membership(term(terms, "+VL"), 0.0) == 1.0);
}

TEST_CASE("trapezoidal and gaussian membership") {
  const LinguisticTerm trap{"T", Shape::trapezoidal, {0.0, 0.2, 0.4, 0.8}};
  CHECK(membership(trap, 0.3) == 1.0);
  CHECK(membership(trap, 0.1) == doctest::Approx(0.5));
  CHECK(membership(trap, 0.6) == doctest::Approx(0.5));
  const LinguisticTerm gauss{"G", Shape::gaussian, {0.5, 0.1}};
  CHECK(membership(gauss, 0.5) == 1.0);
  CHECK(membership(gauss, 0.6) == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("invalid term parameters") {
  const auto u = Universe::standard();
  CHECK_THROWS_AS(validate_term({"x", Shape::triangular, {0.5, 0.2, 0.7}}, u), InvalidParams);
  CHECK_THROWS_AS(validate_term({"x", Shape::triangular, {0.1, 0.2}}, u), InvalidParams);
  CHECK_THROWS_AS(validate_term({"x", Shape::gaussian, {0.0, 0.0}}, u), InvalidParams);
  CHECK_NOTHROW(validate_term({"x", Shape::trapezoidal, {0.0, 0.1, 0.2, 0.3}}, u));
}

TEST_CASE("implication") {
  const auto u = Universe::standard();
  const auto mf = sample(term(standard_terms(), "+M"), u);
  const auto clipped = implication(mf, ActivationWeight(0.4), Implication::mamdani);
  const auto scaled = implication(mf, ActivationWeight(0.4), Implication::larsen);
  CHECK(*std::max_element(clipped.values.begin(), clipped.values.end()) == doctest::Approx(0.4));
  CHECK(*std::max_element(scaled.values.begin(), scaled.values.end()) == doctest::Approx(0.4));
  CHECK(clipped[1500] == doctest::Approx(0.4));
  CHECK(scaled[1500] == doctest::Approx(0.4));
  CHECK(clipped[1400] == doctest::Approx(0.4));
  CHECK(scaled[1400] == doctest::Approx(0.4 * 0.6));
  CHECK_THROWS_AS(ActivationWeight(1.2), InvalidConfig);
  CHECK_THROWS_AS(ActivationWeight(-0.1), InvalidConfig);
}

TEST_CASE("aggregation operators") {
  CHECK(aggregate(0.3, 0.6, Aggregation::fmax) == 0.6);
  CHECK(aggregate(0.3, 0.6, Aggregation::algsum) == doctest::Approx(0.72));
  CHECK(aggregate(0.3, 0.6, Aggregation::esum) == doctest::Approx(0.9 / 1.18));
  CHECK(aggregate(0.3, 0.6, Aggregation::hsum) == doctest::Approx((0.9 - 0.36) / 0.82));
  CHECK(aggregate(1.0, 1.0, Aggregation::hsum) == 1.0);
  MembershipFunction a{{0.1, 0.2}};
  MembershipFunction b{{0.1}};
  CHECK_THROWS_AS(aggregate(a, b, Aggregation::fmax), LengthMismatch);
}

TEST_CASE("defuzzification methods on a single clipped term") {
  const auto u = Universe::standard();
  const auto mf = implication(sample(term(standard_terms(), "+M"), u), ActivationWeight(0.5), Implication::mamdani);
  CHECK(defuzzify(u, mf, Defuzzification::centroid) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(defuzzify(u, mf, Defuzzification::bisector) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(defuzzify(u, mf, Defuzzification::som) == doctest::Approx(0.375));
  CHECK(defuzzify(u, mf, Defuzzification::lom) == doctest::Approx(0.625));
  CHECK(defuzzify(u, mf, Defuzzification::mom) == doctest::Approx(0.5));
  CHECK_THROWS_AS(defuzzify(u, MembershipFunction{std::vector<double>(u.size(), 0.0)}, Defuzzification::centroid),
                  ZeroArea);
}

TEST_CASE("activation levels use every rater as denominator and drop no-causality") {
  const auto s = ingest::read_survey(test::data("survey_six.csv"));
  const auto a = activation_levels(s, {"C3", "C4"});
  CHECK(a.size() == 2);
  CHECK(a.at("-H") == doctest::Approx(1.0 / 6));
  CHECK(a.at("+VH") == doctest::Approx(0.5));
}

TEST_CASE("edge weight against an independent oracle") {
  const auto u = Universe::standard();
  const auto terms = standard_terms();
  const auto mfs = generate_memberships(u, terms);
  const double w = edge_weight(mfs, terms, {{"+H", 0.5}, {"+VH", 2.0 / 6}, {"+M", 1.0 / 6}}, u, {});
  CHECK(w == doctest::Approx(kC1C2).epsilon(1e-12));
  CHECK(edge_weight(mfs, terms, {}, u, {}) == 0.0);
  CHECK_THROWS_AS(edge_weight(mfs, terms, {{"+X", 0.5}}, u, {}), UnknownTerm);
}

TEST_CASE("weight matrix from the six-expert survey") {
  const auto s = ingest::read_survey(test::data("survey_six.csv"));
  const auto w = build_weight_matrix(s, Universe::standard(), standard_terms());
  CHECK(w.concepts() == std::vector<std::string>{"C1", "C2", "C3", "C4"});
  CHECK(w.at("C1", "C2") == doctest::Approx(kC1C2).epsilon(1e-12));
  CHECK(w.at("C2", "C1") == doctest::Approx(kC2C1).epsilon(1e-12));
  CHECK(w.at("C3", "C1") == doctest::Approx(kC3C1).epsilon(1e-12));
  CHECK(w.at("C3", "C4") == doctest::Approx(kC3C4).epsilon(1e-12));
  CHECK(w.at("C4", "C1") == 0.0);
  // Published counterparts, which the fixture approximates.
  CHECK(std::abs(w.at("C1", "C2") - 0.703218) < 0.005);
  CHECK(std::abs(w.at("C2", "C1") - 0.608308) < 0.005);
  CHECK(std::abs(w.at("C3", "C1") - 0.555732) < 0.005);
  CHECK(std::abs(w.at("C3", "C4") - 0.159091) < 0.005);
}

TEST_CASE("method flags change the built matrix") {
  const auto s = ingest::read_survey(test::data("survey_six.csv"));
  const auto centroid = build_weight_matrix(s, Universe::standard(), standard_terms());
  BuildOptions mom;
  mom.defuzzification = Defuzzification::mom;
  CHECK_FALSE(build_weight_matrix(s, Universe::standard(), standard_terms(), mom) == centroid);
  BuildOptions larsen;
  larsen.implication = Implication::larsen;
  larsen.aggregation = Aggregation::algsum;
  CHECK_FALSE(build_weight_matrix(s, Universe::standard(), standard_terms(), larsen) == centroid);
}

TEST_CASE("building from an empty survey is a schema error") {
  CHECK_THROWS_AS(build_weight_matrix({}, Universe::standard(), standard_terms()), SchemaError);
}

TEST_CASE("terms configuration file") {
  std::ifstream in(test::data("terms_standard.json"));
  const auto cfg = parse_terms_config(in);
  CHECK(cfg.universe.size() == 2001);
  REQUIRE(cfg.terms.size() == 10);
  CHECK(term(cfg.terms, "+H").params == std::vector<double>{0.5, 0.75, 1.0});

  std::istringstream custom(
      R"({"universe": {"lo": 0, "hi": 1, "step": 0.01},
          "terms": {"low": {"shape": "gaussian", "params": [0, 0.2]},
                    "high": {"shape": "trapezoidal", "params": [0.5, 0.7, 1, 1]}}})");
  const auto c = parse_terms_config(custom);
  CHECK(c.universe.size() == 101);
  CHECK(term(c.terms, "low").shape == Shape::gaussian);
  CHECK(term(c.terms, "high").shape == Shape::trapezoidal);

  std::istringstream bad(R"({"terms": {"x": {"shape": "triangular", "params": [1, 0, 2]}}})");
  CHECK_THROWS_AS(parse_terms_config(bad), InvalidParams);
}

TEST_CASE("method names parse case-insensitively") {
  CHECK(parse_implication("Mamdani") == Implication::mamdani);
  CHECK(parse_aggregation("fMax") == Aggregation::fmax);
  CHECK(parse_defuzzification("LOM") == Defuzzification::lom);
  CHECK_THROWS_AS(parse_aggregation("max"), InvalidConfig);
}
