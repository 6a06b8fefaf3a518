#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fcm/error.hpp"
#include "fcm/io.hpp"
#include "support.hpp"

using namespace fcm;

TEST_CASE("shortest round-trip number formatting") {
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(1.0) == "1");
  CHECK(io::format_number(-0.25) == "-0.25");
  const double x = 0.7502601055951177;
  CHECK(std::stod(io::format_number(x)) == x);
}

TEST_CASE("matrix CSV and JSON round-trip") {
  const auto w = test::map8();
  CHECK(w.at("C5", "C6") == -0.9);
  std::stringstream csv;
  io::write_matrix_csv(csv, w);
  CHECK(io::parse_matrix_csv(csv) == w);
  std::stringstream json;
  io::write_matrix_json(json, w);
  CHECK(io::parse_matrix_json(json) == w);
}

TEST_CASE("malformed matrices") {
  std::istringstream short_row(",A,B\nA,0,1\nB,0\n");
  CHECK_THROWS_AS(io::parse_matrix_csv(short_row), SchemaError);
  std::istringstream wrong_label(",A,B\nA,0,1\nC,0,0\n");
  CHECK_THROWS_AS(io::parse_matrix_csv(wrong_label), SchemaError);
  std::istringstream not_number(",A\nA,x\n");
  CHECK_THROWS_AS(io::parse_matrix_csv(not_number), SchemaError);
  std::istringstream ragged(R"({"concepts": ["A", "B"], "weights": [[0, 1]]})");
  CHECK_THROWS_AS(io::parse_matrix_json(ragged), SchemaError);
  CHECK_THROWS_AS(io::read_matrix(test::data("nope.csv")), FileNotFound);
}

TEST_CASE("state files") {
  const auto concepts = test::map8().concepts();
  const auto s = io::read_state(test::data("map8_state.json"), concepts);
  CHECK(s(0) == 1.0);
  CHECK(s(7) == 0.0);

  const auto dir = test::scratch_dir("state");
  std::ofstream(dir / "s.csv") << "C2,C1\n0.3,0.6\n";
  const auto c = io::read_state(dir / "s.csv", concepts);
  CHECK(c(0) == 0.6);
  CHECK(c(1) == 0.3);
  std::ofstream(dir / "bad.json") << R"({"C99": 1})";
  CHECK_THROWS_AS(io::read_state(dir / "bad.json", concepts), UnknownConcept);
}

TEST_CASE("trace writers") {
  const auto trace = sim::simulate(test::map8_state(), test::map8(), {});
  std::ostringstream wide;
  io::write_trace_csv(wide, trace);
  CHECK(wide.str().rfind("step,C1,C2,C3,C4,C5,C6,C7,C8\n0,1,1,0,0,0,0,0,0\n", 0) == 0);

  std::istringstream back(wide.str());
  const auto data = io::parse_data_csv(back);
  CHECK(data.concepts == trace.concepts);
  CHECK(data.steps() == 7);
  CHECK(data.rows(1, 0) == trace.rows[1](0));

  std::ostringstream longf;
  io::write_trace_long_csv(longf, trace);
  std::istringstream lines(longf.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) ++n;
  CHECK(n == 1 + 7 * 8);

  std::ostringstream json;
  io::write_trace_json(json, trace);
  const auto j = nlohmann::json::parse(json.str());
  CHECK(j["converged_at"] == 6);
  CHECK(j["rows"].size() == 7);
}

TEST_CASE("comparison table writers") {
  const std::vector<std::pair<std::string, intervention::ConceptValues>> rows = {{"baseline", {0, 0}},
                                                                                 {"x", {-1.5, 2}}};
  std::ostringstream csv;
  io::write_table_csv(csv, {"A", "B"}, rows);
  CHECK(csv.str() == "scenario,A,B\nbaseline,0,0\nx,-1.5,2\n");
  std::ostringstream json;
  io::write_table_json(json, {"A", "B"}, rows);
  CHECK(nlohmann::json::parse(json.str())["x"]["A"] == -1.5);
}

TEST_CASE("intervention and DOC files") {
  const auto specs = io::read_interventions(test::data("interventions.json"));
  REQUIRE(specs.size() == 3);
  CHECK(specs[0].weights.at("C2") == 0.5);
  CHECK(specs[2].effectiveness == 1.0);
  const auto docs = io::read_doc_ranges(test::data("water_tank_docs.json"));
  REQUIRE(docs.size() == 2);
  CHECK(docs[1].concept_id == "C5");
  CHECK(docs[1].max == 0.8);

  const auto dir = test::scratch_dir("specs");
  std::ofstream(dir / "bad.json") << R"([{"name": "x", "kind": "sometimes"}])";
  CHECK_THROWS_AS(io::read_interventions(dir / "bad.json"), SchemaError);
}

TEST_CASE("atomic writes leave no temporary file behind") {
  const auto dir = test::scratch_dir("atomic");
  io::write_file_atomic(dir / "a.txt", "hello");
  CHECK(io::read_text(dir / "a.txt") == "hello");
  io::write_file_atomic(dir / "a.txt", "again");
  CHECK(io::read_text(dir / "a.txt") == "again");
  CHECK_FALSE(std::filesystem::exists(dir / "a.txt.tmp"));
}
