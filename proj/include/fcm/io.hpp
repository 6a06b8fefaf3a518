#pragma once

// File formats shared by the library and the command-line tool.
//
// Matrix CSV:  ",C1,C2,..." header, then one row per source concept.
// Matrix JSON: {"concepts": [...], "weights": [[row of source 0], ...]}.
// State:       JSON object {"C1": 0.4, ...} or CSV with a concept header and one value row.
// Data CSV:    concept header, one row per time step.
// Numbers are written in shortest round-trip form.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fcm/hebbian.hpp"
#include "fcm/ingest.hpp"
#include "fcm/intervention.hpp"
#include "fcm/rcga.hpp"
#include "fcm/simulation.hpp"
#include "fcm/weight_matrix.hpp"

namespace fcm::io {

std::string format_number(double v);

/// Whole file as text. Throws FileNotFound.
std::string read_text(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

bool has_json_extension(const std::filesystem::path& path);

/// Comma-separated cells with surrounding whitespace removed.
std::vector<std::string> split_csv_line(const std::string& line);

/// Throws SchemaError on malformed content.
double parse_number(const std::string& cell, std::size_t row);

WeightMatrix parse_matrix_csv(std::istream& in);
WeightMatrix parse_matrix_json(std::istream& in);
/// JSON when the extension is .json, CSV otherwise.
WeightMatrix read_matrix(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& out, const WeightMatrix& w);
void write_matrix_json(std::ostream& out, const WeightMatrix& w);

/// Concepts absent from the file start at 0; unknown ids throw UnknownConcept.
StateVector read_state(const std::filesystem::path& path, const std::vector<std::string>& concepts);

rcga::LongitudinalData parse_data_csv(std::istream& in);
rcga::LongitudinalData read_data(const std::filesystem::path& path);
void write_data_csv(std::ostream& out, const rcga::LongitudinalData& data);

/// "step,C1,..." with step counted from 0.
void write_trace_csv(std::ostream& out, const sim::SimulationTrace& trace);
/// Plot-ready "step,concept,value".
void write_trace_long_csv(std::ostream& out, const sim::SimulationTrace& trace);
void write_trace_json(std::ostream& out, const sim::SimulationTrace& trace);

/// {"weights": {...}, "converged_at": k|null, "termination": ..., "doc_trace": {"C1": [...], ...}}
void write_outcome_json(std::ostream& out, const hebbian::LearningOutcome& outcome, const hebbian::DocRanges& docs);

void write_entropy_csv(std::ostream& out, const std::map<ingest::Edge, double>& entropy);
void write_entropy_json(std::ostream& out, const std::map<ingest::Edge, double>& entropy);

/// One row per scenario: "scenario,C1,...".
void write_table_csv(std::ostream& out, const std::vector<std::string>& concepts,
                     const std::vector<std::pair<std::string, intervention::ConceptValues>>& rows);
void write_table_json(std::ostream& out, const std::vector<std::string>& concepts,
                      const std::vector<std::pair<std::string, intervention::ConceptValues>>& rows);

/// [{"name": ..., "kind": "continuous", "weights": {...}, "effectiveness": 1},
///  {"name": ..., "kind": "single_shot", "state": {...}}]
std::vector<intervention::InterventionSpec> read_interventions(const std::filesystem::path& path);

/// {"C1": [min, max], ...} in file order.
hebbian::DocRanges read_doc_ranges(const std::filesystem::path& path);

}  // namespace fcm::io
