#pragma once

// Expert survey ingestion: reading CSV/JSON ratings, sign-consistency checks
// across experts and per-edge rating entropy.

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace fcm::ingest {

/// Reserved term id for an explicit "no causal relationship" answer.
inline constexpr const char* kNoCausality = "no causality";

/// Standard eleven-point rating scale used when no term set is configured.
const std::vector<std::string>& default_term_ids();

struct Edge {
  std::string source;
  std::string target;

  auto operator<=>(const Edge&) const = default;
};

struct EdgeRating {
  std::string source;
  std::string target;
  std::string term;
  double endorsement = 1.0;

  Edge edge() const { return {source, target}; }
  bool operator==(const EdgeRating&) const = default;
};

struct ExpertRatings {
  std::string expert_id;
  std::vector<EdgeRating> ratings;

  bool operator==(const ExpertRatings&) const = default;
};

struct ExpertSurvey {
  std::vector<ExpertRatings> experts;

  bool empty() const noexcept { return experts.empty(); }
  bool operator==(const ExpertSurvey&) const = default;
};

enum class Valence { negative, neutral, positive };

/// Sign prefix of a term id: "-..." negative, "+..." positive, otherwise neutral.
Valence valence_of(const std::string& term);

enum class SurveyFormat { csv, json };

struct SurveyReadOptions {
  SurveyFormat format = SurveyFormat::csv;
  std::string concept_separator = "->";
  char cell_separator = ';';
  /// Terms accepted in addition to the reserved no-causality marker.
  std::vector<std::string> term_ids = default_term_ids();
};

/// Reads a survey. Term columns are matched case-insensitively against
/// `term_ids` and stored under their canonical spelling; "NA" and
/// "no causality" both map to kNoCausality.
///
/// CSV accepts two layouts, chosen from the first header cell:
///  - long: `From->To;-VH;...;+VH` (optionally preceded by an `Expert` column),
///    one row per (expert, edge) in expert-major order. Without an Expert
///    column a new expert starts whenever an edge repeats; ids are `Expert<k>`.
///  - wide: one column per edge (`C1->C2;C2->C1;...`), one row per expert whose
///    cells hold term ids; the expert id is the row index.
///
/// Throws FileNotFound, SchemaError or UnknownTerm.
ExpertSurvey read_survey(const std::filesystem::path& path, const SurveyReadOptions& options = {});
ExpertSurvey parse_survey_csv(std::istream& in, const SurveyReadOptions& options = {});
ExpertSurvey parse_survey_json(std::istream& in, const SurveyReadOptions& options = {});

/// Canonical JSON: expert id -> array of {"from", "to", <term>: endorsement...}.
void write_survey_json(std::ostream& out, const ExpertSurvey& survey,
                       const std::vector<std::string>& term_ids = default_term_ids());

/// Distinct edges in order of first appearance.
std::vector<Edge> edges_of(const ExpertSurvey& survey);

/// Distinct concept ids in order of first appearance (source before target).
std::vector<std::string> concepts_of(const ExpertSurvey& survey);

/// Edges that some experts did not rate at all (no row, not even "no causality").
std::vector<Edge> partially_rated_edges(const ExpertSurvey& survey);

struct Inconsistency {
  Edge edge;
  std::vector<std::string> experts_positive;
  std::vector<std::string> experts_negative;
};

struct InconsistencyReport {
  std::vector<Inconsistency> entries;
  bool empty() const noexcept { return entries.empty(); }
};

InconsistencyReport check_consistency(const ExpertSurvey& survey);

/// CSV with columns source,target,expert,term,valence; one line per signed
/// rating on each inconsistent edge.
void write_inconsistency_csv(std::ostream& out, const ExpertSurvey& survey, const InconsistencyReport& report);

/// Shannon entropy (bits) of the term distribution for every edge, with
/// "no causality" counted as its own category. Throws EmptyEdge.
std::map<Edge, double> edge_entropy(const ExpertSurvey& survey);

/// Entropy of a discrete distribution given by (unnormalized) non-negative weights.
double entropy_bits(const std::vector<double>& weights);

}  // namespace fcm::ingest
