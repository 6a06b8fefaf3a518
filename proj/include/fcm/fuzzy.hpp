#pragma once

// Qualitative-to-quantitative pipeline: membership functions over a sampled
// universe, implication, aggregation, defuzzification, and the per-edge build
// of a weight matrix from an expert survey.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fcm/ingest.hpp"
#include "fcm/weight_matrix.hpp"

namespace fcm::fuzzy {

/// Evenly spaced samples covering [lo, hi] inclusive.
class Universe {
 public:
  /// Throws InvalidConfig unless lo < hi, step > 0 and (hi - lo) is a whole
  /// number of steps (within 1e-9 of a step).
  Universe(double lo, double hi, double step);

  /// [-1, 1] with step 0.001.
  static Universe standard();

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const std::vector<double>& samples() const noexcept { return samples_; }

 private:
  double lo_;
  double hi_;
  double step_;
  std::vector<double> samples_;
};

enum class Shape { triangular, gaussian, trapezoidal };

struct LinguisticTerm {
  std::string id;
  Shape shape = Shape::triangular;
  /// triangular [a,b,c]; trapezoidal [a,b,c,d]; gaussian [mean, sigma].
  std::vector<double> params;
};

using LinguisticTermSet = std::vector<LinguisticTerm>;

/// The ten signed triangular terms over [-1, 1], "-VH" through "+VH".
LinguisticTermSet standard_terms();

/// Term ids of `terms` in order, suitable for SurveyReadOptions::term_ids.
std::vector<std::string> term_ids(const LinguisticTermSet& terms);

/// Throws InvalidParams when the parameters do not fit the shape or leave the universe.
void validate_term(const LinguisticTerm& term, const Universe& universe);

/// Membership degree of a single point.
double membership(const LinguisticTerm& term, double x);

struct MembershipFunction {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const MembershipFunction&) const = default;
};

MembershipFunction sample(const LinguisticTerm& term, const Universe& universe);

std::map<std::string, MembershipFunction> generate_memberships(const Universe& universe,
                                                              const LinguisticTermSet& terms);

/// Proportion of experts endorsing a term for an edge; always within [0,1].
class ActivationWeight {
 public:
  /// Throws InvalidConfig outside [0,1].
  explicit ActivationWeight(double weight);
  double value() const noexcept { return weight_; }

 private:
  double weight_;
};

enum class Implication { mamdani, larsen };
enum class Aggregation { fmax, algsum, esum, hsum };
enum class Defuzzification { centroid, bisector, mom, som, lom };

MembershipFunction implication(const MembershipFunction& mf, ActivationWeight weight, Implication method);

/// Pointwise t-conorm of two activations.
double aggregate(double x, double y, Aggregation method);
/// Throws LengthMismatch when the functions come from different universes.
MembershipFunction aggregate(const MembershipFunction& x, const MembershipFunction& y, Aggregation method);

/// Crisp value of `mf` over `universe` using discrete sample sums. Throws
/// ZeroArea when mf is identically zero and LengthMismatch on size mismatch.
double defuzzify(const Universe& universe, const MembershipFunction& mf, Defuzzification method);

struct BuildOptions {
  Implication implication = Implication::mamdani;
  Aggregation aggregation = Aggregation::fmax;
  Defuzzification defuzzification = Defuzzification::centroid;
};

/// Defuzzified weight of one edge given per-term activation levels. Terms are
/// activated and folded in term-set order; activations of zero are skipped.
/// Returns 0 when nothing is activated.
double edge_weight(const std::map<std::string, MembershipFunction>& memberships, const LinguisticTermSet& terms,
                   const std::map<std::string, double>& activations, const Universe& universe,
                   const BuildOptions& options);

/// Per-term endorsement proportions for an edge. The denominator counts every
/// expert who rated the edge (including "no causality"); the no-causality
/// marker itself is not returned.
std::map<std::string, double> activation_levels(const ingest::ExpertSurvey& survey, const ingest::Edge& edge);

/// Builds the weight matrix for every rated edge. Rows/columns follow first
/// appearance of concepts in the survey; unrated cells are 0. Throws
/// SchemaError for an empty survey and UnknownTerm when a rating uses a term
/// that is not in `terms`.
WeightMatrix build_weight_matrix(const ingest::ExpertSurvey& survey, const Universe& universe,
                                 const LinguisticTermSet& terms, const BuildOptions& options = {});

/// Terms/universe configuration file:
/// {"universe": {"lo": -1, "hi": 1, "step": 0.001},
///  "terms": {"-VH": {"shape": "triangular", "params": [-1, -1, -0.75]}, ...}}
/// A bare array value is shorthand for a triangular term.
struct TermsConfig {
  Universe universe = Universe::standard();
  LinguisticTermSet terms = standard_terms();
};

TermsConfig parse_terms_config(std::istream& in);

Implication parse_implication(const std::string& name);
Aggregation parse_aggregation(const std::string& name);
Defuzzification parse_defuzzification(const std::string& name);
const char* to_string(Implication method);
const char* to_string(Aggregation method);
const char* to_string(Defuzzification method);

}  // namespace fcm::fuzzy
