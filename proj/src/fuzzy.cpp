#include "fcm/fuzzy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <set>

#include <json.hpp>

#include "fcm/error.hpp"

namespace fcm::fuzzy {

namespace {

constexpr double kMaxTolerance = 1e-12;

bool is_no_causality_id(const std::string& id) {
  std::string lower(id);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  return lower == ingest::kNoCausality || lower == "na";
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw LengthMismatch(a, b);
}

}  // namespace

Universe::Universe(double lo, double hi, double step) : lo_(lo), hi_(hi), step_(step) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw InvalidConfig("universe requires lo < hi");
  if (!(std::isfinite(step) && step > 0.0)) throw InvalidConfig("universe step must be positive");
  const double intervals = (hi - lo) / step;
  const auto n = std::llround(intervals);
  if (n < 1 || std::abs(intervals - static_cast<double>(n)) > 1e-9 * std::max(1.0, intervals)) {
    throw InvalidConfig("universe range is not a whole number of steps");
  }
  samples_.resize(static_cast<std::size_t>(n) + 1);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] = lo + static_cast<double>(i) * step;
  samples_.back() = hi;
}

Universe Universe::standard() { return Universe(-1.0, 1.0, 0.001); }

LinguisticTermSet standard_terms() {
  return {
      {"-VH", Shape::triangular, {-1.0, -1.0, -0.75}}, {"-H", Shape::triangular, {-1.0, -0.75, -0.5}},
      {"-M", Shape::triangular, {-0.75, -0.5, -0.25}}, {"-L", Shape::triangular, {-0.5, -0.25, 0.0}},
      {"-VL", Shape::triangular, {-0.25, 0.0, 0.0}},   {"+VL", Shape::triangular, {0.0, 0.0, 0.25}},
      {"+L", Shape::triangular, {0.0, 0.25, 0.5}},     {"+M", Shape::triangular, {0.25, 0.5, 0.75}},
      {"+H", Shape::triangular, {0.5, 0.75, 1.0}},     {"+VH", Shape::triangular, {0.75, 1.0, 1.0}},
  };
}

std::vector<std::string> term_ids(const LinguisticTermSet& terms) {
  std::vector<std::string> ids;
  ids.reserve(terms.size());
  for (const auto& t : terms) ids.push_back(t.id);
  return ids;
}

void validate_term(const LinguisticTerm& term, const Universe& universe) {
  const auto& p = term.params;
  for (double v : p) {
    if (!std::isfinite(v)) throw InvalidParams(term.id, "non-finite parameter");
  }
  const auto inside = [&](double v) { return v >= universe.lo() - 1e-12 && v <= universe.hi() + 1e-12; };
  switch (term.shape) {
    case Shape::triangular:
      if (p.size() != 3) throw InvalidParams(term.id, "triangular needs [a, b, c]");
      if (!(p[0] <= p[1] && p[1] <= p[2])) throw InvalidParams(term.id, "triangular needs a <= b <= c");
      if (!(inside(p[0]) && inside(p[1]) && inside(p[2]))) throw InvalidParams(term.id, "outside the universe");
      break;
    case Shape::trapezoidal:
      if (p.size() != 4) throw InvalidParams(term.id, "trapezoidal needs [a, b, c, d]");
      if (!(p[0] <= p[1] && p[1] <= p[2] && p[2] <= p[3])) {
        throw InvalidParams(term.id, "trapezoidal needs a <= b <= c <= d");
      }
      break;
    case Shape::gaussian:
      if (p.size() != 2) throw InvalidParams(term.id, "gaussian needs [mean, sigma]");
      if (!(p[1] > 0.0)) throw InvalidParams(term.id, "gaussian sigma must be positive");
      break;
  }
}

double membership(const LinguisticTerm& term, double x) {
  const auto& p = term.params;
  switch (term.shape) {
    case Shape::triangular: {
      const double a = p[0], b = p[1], c = p[2];
      if (x == b) return 1.0;
      if (x <= a || x >= c) return 0.0;
      return x < b ? (x - a) / (b - a) : (c - x) / (c - b);
    }
    case Shape::trapezoidal: {
      const double a = p[0], b = p[1], c = p[2], d = p[3];
      if (x >= b && x <= c) return 1.0;
      if (x <= a || x >= d) return 0.0;
      return x < b ? (x - a) / (b - a) : (d - x) / (d - c);
    }
    case Shape::gaussian: {
      const double z = (x - p[0]) / p[1];
      return std::exp(-0.5 * z * z);
    }
  }
  return 0.0;
}

MembershipFunction sample(const LinguisticTerm& term, const Universe& universe) {
  validate_term(term, universe);
  MembershipFunction mf;
  mf.values.reserve(universe.size());
  for (double x : universe.samples()) mf.values.push_back(membership(term, x));
  return mf;
}

std::map<std::string, MembershipFunction> generate_memberships(const Universe& universe,
                                                              const LinguisticTermSet& terms) {
  std::map<std::string, MembershipFunction> out;
  for (const auto& term : terms) {
    if (!out.emplace(term.id, sample(term, universe)).second) throw InvalidParams(term.id, "duplicate term id");
  }
  return out;
}

ActivationWeight::ActivationWeight(double weight) : weight_(weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) throw InvalidConfig("activation weight outside [0,1]");
}

MembershipFunction implication(const MembershipFunction& mf, ActivationWeight weight, Implication method) {
  MembershipFunction out;
  out.values.reserve(mf.size());
  const double w = weight.value();
  for (double v : mf.values) out.values.push_back(method == Implication::mamdani ? std::min(v, w) : v * w);
  return out;
}

double aggregate(double x, double y, Aggregation method) {
  switch (method) {
    case Aggregation::fmax:
      return std::max(x, y);
    case Aggregation::algsum:
      return x + y - x * y;
    case Aggregation::esum:
      return (x + y) / (1.0 + x * y);
    case Aggregation::hsum: {
      const double denom = 1.0 - x * y;
      // Limit of the Hamacher sum as x, y -> 1.
      if (denom == 0.0) return 1.0;
      return (x + y - 2.0 * x * y) / denom;
    }
  }
  return 0.0;
}

MembershipFunction aggregate(const MembershipFunction& x, const MembershipFunction& y, Aggregation method) {
  require_same_size(x.size(), y.size());
  MembershipFunction out;
  out.values.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.values[i] = aggregate(x[i], y[i], method);
  return out;
}

double defuzzify(const Universe& universe, const MembershipFunction& mf, Defuzzification method) {
  require_same_size(universe.size(), mf.size());
  const auto& xs = universe.samples();

  double area = 0.0;
  double peak = 0.0;
  for (double v : mf.values) {
    area += v;
    peak = std::max(peak, v);
  }
  if (!(area > 0.0)) throw ZeroArea();

  switch (method) {
    case Defuzzification::centroid: {
      double moment = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) moment += xs[i] * mf[i];
      return moment / area;
    }
    case Defuzzification::bisector: {
      const double half = 0.5 * area;
      double running = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        running += mf[i];
        if (running >= half) return xs[i];
      }
      return xs.back();
    }
    case Defuzzification::mom:
    case Defuzzification::som:
    case Defuzzification::lom: {
      double first = 0.0, last = 0.0, sum = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (mf[i] < peak - kMaxTolerance) continue;
        if (count == 0) first = xs[i];
        last = xs[i];
        sum += xs[i];
        ++count;
      }
      if (method == Defuzzification::som) return first;
      if (method == Defuzzification::lom) return last;
      return sum / static_cast<double>(count);
    }
  }
  return 0.0;
}

double edge_weight(const std::map<std::string, MembershipFunction>& memberships, const LinguisticTermSet& terms,
                   const std::map<std::string, double>& activations, const Universe& universe,
                   const BuildOptions& options) {
  for (const auto& [term, level] : activations) {
    if (memberships.find(term) == memberships.end()) throw UnknownTerm(term);
  }

  MembershipFunction folded;
  bool any = false;
  for (const auto& term : terms) {
    const auto it = activations.find(term.id);
    if (it == activations.end() || it->second <= 0.0) continue;
    auto activated =
        implication(memberships.at(term.id), ActivationWeight(std::min(1.0, it->second)), options.implication);
    folded = any ? aggregate(folded, activated, options.aggregation) : std::move(activated);
    any = true;
  }
  if (!any) return 0.0;
  return defuzzify(universe, folded, options.defuzzification);
}

std::map<std::string, double> activation_levels(const ingest::ExpertSurvey& survey, const ingest::Edge& edge) {
  std::map<std::string, double> mass;
  std::size_t raters = 0;
  for (const auto& expert : survey.experts) {
    bool rated = false;
    for (const auto& r : expert.ratings) {
      if (r.edge() != edge) continue;
      rated = true;
      if (r.term != ingest::kNoCausality) mass[r.term] += r.endorsement;
    }
    if (rated) ++raters;
  }
  if (raters == 0) throw EmptyEdge(edge.source, edge.target);
  for (auto& [term, m] : mass) m /= static_cast<double>(raters);
  return mass;
}

WeightMatrix build_weight_matrix(const ingest::ExpertSurvey& survey, const Universe& universe,
                                 const LinguisticTermSet& terms, const BuildOptions& options) {
  if (survey.empty()) throw SchemaError(0, "survey contains no experts");
  const auto edges = ingest::edges_of(survey);
  if (edges.empty()) throw SchemaError(0, "survey contains no rated edges");

  LinguisticTermSet active_terms;
  for (const auto& t : terms) {
    if (!is_no_causality_id(t.id)) active_terms.push_back(t);
  }
  const auto memberships = generate_memberships(universe, active_terms);

  WeightMatrix matrix(ingest::concepts_of(survey));
  for (const auto& edge : edges) {
    const auto levels = activation_levels(survey, edge);
    matrix(matrix.index_of(edge.source), matrix.index_of(edge.target)) =
        edge_weight(memberships, active_terms, levels, universe, options);
  }
  return matrix;
}

TermsConfig parse_terms_config(std::istream& in) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::ordered_json::parse_error& e) {
    throw InvalidConfig(std::string("terms config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidConfig("terms config must be a JSON object");

  TermsConfig config;
  try {
    if (doc.contains("universe")) {
      const auto& u = doc["universe"];
      config.universe = Universe(u.value("lo", -1.0), u.value("hi", 1.0), u.value("step", 0.001));
    }
    if (doc.contains("terms")) {
      config.terms.clear();
      for (const auto& [id, spec] : doc["terms"].items()) {
        LinguisticTerm term{id, Shape::triangular, {}};
        if (spec.is_array()) {
          term.params = spec.get<std::vector<double>>();
        } else {
          const auto shape = spec.value("shape", std::string("triangular"));
          if (shape == "triangular" || shape == "trimf") {
            term.shape = Shape::triangular;
          } else if (shape == "trapezoidal" || shape == "trapmf") {
            term.shape = Shape::trapezoidal;
          } else if (shape == "gaussian" || shape == "gaussmf") {
            term.shape = Shape::gaussian;
          } else {
            throw InvalidParams(id, "unknown shape '" + shape + "'");
          }
          term.params = spec.at("params").get<std::vector<double>>();
        }
        validate_term(term, config.universe);
        config.terms.push_back(std::move(term));
      }
    }
  } catch (const nlohmann::ordered_json::exception& e) {
    throw InvalidConfig(std::string("malformed terms config: ") + e.what());
  }
  return config;
}

Implication parse_implication(const std::string& name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  if (n == "mamdani") return Implication::mamdani;
  if (n == "larsen") return Implication::larsen;
  throw InvalidConfig("unknown implication method '" + name + "'");
}

Aggregation parse_aggregation(const std::string& name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  if (n == "fmax") return Aggregation::fmax;
  if (n == "algsum") return Aggregation::algsum;
  if (n == "esum") return Aggregation::esum;
  if (n == "hsum") return Aggregation::hsum;
  throw InvalidConfig("unknown aggregation method '" + name + "'");
}

Defuzzification parse_defuzzification(const std::string& name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  if (n == "centroid") return Defuzzification::centroid;
  if (n == "bisector") return Defuzzification::bisector;
  if (n == "mom") return Defuzzification::mom;
  if (n == "som") return Defuzzification::som;
  if (n == "lom") return Defuzzification::lom;
  throw InvalidConfig("unknown defuzzification method '" + name + "'");
}

const char* to_string(Implication method) { return method == Implication::mamdani ? "mamdani" : "larsen"; }

const char* to_string(Aggregation method) {
  switch (method) {
    case Aggregation::fmax: return "fmax";
    case Aggregation::algsum: return "algsum";
    case Aggregation::esum: return "esum";
    case Aggregation::hsum: return "hsum";
  }
  return "?";
}

const char* to_string(Defuzzification method) {
  switch (method) {
    case Defuzzification::centroid: return "centroid";
    case Defuzzification::bisector: return "bisector";
    case Defuzzification::mom: return "mom";
    case Defuzzification::som: return "som";
    case Defuzzification::lom: return "lom";
  }
  return "?";
}

}  // namespace fcm::fuzzy
