#include "fcm/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fcm/error.hpp"

namespace fcm::ingest {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_cells(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string_view rest(line);
  while (true) {
    const auto pos = rest.find(sep);
    cells.push_back(trim(rest.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  return cells;
}

bool is_no_causality(const std::string& term) {
  const auto t = lower(term);
  return t == kNoCausality || t == "na" || t == "nc";
}

class TermResolver {
 public:
  explicit TermResolver(const std::vector<std::string>& ids) {
    for (const auto& id : ids) {
      if (!is_no_causality(id)) by_lower_.emplace(lower(id), id);
    }
  }

  std::optional<std::string> find(const std::string& raw) const {
    if (is_no_causality(raw)) return std::string(kNoCausality);
    if (auto it = by_lower_.find(lower(raw)); it != by_lower_.end()) return it->second;
    return std::nullopt;
  }

  std::string resolve(const std::string& raw) const {
    if (auto t = find(raw)) return *t;
    throw UnknownTerm(raw);
  }

 private:
  std::map<std::string, std::string> by_lower_;
};

std::optional<Edge> split_edge(const std::string& cell, const std::string& sep) {
  if (sep.empty()) return std::nullopt;
  const auto pos = cell.find(sep);
  if (pos == std::string::npos) return std::nullopt;
  Edge e{trim(cell.substr(0, pos)), trim(cell.substr(pos + sep.size()))};
  if (e.source.empty() || e.target.empty() || e.target.find(sep) != std::string::npos) return std::nullopt;
  return e;
}

double parse_endorsement(const std::string& cell, std::size_t row) {
  if (cell.empty()) return 0.0;
  double v = 0.0;
  const auto* begin = cell.data();
  const auto* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) throw SchemaError(row, "cannot parse endorsement '" + cell + "'");
  if (!(v >= 0.0 && v <= 1.0)) throw SchemaError(row, "endorsement '" + cell + "' outside [0,1]");
  return v;
}

void require_unique_experts(const ExpertSurvey& survey) {
  std::set<std::string> ids;
  for (std::size_t i = 0; i < survey.experts.size(); ++i) {
    if (!ids.insert(survey.experts[i].expert_id).second) {
      throw SchemaError(i + 1, "duplicate expert id '" + survey.experts[i].expert_id + "'");
    }
  }
}

ExpertSurvey parse_long_csv(std::istream& in, const std::vector<std::string>& header, bool has_expert_column,
                            const SurveyReadOptions& options, std::size_t& line_no) {
  const TermResolver resolver(options.term_ids);
  const std::size_t first_term = has_expert_column ? 2 : 1;
  std::vector<std::string> terms;
  for (std::size_t c = first_term; c < header.size(); ++c) {
    if (header[c].empty()) throw SchemaError(1, "empty term column header");
    terms.push_back(resolver.resolve(header[c]));
  }

  ExpertSurvey survey;
  std::set<Edge> seen_in_block;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line, options.cell_separator);
    if (cells.size() != header.size()) {
      throw SchemaError(line_no, "expected " + std::to_string(header.size()) + " cells, found " +
                                     std::to_string(cells.size()));
    }
    const auto edge = split_edge(cells[first_term - 1], options.concept_separator);
    if (!edge) {
      throw SchemaError(line_no, "edge cell '" + cells[first_term - 1] + "' is not of the form source" +
                                     options.concept_separator + "target");
    }

    if (has_expert_column) {
      const auto& id = cells[0];
      if (id.empty()) throw SchemaError(line_no, "empty expert id");
      if (survey.experts.empty() || survey.experts.back().expert_id != id) {
        for (const auto& e : survey.experts) {
          if (e.expert_id == id) throw SchemaError(line_no, "rows of expert '" + id + "' are not contiguous");
        }
        survey.experts.push_back({id, {}});
        seen_in_block.clear();
      }
      if (!seen_in_block.insert(*edge).second) throw SchemaError(line_no, "duplicate edge for expert '" + id + "'");
    } else if (survey.experts.empty() || seen_in_block.count(*edge) > 0) {
      survey.experts.push_back({"Expert" + std::to_string(survey.experts.size()), {}});
      seen_in_block.clear();
      seen_in_block.insert(*edge);
    } else {
      seen_in_block.insert(*edge);
    }

    auto& ratings = survey.experts.back().ratings;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const double v = parse_endorsement(cells[first_term + t], line_no);
      if (v > 0.0) ratings.push_back({edge->source, edge->target, terms[t], v});
    }
  }
  return survey;
}

ExpertSurvey parse_wide_csv(std::istream& in, const std::vector<std::string>& header,
                            const SurveyReadOptions& options, std::size_t& line_no) {
  const TermResolver resolver(options.term_ids);
  std::vector<Edge> edges;
  std::set<Edge> distinct;
  for (const auto& cell : header) {
    const auto edge = split_edge(cell, options.concept_separator);
    if (!edge) throw SchemaError(1, "header cell '" + cell + "' is not an edge");
    if (!distinct.insert(*edge).second) throw SchemaError(1, "duplicate edge column '" + cell + "'");
    edges.push_back(*edge);
  }

  ExpertSurvey survey;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line, options.cell_separator);
    if (cells.size() != header.size()) {
      throw SchemaError(line_no, "expected " + std::to_string(header.size()) + " cells, found " +
                                     std::to_string(cells.size()));
    }
    ExpertRatings expert{std::to_string(survey.experts.size()), {}};
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].empty()) continue;
      expert.ratings.push_back({edges[c].source, edges[c].target, resolver.resolve(cells[c]), 1.0});
    }
    survey.experts.push_back(std::move(expert));
  }
  return survey;
}

}  // namespace

const std::vector<std::string>& default_term_ids() {
  static const std::vector<std::string> ids = {"-VH", "-H", "-M", "-L", "-VL", "+VL", "+L", "+M", "+H", "+VH"};
  return ids;
}

Valence valence_of(const std::string& term) {
  if (term.empty()) return Valence::neutral;
  if (term.front() == '-') return Valence::negative;
  if (term.front() == '+') return Valence::positive;
  return Valence::neutral;
}

ExpertSurvey parse_survey_csv(std::istream& in, const SurveyReadOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw SchemaError(line_no, "missing header row");

  auto header = split_cells(line, options.cell_separator);
  const bool has_expert_column = lower(header.front()) == "expert";
  const std::size_t edge_col = has_expert_column ? 1 : 0;
  if (edge_col >= header.size()) throw SchemaError(line_no, "header has no edge column");

  const auto edge_header = split_edge(header[edge_col], options.concept_separator);
  const bool long_layout = edge_header && lower(edge_header->source) == "from" && lower(edge_header->target) == "to";
  if (long_layout) return parse_long_csv(in, header, has_expert_column, options, line_no);
  if (has_expert_column) throw SchemaError(line_no, "Expert column requires a From" + options.concept_separator + "To column");
  return parse_wide_csv(in, header, options, line_no);
}

ExpertSurvey parse_survey_json(std::istream& in, const SurveyReadOptions& options) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw SchemaError(0, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError(0, "top level must be an object keyed by expert id");

  const TermResolver resolver(options.term_ids);
  ExpertSurvey survey;
  std::size_t row = 0;
  for (const auto& [expert_id, rows] : doc.items()) {
    if (!rows.is_array()) throw SchemaError(row, "ratings of expert '" + expert_id + "' must be an array");
    ExpertRatings expert{expert_id, {}};
    std::set<Edge> seen;
    for (const auto& entry : rows) {
      ++row;
      if (!entry.is_object()) throw SchemaError(row, "rating must be an object");
      if (!entry.contains("from") || !entry["from"].is_string() || !entry.contains("to") || !entry["to"].is_string()) {
        throw SchemaError(row, "rating requires string fields 'from' and 'to'");
      }
      Edge edge{entry["from"].get<std::string>(), entry["to"].get<std::string>()};
      if (edge.source.empty() || edge.target.empty()) throw SchemaError(row, "empty concept id");
      if (!seen.insert(edge).second) throw SchemaError(row, "duplicate edge for expert '" + expert_id + "'");
      for (const auto& [key, value] : entry.items()) {
        if (key == "from" || key == "to") continue;
        const auto term = resolver.resolve(key);
        double v = 0.0;
        if (value.is_number()) {
          v = value.get<double>();
        } else if (value.is_boolean()) {
          v = value.get<bool>() ? 1.0 : 0.0;
        } else if (!value.is_null()) {
          throw SchemaError(row, "endorsement of '" + key + "' must be numeric");
        }
        if (!(v >= 0.0 && v <= 1.0)) throw SchemaError(row, "endorsement of '" + key + "' outside [0,1]");
        if (v > 0.0) expert.ratings.push_back({edge.source, edge.target, term, v});
      }
    }
    survey.experts.push_back(std::move(expert));
  }
  require_unique_experts(survey);
  return survey;
}

ExpertSurvey read_survey(const std::filesystem::path& path, const SurveyReadOptions& options) {
  if (!std::filesystem::is_regular_file(path)) throw FileNotFound(path.string());
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());
  return options.format == SurveyFormat::json ? parse_survey_json(in, options) : parse_survey_csv(in, options);
}

void write_survey_json(std::ostream& out, const ExpertSurvey& survey, const std::vector<std::string>& term_ids) {
  std::vector<std::string> columns;
  for (const auto& t : term_ids) {
    if (!is_no_causality(t)) columns.push_back(t);
  }
  columns.emplace_back(kNoCausality);

  ordered_json doc = ordered_json::object();
  for (const auto& expert : survey.experts) {
    ordered_json rows = ordered_json::array();
    std::vector<Edge> order;
    std::map<Edge, std::map<std::string, double>> cells;
    for (const auto& r : expert.ratings) {
      if (cells.find(r.edge()) == cells.end()) order.push_back(r.edge());
      cells[r.edge()][r.term] += r.endorsement;
    }
    for (const auto& edge : order) {
      ordered_json row;
      row["from"] = edge.source;
      row["to"] = edge.target;
      const auto& values = cells[edge];
      for (const auto& c : columns) {
        const auto it = values.find(c);
        row[c] = it == values.end() ? 0.0 : it->second;
      }
      for (const auto& [term, v] : values) {
        if (!row.contains(term)) row[term] = v;
      }
      rows.push_back(std::move(row));
    }
    doc[expert.expert_id] = std::move(rows);
  }
  out << doc.dump(2) << '\n';
}

std::vector<Edge> edges_of(const ExpertSurvey& survey) {
  std::vector<Edge> order;
  std::set<Edge> seen;
  for (const auto& expert : survey.experts) {
    for (const auto& r : expert.ratings) {
      if (seen.insert(r.edge()).second) order.push_back(r.edge());
    }
  }
  return order;
}

std::vector<std::string> concepts_of(const ExpertSurvey& survey) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& edge : edges_of(survey)) {
    if (seen.insert(edge.source).second) order.push_back(edge.source);
    if (seen.insert(edge.target).second) order.push_back(edge.target);
  }
  return order;
}

std::vector<Edge> partially_rated_edges(const ExpertSurvey& survey) {
  std::vector<Edge> partial;
  for (const auto& edge : edges_of(survey)) {
    const auto raters = std::count_if(survey.experts.begin(), survey.experts.end(), [&](const ExpertRatings& e) {
      return std::any_of(e.ratings.begin(), e.ratings.end(), [&](const EdgeRating& r) { return r.edge() == edge; });
    });
    if (static_cast<std::size_t>(raters) < survey.experts.size()) partial.push_back(edge);
  }
  return partial;
}

InconsistencyReport check_consistency(const ExpertSurvey& survey) {
  InconsistencyReport report;
  for (const auto& edge : edges_of(survey)) {
    Inconsistency entry{edge, {}, {}};
    for (const auto& expert : survey.experts) {
      bool pos = false;
      bool neg = false;
      for (const auto& r : expert.ratings) {
        if (r.edge() != edge) continue;
        const auto v = valence_of(r.term);
        pos = pos || v == Valence::positive;
        neg = neg || v == Valence::negative;
      }
      if (pos) entry.experts_positive.push_back(expert.expert_id);
      if (neg) entry.experts_negative.push_back(expert.expert_id);
    }
    if (!entry.experts_positive.empty() && !entry.experts_negative.empty()) report.entries.push_back(std::move(entry));
  }
  return report;
}

void write_inconsistency_csv(std::ostream& out, const ExpertSurvey& survey, const InconsistencyReport& report) {
  out << "source,target,expert,term,valence\n";
  for (const auto& entry : report.entries) {
    for (const auto& expert : survey.experts) {
      for (const auto& r : expert.ratings) {
        if (r.edge() != entry.edge) continue;
        const auto v = valence_of(r.term);
        if (v == Valence::neutral) continue;
        out << r.source << ',' << r.target << ',' << expert.expert_id << ',' << r.term << ','
            << (v == Valence::positive ? "positive" : "negative") << '\n';
      }
    }
  }
}

double entropy_bits(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double w : weights) {
    if (w <= 0.0) continue;
    const double p = w / total;
    h -= p * std::log2(p);
  }
  return h == 0.0 ? 0.0 : h;
}

std::map<Edge, double> edge_entropy(const ExpertSurvey& survey) {
  std::map<Edge, std::map<std::string, double>> mass;
  for (const auto& edge : edges_of(survey)) mass[edge];
  for (const auto& expert : survey.experts) {
    for (const auto& r : expert.ratings) mass[r.edge()][r.term] += r.endorsement;
  }

  std::map<Edge, double> result;
  for (const auto& [edge, per_term] : mass) {
    std::vector<double> weights;
    double total = 0.0;
    for (const auto& [term, w] : per_term) {
      weights.push_back(w);
      total += w;
    }
    if (total <= 0.0) throw EmptyEdge(edge.source, edge.target);
    result[edge] = entropy_bits(weights);
  }
  return result;
}

}  // namespace fcm::ingest
