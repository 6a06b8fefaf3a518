#include "fcm/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fcm/error.hpp"

namespace fcm::io {

namespace {

using nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool blank(const std::string& line) { return trim(line).empty(); }

ordered_json parse_json(std::istream& in) {
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(0, std::string("invalid JSON: ") + e.what());
  }
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());
  return in;
}

double json_number(const ordered_json& v, const std::string& what) {
  if (!v.is_number()) throw SchemaError(0, what + " must be a number");
  return v.get<double>();
}

ordered_json matrix_to_json(const WeightMatrix& w) {
  ordered_json j;
  j["concepts"] = w.concepts();
  auto rows = ordered_json::array();
  for (std::size_t r = 0; r < w.size(); ++r) {
    auto row = ordered_json::array();
    for (std::size_t c = 0; c < w.size(); ++c) row.push_back(w(r, c));
    rows.push_back(std::move(row));
  }
  j["weights"] = std::move(rows);
  return j;
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), end);
}

std::string read_text(const std::filesystem::path& path) {
  auto in = open(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw InputError("cannot write '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

bool has_json_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".json";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string_view rest(line);
  while (true) {
    const auto comma = rest.find(',');
    cells.push_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return cells;
}

double parse_number(const std::string& cell, std::size_t row) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    throw SchemaError(row, "'" + cell + "' is not a number");
  }
  return v;
}

WeightMatrix parse_matrix_csv(std::istream& in) {
  std::string line;
  std::size_t row = 1;
  while (std::getline(in, line) && blank(line)) ++row;
  auto header = split_csv_line(line);
  if (header.size() < 2) throw SchemaError(row, "matrix header needs a leading cell and at least one concept");
  std::vector<std::string> concepts(header.begin() + 1, header.end());
  const auto n = static_cast<Eigen::Index>(concepts.size());

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index r = 0;
  while (std::getline(in, line)) {
    ++row;
    if (blank(line)) continue;
    const auto cells = split_csv_line(line);
    if (r >= n) throw SchemaError(row, "more rows than concepts");
    if (static_cast<Eigen::Index>(cells.size()) != n + 1) throw SchemaError(row, "wrong number of cells");
    if (cells[0] != concepts[static_cast<std::size_t>(r)]) {
      throw SchemaError(row, "row label '" + cells[0] + "' does not match column '" + concepts[static_cast<std::size_t>(r)] + "'");
    }
    for (Eigen::Index c = 0; c < n; ++c) w(r, c) = parse_number(cells[static_cast<std::size_t>(c) + 1], row);
    ++r;
  }
  if (r != n) throw SchemaError(row, "expected " + std::to_string(n) + " matrix rows");
  return WeightMatrix(std::move(concepts), std::move(w));
}

WeightMatrix parse_matrix_json(std::istream& in) {
  const auto j = parse_json(in);
  if (!j.is_object() || !j.contains("concepts") || !j.contains("weights")) {
    throw SchemaError(0, "matrix JSON needs \"concepts\" and \"weights\"");
  }
  std::vector<std::string> concepts;
  for (const auto& c : j.at("concepts")) {
    if (!c.is_string()) throw SchemaError(0, "concept ids must be strings");
    concepts.push_back(c.get<std::string>());
  }
  const auto n = static_cast<Eigen::Index>(concepts.size());
  const auto& rows = j.at("weights");
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
    throw SchemaError(0, "weights must hold one row per concept");
  }
  Eigen::MatrixXd w(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw SchemaError(static_cast<std::size_t>(r) + 1, "weight row has the wrong length");
    }
    for (Eigen::Index c = 0; c < n; ++c) w(r, c) = json_number(row[static_cast<std::size_t>(c)], "weight");
  }
  return WeightMatrix(std::move(concepts), std::move(w));
}

WeightMatrix read_matrix(const std::filesystem::path& path) {
  auto in = open(path);
  return has_json_extension(path) ? parse_matrix_json(in) : parse_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const WeightMatrix& w) {
  for (const auto& c : w.concepts()) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < w.size(); ++r) {
    out << w.concepts()[r];
    for (std::size_t c = 0; c < w.size(); ++c) out << ',' << format_number(w(r, c));
    out << '\n';
  }
}

void write_matrix_json(std::ostream& out, const WeightMatrix& w) { out << matrix_to_json(w).dump(2) << '\n'; }

StateVector read_state(const std::filesystem::path& path, const std::vector<std::string>& concepts) {
  std::map<std::string, double> values;
  auto in = open(path);
  if (has_json_extension(path)) {
    const auto j = parse_json(in);
    if (!j.is_object()) throw SchemaError(0, "state JSON must be an object of concept -> value");
    for (const auto& [id, v] : j.items()) values[id] = json_number(v, "state of '" + id + "'");
  } else {
    const auto data = parse_data_csv(in);
    if (data.steps() < 1) throw SchemaError(1, "state CSV needs a value row");
    for (std::size_t i = 0; i < data.size(); ++i) values[data.concepts[i]] = data.rows(0, static_cast<Eigen::Index>(i));
  }
  return make_state(concepts, values);
}

rcga::LongitudinalData parse_data_csv(std::istream& in) {
  std::string line;
  std::size_t row = 1;
  while (std::getline(in, line) && blank(line)) ++row;
  rcga::LongitudinalData data;
  data.concepts = split_csv_line(line);
  // Traces written by write_trace_csv carry a leading step index.
  const bool indexed = !data.concepts.empty() && data.concepts.front() == "step";
  if (indexed) data.concepts.erase(data.concepts.begin());
  if (data.concepts.empty() || data.concepts.front().empty()) throw SchemaError(row, "missing concept header");

  std::vector<std::vector<double>> values;
  while (std::getline(in, line)) {
    ++row;
    if (blank(line)) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != data.concepts.size() + (indexed ? 1 : 0)) throw SchemaError(row, "wrong number of cells");
    std::vector<double> v;
    for (std::size_t i = indexed ? 1 : 0; i < cells.size(); ++i) v.push_back(parse_number(cells[i], row));
    values.push_back(std::move(v));
  }
  data.rows.resize(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(data.concepts.size()));
  for (std::size_t t = 0; t < values.size(); ++t) {
    for (std::size_t c = 0; c < values[t].size(); ++c) {
      data.rows(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) = values[t][c];
    }
  }
  return data;
}

rcga::LongitudinalData read_data(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_data_csv(in);
}

void write_data_csv(std::ostream& out, const rcga::LongitudinalData& data) {
  for (std::size_t c = 0; c < data.concepts.size(); ++c) out << (c ? "," : "") << data.concepts[c];
  out << '\n';
  for (Eigen::Index t = 0; t < data.rows.rows(); ++t) {
    for (Eigen::Index c = 0; c < data.rows.cols(); ++c) out << (c ? "," : "") << format_number(data.rows(t, c));
    out << '\n';
  }
}

void write_trace_csv(std::ostream& out, const sim::SimulationTrace& trace) {
  out << "step";
  for (const auto& c : trace.concepts) out << ',' << c;
  out << '\n';
  for (std::size_t t = 0; t < trace.rows.size(); ++t) {
    out << t;
    for (Eigen::Index i = 0; i < trace.rows[t].size(); ++i) out << ',' << format_number(trace.rows[t](i));
    out << '\n';
  }
}

void write_trace_long_csv(std::ostream& out, const sim::SimulationTrace& trace) {
  out << "step,concept,value\n";
  for (std::size_t t = 0; t < trace.rows.size(); ++t) {
    for (std::size_t i = 0; i < trace.concepts.size(); ++i) {
      out << t << ',' << trace.concepts[i] << ',' << format_number(trace.rows[t](static_cast<Eigen::Index>(i))) << '\n';
    }
  }
}

void write_trace_json(std::ostream& out, const sim::SimulationTrace& trace) {
  ordered_json j;
  j["concepts"] = trace.concepts;
  auto rows = ordered_json::array();
  for (const auto& r : trace.rows) rows.push_back(std::vector<double>(r.data(), r.data() + r.size()));
  j["rows"] = std::move(rows);
  j["converged_at"] = trace.converged_at ? ordered_json(*trace.converged_at) : ordered_json(nullptr);
  out << j.dump(2) << '\n';
}

void write_outcome_json(std::ostream& out, const hebbian::LearningOutcome& outcome, const hebbian::DocRanges& docs) {
  ordered_json j;
  j["weights"] = matrix_to_json(outcome.weights);
  j["converged_at"] = outcome.converged_at ? ordered_json(*outcome.converged_at) : ordered_json(nullptr);
  j["termination"] = hebbian::to_string(outcome.termination);
  j["final_state"] = std::vector<double>(outcome.final_state.data(), outcome.final_state.data() + outcome.final_state.size());
  ordered_json trace = ordered_json::object();
  for (std::size_t d = 0; d < docs.size(); ++d) {
    auto series = ordered_json::array();
    for (const auto& row : outcome.doc_trace) series.push_back(row[d]);
    trace[docs[d].concept_id] = std::move(series);
  }
  j["doc_trace"] = std::move(trace);
  out << j.dump(2) << '\n';
}

void write_entropy_csv(std::ostream& out, const std::map<ingest::Edge, double>& entropy) {
  out << "source,target,entropy\n";
  for (const auto& [edge, h] : entropy) out << edge.source << ',' << edge.target << ',' << format_number(h) << '\n';
}

void write_entropy_json(std::ostream& out, const std::map<ingest::Edge, double>& entropy) {
  auto j = ordered_json::array();
  for (const auto& [edge, h] : entropy) j.push_back({{"source", edge.source}, {"target", edge.target}, {"entropy", h}});
  out << j.dump(2) << '\n';
}

void write_table_csv(std::ostream& out, const std::vector<std::string>& concepts,
                     const std::vector<std::pair<std::string, intervention::ConceptValues>>& rows) {
  out << "scenario";
  for (const auto& c : concepts) out << ',' << c;
  out << '\n';
  for (const auto& [name, values] : rows) {
    out << name;
    for (double v : values) out << ',' << format_number(v);
    out << '\n';
  }
}

void write_table_json(std::ostream& out, const std::vector<std::string>& concepts,
                      const std::vector<std::pair<std::string, intervention::ConceptValues>>& rows) {
  ordered_json j = ordered_json::object();
  for (const auto& [name, values] : rows) {
    ordered_json row = ordered_json::object();
    for (std::size_t i = 0; i < concepts.size(); ++i) row[concepts[i]] = values[i];
    j[name] = std::move(row);
  }
  out << j.dump(2) << '\n';
}

std::vector<intervention::InterventionSpec> read_interventions(const std::filesystem::path& path) {
  auto in = open(path);
  const auto j = parse_json(in);
  if (!j.is_array()) throw SchemaError(0, "interventions file must be a JSON array");

  std::vector<intervention::InterventionSpec> specs;
  std::size_t row = 0;
  for (const auto& item : j) {
    ++row;
    if (!item.is_object() || !item.contains("name") || !item.at("name").is_string()) {
      throw SchemaError(row, "intervention needs a string \"name\"");
    }
    intervention::InterventionSpec spec;
    spec.name = item.at("name").get<std::string>();
    const auto kind = item.value("kind", std::string("continuous"));
    if (kind == "continuous") {
      spec.kind = intervention::Kind::continuous;
      if (!item.contains("weights") || !item.at("weights").is_object()) {
        throw SchemaError(row, "continuous intervention needs a \"weights\" object");
      }
      for (const auto& [id, v] : item.at("weights").items()) spec.weights[id] = json_number(v, "weight");
      if (item.contains("effectiveness")) spec.effectiveness = json_number(item.at("effectiveness"), "effectiveness");
    } else if (kind == "single_shot") {
      spec.kind = intervention::Kind::single_shot;
      if (item.contains("state")) {
        if (!item.at("state").is_object()) throw SchemaError(row, "\"state\" must be an object");
        for (const auto& [id, v] : item.at("state").items()) spec.state_overrides[id] = json_number(v, "state");
      }
    } else {
      throw SchemaError(row, "unknown intervention kind '" + kind + "'");
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

hebbian::DocRanges read_doc_ranges(const std::filesystem::path& path) {
  auto in = open(path);
  const auto j = parse_json(in);
  if (!j.is_object()) throw SchemaError(0, "DOC file must map concept ids to [min, max]");
  hebbian::DocRanges docs;
  for (const auto& [id, range] : j.items()) {
    if (!range.is_array() || range.size() != 2) throw SchemaError(0, "DOC '" + id + "' needs [min, max]");
    docs.push_back({id, json_number(range[0], "DOC bound"), json_number(range[1], "DOC bound")});
  }
  return docs;
}

}  // namespace fcm::io
