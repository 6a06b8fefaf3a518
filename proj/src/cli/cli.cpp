#include "fcm/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fcm/error.hpp"
#include "fcm/fuzzy.hpp"
#include "fcm/hebbian.hpp"
#include "fcm/ingest.hpp"
#include "fcm/intervention.hpp"
#include "fcm/io.hpp"
#include "fcm/manifest.hpp"
#include "fcm/rcga.hpp"
#include "fcm/simulation.hpp"

namespace fcm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Globals {
  std::string format = "csv";
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool verbose = false;
};

struct SimOptions {
  std::string inference = "mkosko";
  std::string transfer = "sigmoid";
  double lambda = 1.0;
  double thresh = 0.001;
  int iterations = 50;
  std::vector<std::string> output_concepts;

  sim::SimulationConfig resolve() const {
    sim::SimulationConfig cfg;
    cfg.inference = sim::parse_inference(inference);
    cfg.transfer = sim::parse_transfer(transfer);
    cfg.lambda = lambda;
    cfg.thresh = thresh;
    cfg.max_iterations = iterations;
    cfg.output_concepts = output_concepts;
    return cfg;
  }

  ordered_json snapshot() const {
    return {{"inference", inference}, {"transfer", transfer},       {"lambda", lambda},
            {"thresh", thresh},       {"iterations", iterations}, {"output_concepts", output_concepts}};
  }
};

void add_sim_options(CLI::App* sub, SimOptions& o) {
  sub->add_option("--inference", o.inference, "kosko, mkosko or rescaled")->capture_default_str();
  sub->add_option("--transfer", o.transfer, "sigmoid, tanh, bivalent or trivalent")->capture_default_str();
  sub->add_option("--lambda", o.lambda, "Sigmoid steepness")->capture_default_str();
  sub->add_option("--thresh", o.thresh, "Convergence threshold")->capture_default_str();
  sub->add_option("--iterations", o.iterations, "Maximum number of steps")->capture_default_str();
  sub->add_option("--output-concepts", o.output_concepts, "Concepts checked for convergence (default: all)");
}

/// Per-invocation state: where outputs go and what the manifest records.
class Context {
 public:
  Context(const Globals& g, std::ostream& out, RunManifest manifest)
      : globals_(g), out_(out), manifest_(std::move(manifest)) {}

  const Globals& globals() const { return globals_; }
  bool json() const { return globals_.format == "json"; }
  std::ostream& out() { return out_; }
  RunManifest& manifest() { return manifest_; }

  void input(const std::string& path) { manifest_.inputs.push_back(path); }

  void emit(const std::string& name, const std::string& content) {
    const fs::path dir(globals_.out_dir);
    fs::create_directories(dir);
    const auto path = dir / name;
    io::write_file_atomic(path, content);
    manifest_.outputs.push_back(path.string());
    if (globals_.verbose) out_ << "wrote " << path.string() << '\n';
  }

  template <class Writer>
  void emit_with(const std::string& name, Writer&& writer) {
    std::ostringstream os;
    writer(os);
    emit(name, os.str());
  }

  void finish() {
    const auto path = fs::path(globals_.out_dir) / (manifest_.command + "_manifest.json");
    fs::create_directories(path.parent_path());
    write_manifest(path, manifest_);
    if (globals_.verbose) out_ << "wrote " << path.string() << '\n';
  }

 private:
  const Globals& globals_;
  std::ostream& out_;
  RunManifest manifest_;
};

/// Runs `fn` and prefixes input errors with the offending path.
template <class Fn>
auto load(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const FileNotFound&) {
    throw;
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

ingest::SurveyReadOptions survey_options(const std::string& path, const std::vector<std::string>& term_ids) {
  ingest::SurveyReadOptions o;
  o.format = io::has_json_extension(path) ? ingest::SurveyFormat::json : ingest::SurveyFormat::csv;
  o.term_ids = term_ids;
  return o;
}

fuzzy::TermsConfig load_terms(const std::string& path) {
  if (path.empty()) return {};
  return load(path, [&] {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path);
    return fuzzy::parse_terms_config(in);
  });
}

ingest::ExpertSurvey load_survey(const std::string& path, const fuzzy::TermsConfig& terms) {
  return load(path, [&] { return ingest::read_survey(path, survey_options(path, fuzzy::term_ids(terms.terms))); });
}

ordered_json table_json(const std::vector<std::string>& concepts,
                        const std::vector<std::pair<std::string, intervention::ConceptValues>>& rows) {
  std::ostringstream os;
  io::write_table_json(os, concepts, rows);
  return ordered_json::parse(os.str());
}

// ---- build / entropy / consistency ------------------------------------------

struct BuildOptions {
  std::string survey;
  std::string terms;
  std::string implication = "mamdani";
  std::string aggregation = "fmax";
  std::string defuzz = "centroid";
};

void cmd_build(Context& ctx, const BuildOptions& o) {
  fuzzy::BuildOptions b;
  b.implication = fuzzy::parse_implication(o.implication);
  b.aggregation = fuzzy::parse_aggregation(o.aggregation);
  b.defuzzification = fuzzy::parse_defuzzification(o.defuzz);
  const auto terms = load_terms(o.terms);
  const auto survey = load_survey(o.survey, terms);
  ctx.input(o.survey);
  if (!o.terms.empty()) ctx.input(o.terms);
  ctx.manifest().config = {{"survey", o.survey},           {"terms", o.terms.empty() ? "standard" : o.terms},
                           {"implication", o.implication}, {"aggregation", o.aggregation},
                           {"defuzz", o.defuzz}};

  const auto w = load(o.survey, [&] { return fuzzy::build_weight_matrix(survey, terms.universe, terms.terms, b); });
  ctx.emit_with("matrix.csv", [&](std::ostream& os) { io::write_matrix_csv(os, w); });
  ctx.emit_with("matrix.json", [&](std::ostream& os) { io::write_matrix_json(os, w); });
  ctx.out() << "Built a " << w.size() << "x" << w.size() << " weight matrix from " << survey.experts.size()
            << " experts\n";
}

void cmd_entropy(Context& ctx, const BuildOptions& o) {
  const auto terms = load_terms(o.terms);
  const auto survey = load_survey(o.survey, terms);
  ctx.input(o.survey);
  ctx.manifest().config = {{"survey", o.survey}};
  const auto h = load(o.survey, [&] { return ingest::edge_entropy(survey); });
  if (ctx.json()) {
    ctx.emit_with("entropy.json", [&](std::ostream& os) { io::write_entropy_json(os, h); });
  } else {
    ctx.emit_with("entropy.csv", [&](std::ostream& os) { io::write_entropy_csv(os, h); });
  }
  for (const auto& [edge, value] : h) ctx.out() << edge.source << " -> " << edge.target << ": " << value << '\n';
}

void cmd_consistency(Context& ctx, const BuildOptions& o) {
  const auto terms = load_terms(o.terms);
  const auto survey = load_survey(o.survey, terms);
  ctx.input(o.survey);
  ctx.manifest().config = {{"survey", o.survey}};
  const auto report = ingest::check_consistency(survey);
  const auto partial = ingest::partially_rated_edges(survey);

  if (ctx.json()) {
    auto j = ordered_json::object();
    auto entries = ordered_json::array();
    for (const auto& e : report.entries) {
      entries.push_back({{"source", e.edge.source},
                         {"target", e.edge.target},
                         {"experts_positive", e.experts_positive},
                         {"experts_negative", e.experts_negative}});
    }
    auto missing = ordered_json::array();
    for (const auto& e : partial) missing.push_back({{"source", e.source}, {"target", e.target}});
    j["inconsistent"] = std::move(entries);
    j["partially_rated"] = std::move(missing);
    ctx.emit("consistency.json", j.dump(2) + "\n");
  } else {
    ctx.emit_with("inconsistencies.csv", [&](std::ostream& os) { ingest::write_inconsistency_csv(os, survey, report); });
  }
  ctx.out() << report.entries.size() << " inconsistent edge(s), " << partial.size() << " partially rated edge(s)\n";
  for (const auto& e : report.entries) {
    ctx.out() << "  " << e.edge.source << " -> " << e.edge.target << ": " << e.experts_positive.size()
              << " positive, " << e.experts_negative.size() << " negative\n";
  }
}

// ---- simulate -----------------------------------------------------------------

struct SimulateOptions {
  std::string matrix;
  std::string state;
  SimOptions sim;
};

void write_trace(Context& ctx, const std::string& stem, const sim::SimulationTrace& trace) {
  if (ctx.json()) {
    ctx.emit_with(stem + ".json", [&](std::ostream& os) { io::write_trace_json(os, trace); });
  } else {
    ctx.emit_with(stem + ".csv", [&](std::ostream& os) { io::write_trace_csv(os, trace); });
    ctx.emit_with(stem + "_long.csv", [&](std::ostream& os) { io::write_trace_long_csv(os, trace); });
  }
}

void cmd_simulate(Context& ctx, const SimulateOptions& o) {
  const auto cfg = o.sim.resolve();
  const auto w = load(o.matrix, [&] { return io::read_matrix(o.matrix); });
  const auto a0 = load(o.state, [&] { return io::read_state(o.state, w.concepts()); });
  ctx.input(o.matrix);
  ctx.input(o.state);
  ctx.manifest().config = o.sim.snapshot();

  const auto trace = sim::simulate(a0, w, cfg);
  write_trace(ctx, "trace", trace);
  if (!trace.converged_at) ctx.manifest().notes.push_back("did not converge within the iteration cap");
  ctx.out() << sim::convergence_message(trace, cfg.thresh) << '\n';
}

// ---- nhl / ahl ------------------------------------------------------------------

struct HebbianOptions {
  std::string matrix;
  std::string state;
  std::string docs;
  std::string pattern;
  double eta = 0.01;
  double gamma = 1.0;
  double lambda = 1.0;
  double thresh = 0.002;
  int iterations = 100;
  int window = 5;
  bool auto_learn = false;
  double b1 = 0.003;
  double lbd1 = 0.1;
  double b2 = 0.005;
  double lbd2 = 1.0;
};

void add_hebbian_options(CLI::App* sub, HebbianOptions& o, double default_gamma) {
  o.gamma = default_gamma;
  sub->add_option("--matrix", o.matrix, "Initial weight matrix (CSV or JSON)")->required();
  sub->add_option("--state", o.state, "Initial state (CSV or JSON)")->required();
  sub->add_option("--docs", o.docs, "JSON object of DOC -> [min, max]")->required();
  sub->add_option("--eta", o.eta, "Learning rate")->capture_default_str();
  sub->add_option("--gamma", o.gamma, "Decay")->capture_default_str();
  sub->add_option("--lambda", o.lambda, "Sigmoid steepness")->capture_default_str();
  sub->add_option("--thresh", o.thresh, "DOC change threshold")->capture_default_str();
  sub->add_option("--iterations", o.iterations, "Maximum learning steps")->capture_default_str();
  sub->add_option("--window", o.window, "Steps over which F1 must not increase")->capture_default_str();
}

std::map<int, std::vector<std::string>> load_pattern(const std::string& path) {
  return load(path, [&] {
    const auto text = io::read_text(path);
    ordered_json j;
    try {
      j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(0, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError(0, "activation pattern must map order keys to concept lists");
    std::map<int, std::vector<std::string>> pattern;
    for (const auto& [key, ids] : j.items()) {
      int order = 0;
      try {
        std::size_t used = 0;
        order = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw SchemaError(0, "activation order '" + key + "' is not an integer");
      }
      if (!ids.is_array()) throw SchemaError(0, "activation group '" + key + "' must be a list");
      for (const auto& id : ids) {
        if (!id.is_string()) throw SchemaError(0, "activation group '" + key + "' must list concept ids");
        pattern[order].push_back(id.get<std::string>());
      }
    }
    return pattern;
  });
}

void cmd_hebbian(Context& ctx, const HebbianOptions& o, bool adaptive) {
  const auto w0 = load(o.matrix, [&] { return io::read_matrix(o.matrix); });
  const auto a0 = load(o.state, [&] { return io::read_state(o.state, w0.concepts()); });
  const auto docs = load(o.docs, [&] { return io::read_doc_ranges(o.docs); });
  ctx.input(o.matrix);
  ctx.input(o.state);
  ctx.input(o.docs);

  hebbian::HebbianConfig base{o.eta, o.gamma, o.lambda, o.thresh, o.iterations, o.window};
  ordered_json config = {{"eta", o.eta},       {"gamma", o.gamma},           {"lambda", o.lambda},
                         {"thresh", o.thresh}, {"iterations", o.iterations}, {"window", o.window}};

  hebbian::LearningOutcome outcome;
  const std::string name = adaptive ? "AHL" : "NHL";
  if (adaptive) {
    hebbian::AhlConfig cfg;
    cfg.base = base;
    cfg.activation_pattern = load_pattern(o.pattern);
    cfg.auto_learn = o.auto_learn;
    cfg.b1 = o.b1;
    cfg.lbd1 = o.lbd1;
    cfg.b2 = o.b2;
    cfg.lbd2 = o.lbd2;
    ctx.input(o.pattern);
    config["auto_learn"] = o.auto_learn;
    if (o.auto_learn) config.update({{"b1", o.b1}, {"lbd1", o.lbd1}, {"b2", o.b2}, {"lbd2", o.lbd2}});
    outcome = hebbian::ahl_run(a0, w0, docs, cfg);
  } else {
    outcome = hebbian::nhl_run(a0, w0, docs, base);
  }
  ctx.manifest().config = std::move(config);

  const std::string stem = adaptive ? "ahl" : "nhl";
  ctx.emit_with(stem + "_outcome.json", [&](std::ostream& os) { io::write_outcome_json(os, outcome, docs); });
  if (ctx.json()) {
    ctx.emit_with(stem + "_matrix.json", [&](std::ostream& os) { io::write_matrix_json(os, outcome.weights); });
  } else {
    ctx.emit_with(stem + "_matrix.csv", [&](std::ostream& os) { io::write_matrix_csv(os, outcome.weights); });
  }
  if (!outcome.converged_at) ctx.manifest().notes.push_back("termination conditions not met within the iteration cap");
  ctx.out() << hebbian::convergence_message(name, outcome, o.eta, o.gamma) << '\n';
}

// ---- rcga / validate ------------------------------------------------------------

struct RcgaOptions {
  std::string data;
  std::size_t population = 100;
  std::string ga_type = "generational";
  int iterations = 30000;
  double threshold = 0.99;
  double p_recombination = 0.9;
  double p_mutation = 0.0;
  double a = 100.0;
  double p = 1.0;
  bool free_running = false;
  std::string inference = "mkosko";
  std::string transfer = "sigmoid";
  double lambda = 1.0;
};

void cmd_rcga(Context& ctx, const RcgaOptions& o, bool p_mutation_given) {
  const auto data = load(o.data, [&] { return io::read_data(o.data); });
  ctx.input(o.data);

  rcga::RcgaConfig cfg;
  cfg.population_size = o.population;
  cfg.ga_type = rcga::parse_ga_type(o.ga_type);
  cfg.n_iterations = o.iterations;
  cfg.threshold = o.threshold;
  cfg.p_recombination = o.p_recombination;
  if (p_mutation_given) cfg.p_mutation = o.p_mutation;
  cfg.a = o.a;
  cfg.p = o.p;
  cfg.teacher_forcing = !o.free_running;
  cfg.dynamics = {sim::parse_inference(o.inference), sim::parse_transfer(o.transfer), o.lambda};
  cfg.seed = ctx.globals().seed;

  ordered_json config = {{"population", o.population},
                         {"ga_type", rcga::to_string(cfg.ga_type)},
                         {"iterations", o.iterations},
                         {"threshold", o.threshold},
                         {"p_recombination", o.p_recombination},
                         {"p_mutation", rcga::mutation_probability(cfg, data.size())},
                         {"a", o.a},
                         {"p", o.p},
                         {"teacher_forcing", cfg.teacher_forcing},
                         {"inference", o.inference},
                         {"transfer", o.transfer},
                         {"lambda", o.lambda}};
  ctx.manifest().config = config;

  const auto result = load(o.data, [&] { return rcga::run(data, cfg); });
  if (ctx.json()) {
    ctx.emit_with("rcga_matrix.json", [&](std::ostream& os) { io::write_matrix_json(os, result.solution); });
  } else {
    ctx.emit_with("rcga_matrix.csv", [&](std::ostream& os) { io::write_matrix_csv(os, result.solution); });
  }
  ordered_json report = {{"fitness", result.fitness},
                         {"generations", result.generations},
                         {"seed", result.seed},
                         {"config", std::move(config)}};
  ctx.emit("rcga_report.json", report.dump(2) + "\n");
  if (result.fitness < o.threshold) ctx.manifest().notes.push_back("fitness threshold not reached");
  ctx.out() << "Best fitness " << result.fitness << " after " << result.generations << " generations (seed "
            << result.seed << ")\n";
}

struct ValidateOptions {
  std::string matrix;
  std::string data;
  std::string generator;
  std::string initial;
  std::size_t k = 100;
  double low = 0.0;
  double high = 1.0;
  std::string inference = "mkosko";
  std::string transfer = "sigmoid";
  double lambda = 1.0;
};

void cmd_validate(Context& ctx, const ValidateOptions& o) {
  const rcga::Dynamics dyn{sim::parse_inference(o.inference), sim::parse_transfer(o.transfer), o.lambda};
  const auto w = load(o.matrix, [&] { return io::read_matrix(o.matrix); });
  const auto data = load(o.data, [&] { return io::read_data(o.data); });
  ctx.input(o.matrix);
  ctx.input(o.data);
  std::optional<StateVector> initial;
  if (!o.initial.empty()) {
    initial = load(o.initial, [&] { return io::read_state(o.initial, w.concepts()); });
    ctx.input(o.initial);
  }
  ctx.manifest().config = {{"k", o.k},
                           {"low", o.low},
                           {"high", o.high},
                           {"inference", o.inference},
                           {"transfer", o.transfer},
                           {"lambda", o.lambda}};

  ordered_json result;
  const double ise = rcga::validate_ise(initial, w, data, dyn);
  result["in_sample_error"] = ise;
  ctx.out() << "in-sample error: " << ise << '\n';
  if (!o.generator.empty()) {
    const auto g = load(o.generator, [&] { return io::read_matrix(o.generator); });
    ctx.input(o.generator);
    rcga::Rng rng(ctx.globals().seed);
    const auto ose = rcga::validate_ose(w, g, o.k, o.low, o.high, dyn, rng);
    result["out_of_sample_error"] = ose.mean;
    result["out_of_sample_std"] = ose.std;
    ctx.out() << "out-of-sample error: " << ose.mean << ", std: " << ose.std << '\n';
  } else {
    ctx.manifest().notes.push_back("no generator matrix given; out-of-sample error skipped");
  }
  ctx.emit("validation.json", result.dump(2) + "\n");
}

// ---- intervene --------------------------------------------------------------------

struct InterveneOptions {
  std::string matrix;
  std::string state;
  std::string interventions;
  SimOptions sim;
  int scenario_iterations = -1;
};

void cmd_intervene(Context& ctx, const InterveneOptions& o) {
  const auto cfg = o.sim.resolve();
  const auto w = load(o.matrix, [&] { return io::read_matrix(o.matrix); });
  const auto a0 = load(o.state, [&] { return io::read_state(o.state, w.concepts()); });
  const auto specs = load(o.interventions, [&] { return io::read_interventions(o.interventions); });
  ctx.input(o.matrix);
  ctx.input(o.state);
  ctx.input(o.interventions);
  auto config = o.sim.snapshot();
  if (o.scenario_iterations >= 0) config["scenario_iterations"] = o.scenario_iterations;
  ctx.manifest().config = std::move(config);

  intervention::InterventionAnalysis analysis;
  const auto& baseline = analysis.initialize(a0, w, cfg);
  write_trace(ctx, "scenario_baseline", baseline);
  load(o.interventions, [&] {
    for (const auto& spec : specs) analysis.add_intervention(spec);
    return 0;
  });

  std::optional<int> iterations;
  if (o.scenario_iterations >= 0) iterations = o.scenario_iterations;
  for (const auto& spec : specs) {
    const auto& trace = analysis.test_intervention(spec.name, iterations);
    write_trace(ctx, "scenario_" + spec.name, trace);
    if (!trace.converged_at) ctx.manifest().notes.push_back("scenario '" + spec.name + "' did not converge");
  }

  const auto eq = analysis.equilibriums();
  const auto cmp = analysis.comparison_table();
  if (ctx.json()) {
    ctx.emit("equilibriums.json", table_json(analysis.concepts(), eq).dump(2) + "\n");
    ctx.emit("comparison.json", table_json(analysis.concepts(), cmp).dump(2) + "\n");
  } else {
    ctx.emit_with("equilibriums.csv", [&](std::ostream& os) { io::write_table_csv(os, analysis.concepts(), eq); });
    ctx.emit_with("comparison.csv", [&](std::ostream& os) { io::write_table_csv(os, analysis.concepts(), cmp); });
  }
  ctx.out() << "Tested " << specs.size() << " intervention(s); comparison (% change vs baseline):\n";
  for (const auto& [name, row] : cmp) {
    ctx.out() << "  " << name;
    for (double v : row) ctx.out() << ' ' << io::format_number(v);
    ctx.out() << '\n';
  }
}

int report(std::ostream& err, const std::exception& e, int code) {
  err << "error: " << e.what() << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy cognitive map toolkit", "fcm"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Globals g;
  app.add_option("--format", g.format, "Output format for tables and traces")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--out-dir", g.out_dir, "Directory for output files")
      ->capture_default_str()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed for stochastic commands")
                       ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_flag("--verbose,-v", g.verbose, "Report every file written");

  BuildOptions build_o;
  auto* build = app.add_subcommand("build", "Build a weight matrix from expert ratings");
  build->add_option("--survey", build_o.survey, "Survey file (CSV or JSON)")->required();
  build->add_option("--terms", build_o.terms, "Terms/universe JSON (default: standard terms)");
  build->add_option("--implication", build_o.implication, "mamdani or larsen")->capture_default_str();
  build->add_option("--aggregation", build_o.aggregation, "fmax, algsum, esum or hsum")->capture_default_str();
  build->add_option("--defuzz", build_o.defuzz, "centroid, bisector, mom, som or lom")->capture_default_str();

  BuildOptions entropy_o;
  auto* entropy = app.add_subcommand("entropy", "Entropy of expert ratings per edge");
  entropy->add_option("--survey", entropy_o.survey, "Survey file (CSV or JSON)")->required();
  entropy->add_option("--terms", entropy_o.terms, "Terms/universe JSON");

  BuildOptions consistency_o;
  auto* consistency = app.add_subcommand("consistency", "Report edges rated with conflicting signs");
  consistency->add_option("--survey", consistency_o.survey, "Survey file (CSV or JSON)")->required();
  consistency->add_option("--terms", consistency_o.terms, "Terms/universe JSON");

  SimulateOptions sim_o;
  auto* simulate = app.add_subcommand("simulate", "Iterate the map to equilibrium");
  simulate->add_option("--matrix", sim_o.matrix, "Weight matrix (CSV or JSON)")->required();
  simulate->add_option("--state", sim_o.state, "Initial state (CSV or JSON)")->required();
  add_sim_options(simulate, sim_o.sim);

  HebbianOptions nhl_o;
  auto* nhl = app.add_subcommand("nhl", "Non-linear Hebbian learning");
  add_hebbian_options(nhl, nhl_o, 1.0);

  HebbianOptions ahl_o;
  auto* ahl = app.add_subcommand("ahl", "Active Hebbian learning");
  add_hebbian_options(ahl, ahl_o, 0.03);
  ahl->add_option("--pattern", ahl_o.pattern, "JSON object of activation order -> concept list")->required();
  ahl->add_flag("--auto-learn", ahl_o.auto_learn, "Decay eta and gamma exponentially with the step");
  ahl->add_option("--b1", ahl_o.b1)->capture_default_str();
  ahl->add_option("--lbd1", ahl_o.lbd1)->capture_default_str();
  ahl->add_option("--b2", ahl_o.b2)->capture_default_str();
  ahl->add_option("--lbd2", ahl_o.lbd2)->capture_default_str();

  RcgaOptions rcga_o;
  auto* rcga_cmd = app.add_subcommand("rcga", "Learn a weight matrix from longitudinal data");
  rcga_cmd->add_option("--data", rcga_o.data, "CSV with a concept header and one row per step")->required();
  rcga_cmd->add_option("--population", rcga_o.population)->capture_default_str();
  rcga_cmd->add_option("--ga-type", rcga_o.ga_type, "generational or ssga")->capture_default_str();
  rcga_cmd->add_option("--iterations", rcga_o.iterations, "Generation budget")->capture_default_str();
  rcga_cmd->add_option("--threshold", rcga_o.threshold, "Stop once best fitness reaches this")->capture_default_str();
  rcga_cmd->add_option("--p-recombination", rcga_o.p_recombination)->capture_default_str();
  auto* p_mut_opt = rcga_cmd->add_option("--p-mutation", rcga_o.p_mutation, "Per-gene rate (default 0.5/N^2)");
  rcga_cmd->add_option("--a", rcga_o.a, "Fitness scale")->capture_default_str();
  rcga_cmd->add_option("--p", rcga_o.p, "Error norm exponent")->capture_default_str();
  rcga_cmd->add_flag("--free-running", rcga_o.free_running, "Predict from the first row instead of each observed row");
  rcga_cmd->add_option("--inference", rcga_o.inference)->capture_default_str();
  rcga_cmd->add_option("--transfer", rcga_o.transfer)->capture_default_str();
  rcga_cmd->add_option("--lambda", rcga_o.lambda)->capture_default_str();

  ValidateOptions val_o;
  auto* validate = app.add_subcommand("validate", "In-sample and out-of-sample errors of a learned matrix");
  validate->add_option("--matrix", val_o.matrix, "Learned weight matrix")->required();
  validate->add_option("--data", val_o.data, "Longitudinal data CSV")->required();
  validate->add_option("--generator", val_o.generator, "Reference matrix for the out-of-sample error");
  validate->add_option("--initial", val_o.initial, "Initial state (default: first data row)");
  validate->add_option("--k", val_o.k, "Out-of-sample draws")->capture_default_str();
  validate->add_option("--low", val_o.low)->capture_default_str();
  validate->add_option("--high", val_o.high)->capture_default_str();
  validate->add_option("--inference", val_o.inference)->capture_default_str();
  validate->add_option("--transfer", val_o.transfer)->capture_default_str();
  validate->add_option("--lambda", val_o.lambda)->capture_default_str();

  InterveneOptions int_o;
  auto* intervene = app.add_subcommand("intervene", "Run what-if scenarios against a baseline equilibrium");
  intervene->add_option("--matrix", int_o.matrix, "Weight matrix (CSV or JSON)")->required();
  intervene->add_option("--state", int_o.state, "Baseline initial state")->required();
  intervene->add_option("--interventions", int_o.interventions, "JSON list of scenarios")->required();
  add_sim_options(intervene, int_o.sim);
  intervene->add_option("--scenario-iterations", int_o.scenario_iterations, "Step cap for scenarios");

  std::string manifest_path;
  auto* replay = app.add_subcommand("replay", "Re-run the invocation recorded in a manifest");
  replay->add_option("manifest", manifest_path, "Manifest JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (replay->parsed()) {
      const auto m = read_manifest(manifest_path);
      auto again = m.argv;
      if (app.get_option("--out-dir")->count() > 0) {
        again.push_back("--out-dir");
        again.push_back(g.out_dir);
      }
      return run(again, out, err);
    }

    RunManifest manifest;
    manifest.argv = args;
    const bool stochastic = rcga_cmd->parsed() || validate->parsed();
    if (stochastic) {
      if (seed_opt->count() == 0) {
        g.seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) | std::random_device{}();
        manifest.argv.push_back("--seed");
        manifest.argv.push_back(std::to_string(g.seed));
      }
      manifest.seed = g.seed;
    }

    for (auto* sub : app.get_subcommands()) manifest.command = sub->get_name();
    Context ctx(g, out, std::move(manifest));
    if (build->parsed()) cmd_build(ctx, build_o);
    if (entropy->parsed()) cmd_entropy(ctx, entropy_o);
    if (consistency->parsed()) cmd_consistency(ctx, consistency_o);
    if (simulate->parsed()) cmd_simulate(ctx, sim_o);
    if (nhl->parsed()) cmd_hebbian(ctx, nhl_o, false);
    if (ahl->parsed()) cmd_hebbian(ctx, ahl_o, true);
    if (rcga_cmd->parsed()) cmd_rcga(ctx, rcga_o, p_mut_opt->count() > 0);
    if (validate->parsed()) cmd_validate(ctx, val_o);
    if (intervene->parsed()) cmd_intervene(ctx, int_o);
    ctx.finish();
    return 0;
  } catch (const NumericError& e) {
    return report(err, e, 2);
  } catch (const InputError& e) {
    return report(err, e, 1);
  } catch (const fs::filesystem_error& e) {
    return report(err, e, 1);
  } catch (const std::exception& e) {
    return report(err, e, 1);
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace fcm::cli
