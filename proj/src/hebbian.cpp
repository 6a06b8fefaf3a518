#include "fcm/hebbian.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fcm/error.hpp"
#include "fcm/simulation.hpp"

namespace fcm::hebbian {

namespace {

struct DocIndex {
  Eigen::Index index;
  DocRange range;
};

std::vector<DocIndex> resolve_docs(const WeightMatrix& w, const DocRanges& docs) {
  if (docs.empty()) throw InvalidConfig("at least one desired output concept is required");
  std::vector<DocIndex> out;
  for (const auto& d : docs) {
    const auto i = w.find(d.concept_id);
    if (!i) throw UnknownDoc(d.concept_id);
    if (!(d.min < d.max)) throw InvalidConfig("DOC range of '" + d.concept_id + "' needs min < max");
    out.push_back({static_cast<Eigen::Index>(*i), d});
  }
  return out;
}

void validate_common(const StateVector& initial, const WeightMatrix& w0, const HebbianConfig& cfg) {
  if (static_cast<std::size_t>(initial.size()) != w0.size()) {
    throw DimensionMismatch(w0.size(), static_cast<std::size_t>(initial.size()));
  }
  if (!std::isfinite(cfg.learning_rate) || cfg.learning_rate < 0.0) throw InvalidLearningRate(cfg.learning_rate);
  if (!(cfg.lambda > 0.0)) throw InvalidConfig("sigmoid slope must be positive");
  if (!(cfg.thresh > 0.0)) throw InvalidConfig("termination threshold must be positive");
  if (cfg.max_iterations < 1) throw InvalidConfig("max_iterations must be positive");
  if (cfg.f1_window < 1) throw InvalidConfig("F1 window must be positive");
}

std::vector<double> doc_values(const StateVector& state, const std::vector<DocIndex>& docs) {
  std::vector<double> v;
  v.reserve(docs.size());
  for (const auto& d : docs) v.push_back(state(d.index));
  return v;
}

double sigmoid(double x, double lambda) { return sim::transfer(x, sim::Transfer::sigmoid, lambda); }

/// Oja-style Hebbian increment for the edge source -> target.
double hebbian_increment(double eta, double source, double target, double weight) {
  return eta * source * (target - std::abs(weight) * source);
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

const char* to_string(Termination t) {
  return t == Termination::both_conditions_met ? "both_conditions_met" : "max_iterations";
}

TerminationMetrics termination_metrics(const std::vector<std::vector<double>>& doc_trace, const DocRanges& docs,
                                       double thresh) {
  TerminationMetrics m;
  m.f1.assign(docs.size(), {});
  for (const auto& row : doc_trace) {
    if (row.size() != docs.size()) throw DimensionMismatch(docs.size(), row.size());
    for (std::size_t d = 0; d < docs.size(); ++d) m.f1[d].push_back(std::abs(row[d] - docs[d].midpoint()));
  }
  if (doc_trace.size() < 2) return m;
  const auto& last = doc_trace.back();
  const auto& prev = doc_trace[doc_trace.size() - 2];
  m.f2_satisfied = true;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (!(std::abs(last[d] - prev[d]) < thresh)) m.f2_satisfied = false;
  }
  return m;
}

bool should_terminate(const std::vector<std::vector<double>>& doc_trace, const DocRanges& docs, double thresh,
                      int window) {
  if (doc_trace.size() < 2) return false;
  const auto m = termination_metrics(doc_trace, docs, thresh);
  if (!m.f2_satisfied) return false;
  const std::size_t steps = std::min<std::size_t>(static_cast<std::size_t>(window), doc_trace.size() - 1);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (!docs[d].contains(doc_trace.back()[d])) return false;
    const auto& f1 = m.f1[d];
    for (std::size_t k = f1.size() - steps; k < f1.size(); ++k) {
      if (f1[k] > f1[k - 1]) return false;
    }
  }
  return true;
}

LearningOutcome nhl_run(const StateVector& initial_state, const WeightMatrix& w0, const DocRanges& docs,
                        const HebbianConfig& cfg) {
  validate_common(initial_state, w0, cfg);
  if (!(cfg.decay > 0.0 && cfg.decay <= 1.0)) throw InvalidConfig("NHL decay must lie in (0, 1]");
  const auto doc_idx = resolve_docs(w0, docs);

  const Eigen::MatrixXd& original = w0.values();
  const auto n = original.rows();
  Eigen::MatrixXd w = original;
  StateVector a = initial_state;

  LearningOutcome out;
  out.state_trace.push_back(a);
  out.doc_trace.push_back(doc_values(a, doc_idx));

  for (int k = 1; k <= cfg.max_iterations; ++k) {
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (original(j, i) == 0.0) continue;
        double v = cfg.decay * w(j, i) + hebbian_increment(cfg.learning_rate, a(j), a(i), w(j, i));
        if (sign(v) != sign(original(j, i))) v = 0.0;
        next(j, i) = v;
      }
    }
    w = std::move(next);

    StateVector updated = a + w.transpose() * a;
    for (Eigen::Index i = 0; i < n; ++i) updated(i) = sigmoid(updated(i), cfg.lambda);
    a = std::move(updated);

    out.state_trace.push_back(a);
    out.doc_trace.push_back(doc_values(a, doc_idx));
    if (should_terminate(out.doc_trace, docs, cfg.thresh, cfg.f1_window)) {
      out.converged_at = k;
      out.termination = Termination::both_conditions_met;
      break;
    }
  }

  out.weights = WeightMatrix(w0.concepts(), std::move(w));
  out.final_state = a;
  return out;
}

LearningOutcome ahl_run(const StateVector& initial_state, const WeightMatrix& w0, const DocRanges& docs,
                        const AhlConfig& cfg) {
  validate_common(initial_state, w0, cfg.base);
  if (!(cfg.base.decay >= 0.0 && cfg.base.decay <= 1.0)) throw InvalidConfig("AHL decay must lie in [0, 1]");
  if (cfg.auto_learn && (cfg.b1 < 0.0 || cfg.b2 < 0.0 || cfg.lbd1 < 0.0 || cfg.lbd2 < 0.0)) {
    throw InvalidConfig("auto-learn schedule coefficients must be non-negative");
  }
  const auto doc_idx = resolve_docs(w0, docs);

  std::vector<std::vector<Eigen::Index>> groups;
  std::set<std::string> covered;
  for (const auto& [key, ids] : cfg.activation_pattern) {
    std::vector<Eigen::Index> group;
    for (const auto& id : ids) {
      const auto i = w0.find(id);
      if (!i) throw IncompletePattern("activation pattern names unknown concept '" + id + "'");
      if (!covered.insert(id).second) throw IncompletePattern("concept '" + id + "' is activated more than once");
      group.push_back(static_cast<Eigen::Index>(*i));
    }
    if (!group.empty()) groups.push_back(std::move(group));
  }
  for (const auto& c : w0.concepts()) {
    if (covered.count(c) == 0) throw IncompletePattern("concept '" + c + "' is missing from the activation pattern");
  }

  Eigen::MatrixXd w = w0.values();
  const auto n = w.rows();
  StateVector a = initial_state;

  LearningOutcome out;
  out.state_trace.push_back(a);
  out.doc_trace.push_back(doc_values(a, doc_idx));

  for (int k = 1; k <= cfg.base.max_iterations; ++k) {
    const double eta = cfg.auto_learn ? cfg.b1 * std::exp(-cfg.lbd1 * k) : cfg.base.learning_rate;
    const double gamma = cfg.auto_learn ? cfg.b2 * std::exp(-cfg.lbd2 * k) : cfg.base.decay;

    for (const auto& group : groups) {
      Eigen::MatrixXd next = w;
      for (auto i : group) {
        for (Eigen::Index j = 0; j < n; ++j) {
          if (j == i) continue;
          next(j, i) = (1.0 - gamma) * w(j, i) + hebbian_increment(eta, a(j), a(i), w(j, i));
        }
      }
      StateVector updated = a;
      for (auto i : group) updated(i) = sigmoid(a(i) + next.col(i).dot(a), cfg.base.lambda);
      w = std::move(next);
      a = std::move(updated);
    }

    out.state_trace.push_back(a);
    out.doc_trace.push_back(doc_values(a, doc_idx));
    if (should_terminate(out.doc_trace, docs, cfg.base.thresh, cfg.base.f1_window)) {
      out.converged_at = k;
      out.termination = Termination::both_conditions_met;
      break;
    }
  }

  out.weights = WeightMatrix(w0.concepts(), std::move(w));
  out.final_state = a;
  return out;
}

std::string convergence_message(const std::string& algorithm, const LearningOutcome& outcome, double eta,
                                double decay) {
  std::ostringstream os;
  if (outcome.converged_at) {
    os << "The " << algorithm << " learning process converged at step " << *outcome.converged_at
       << " with the learning rate eta = " << eta << " and decay = " << decay << "!";
  } else {
    os << "The " << algorithm << " learning process did not converge within "
       << (outcome.doc_trace.size() - 1) << " steps (learning rate eta = " << eta << ", decay = " << decay << ")";
  }
  return os.str();
}

}  // namespace fcm::hebbian
