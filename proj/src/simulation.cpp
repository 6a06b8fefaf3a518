#include "fcm/simulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "fcm/error.hpp"

namespace fcm::sim {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<Eigen::Index> indices_of(const std::vector<std::string>& ids, const WeightMatrix& w) {
  std::vector<Eigen::Index> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(static_cast<Eigen::Index>(w.index_of(id)));
  return out;
}

}  // namespace

Inference parse_inference(const std::string& name) {
  const auto n = lower(name);
  if (n == "kosko") return Inference::kosko;
  if (n == "mkosko") return Inference::mkosko;
  if (n == "rescaled") return Inference::rescaled;
  throw InvalidConfig("unknown inference rule '" + name + "'");
}

Transfer parse_transfer(const std::string& name) {
  const auto n = lower(name);
  if (n == "sigmoid") return Transfer::sigmoid;
  if (n == "tanh") return Transfer::tanh;
  if (n == "bivalent") return Transfer::bivalent;
  if (n == "trivalent") return Transfer::trivalent;
  throw InvalidConfig("unknown transfer function '" + name + "'");
}

const char* to_string(Inference inference) {
  switch (inference) {
    case Inference::kosko: return "kosko";
    case Inference::mkosko: return "mkosko";
    case Inference::rescaled: return "rescaled";
  }
  return "?";
}

const char* to_string(Transfer transfer) {
  switch (transfer) {
    case Transfer::sigmoid: return "sigmoid";
    case Transfer::tanh: return "tanh";
    case Transfer::bivalent: return "bivalent";
    case Transfer::trivalent: return "trivalent";
  }
  return "?";
}

void validate(const SimulationConfig& cfg, const std::vector<std::string>& concepts) {
  if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda)) throw InvalidConfig("lambda must be positive");
  if (!(cfg.thresh > 0.0)) throw InvalidConfig("convergence threshold must be positive");
  if (cfg.max_iterations < 0) throw InvalidConfig("max_iterations must be non-negative");
  const auto known = [&](const std::string& id) {
    return std::find(concepts.begin(), concepts.end(), id) != concepts.end();
  };
  for (const auto& id : cfg.output_concepts) {
    if (!known(id)) throw UnknownConcept(id);
  }
  for (const auto& [id, value] : cfg.clamped) {
    if (!known(id)) throw UnknownConcept(id);
  }
}

double transfer(double x, Transfer kind, double lambda) {
  switch (kind) {
    case Transfer::sigmoid:
      return 1.0 / (1.0 + std::exp(-lambda * x));
    case Transfer::tanh:
      return std::tanh(x);
    case Transfer::bivalent:
      return x > 0.0 ? 1.0 : 0.0;
    case Transfer::trivalent:
      return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  }
  return x;
}

StateVector net_input(const StateVector& state, const Eigen::MatrixXd& w, Inference inference) {
  if (w.rows() != state.size() || w.cols() != state.size()) {
    throw DimensionMismatch(static_cast<std::size_t>(w.rows()), static_cast<std::size_t>(state.size()));
  }
  switch (inference) {
    case Inference::kosko:
      return w.transpose() * state;
    case Inference::mkosko:
      return state + w.transpose() * state;
    case Inference::rescaled: {
      const StateVector centred = 2.0 * state.array() - 1.0;
      return centred + w.transpose() * centred;
    }
  }
  return state;
}

StateVector step(const StateVector& state, const Eigen::MatrixXd& w, Inference inference, Transfer transfer_kind,
                 double lambda) {
  StateVector next = net_input(state, w, inference);
  for (Eigen::Index i = 0; i < next.size(); ++i) next(i) = transfer(next(i), transfer_kind, lambda);
  return next;
}

StateVector step(const StateVector& state, const WeightMatrix& w, const SimulationConfig& cfg) {
  return step(state, w.values(), cfg.inference, cfg.transfer, cfg.lambda);
}

SimulationTrace simulate(const StateVector& initial, const WeightMatrix& w, const SimulationConfig& cfg) {
  validate(cfg, w.concepts());
  if (static_cast<std::size_t>(initial.size()) != w.size()) {
    throw DimensionMismatch(w.size(), static_cast<std::size_t>(initial.size()));
  }

  const auto outputs = indices_of(cfg.output_concepts, w);
  std::vector<std::pair<Eigen::Index, double>> clamps;
  for (const auto& [id, value] : cfg.clamped) clamps.emplace_back(static_cast<Eigen::Index>(w.index_of(id)), value);
  const auto apply_clamps = [&](StateVector& s) {
    for (const auto& [i, v] : clamps) s(i) = v;
  };

  SimulationTrace trace;
  trace.concepts = w.concepts();
  StateVector current = initial;
  apply_clamps(current);
  trace.rows.push_back(current);

  for (int t = 0; t < cfg.max_iterations; ++t) {
    StateVector next = step(current, w, cfg);
    apply_clamps(next);

    double change = 0.0;
    if (outputs.empty() && next.size() > 0) {
      change = (next - current).cwiseAbs().maxCoeff();
    } else if (!outputs.empty()) {
      for (auto i : outputs) change = std::max(change, std::abs(next(i) - current(i)));
    }
    trace.rows.push_back(next);
    if (change < cfg.thresh) {
      trace.converged_at = trace.rows.size() - 1;
      break;
    }
    current = std::move(next);
  }
  return trace;
}

std::string convergence_message(const SimulationTrace& trace, double thresh) {
  std::ostringstream os;
  if (trace.converged_at) {
    os << "The values converged in the " << (*trace.converged_at + 1) << " state (e <= " << thresh << ")";
  } else {
    os << "The values did not converge within " << (trace.rows.size() - 1) << " steps (e <= " << thresh << ")";
  }
  return os.str();
}

}  // namespace fcm::sim
