#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fcm {

/// Concept activations, indexed like the concepts of the matrix they are paired with.
using StateVector = Eigen::VectorXd;

/// Square causal weight matrix. Orientation is row = source: `w(i, j)` is the
/// influence of concept i on concept j.
class WeightMatrix {
 public:
  WeightMatrix() = default;

  /// Zero matrix over the given concepts. Throws InvalidConfig on duplicate ids.
  explicit WeightMatrix(std::vector<std::string> concepts);

  /// Throws InvalidConfig on duplicate ids and DimensionMismatch when `w` is not
  /// square with one row per concept.
  WeightMatrix(std::vector<std::string> concepts, Eigen::MatrixXd w);

  std::size_t size() const noexcept { return concepts_.size(); }
  const std::vector<std::string>& concepts() const noexcept { return concepts_; }

  const Eigen::MatrixXd& values() const noexcept { return w_; }
  Eigen::MatrixXd& values() noexcept { return w_; }

  double operator()(std::size_t source, std::size_t target) const { return w_(source, target); }
  double& operator()(std::size_t source, std::size_t target) { return w_(source, target); }

  /// Lookup by concept id; throws UnknownConcept.
  double at(const std::string& source, const std::string& target) const;

  std::optional<std::size_t> find(const std::string& concept_id) const;
  /// Throws UnknownConcept.
  std::size_t index_of(const std::string& concept_id) const;

  bool operator==(const WeightMatrix& other) const;

 private:
  std::vector<std::string> concepts_;
  Eigen::MatrixXd w_;
};

/// Builds a state vector aligned with `concepts`. Concepts missing from
/// `values` start at `fill`; ids not in `concepts` throw UnknownConcept.
StateVector make_state(const std::vector<std::string>& concepts, const std::map<std::string, double>& values,
                       double fill = 0.0);

}  // namespace fcm
