#include "fcm/weight_matrix.hpp"

#include <set>

#include "fcm/error.hpp"

namespace fcm {

namespace {

void require_unique(const std::vector<std::string>& concepts) {
  std::set<std::string> seen;
  for (const auto& c : concepts) {
    if (!seen.insert(c).second) throw InvalidConfig("duplicate concept id '" + c + "'");
  }
}

}  // namespace

WeightMatrix::WeightMatrix(std::vector<std::string> concepts)
    : concepts_(std::move(concepts)),
      w_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(concepts_.size()),
                               static_cast<Eigen::Index>(concepts_.size()))) {
  require_unique(concepts_);
}

WeightMatrix::WeightMatrix(std::vector<std::string> concepts, Eigen::MatrixXd w)
    : concepts_(std::move(concepts)), w_(std::move(w)) {
  require_unique(concepts_);
  const auto n = static_cast<Eigen::Index>(concepts_.size());
  if (w_.rows() != n) throw DimensionMismatch(concepts_.size(), static_cast<std::size_t>(w_.rows()));
  if (w_.cols() != n) throw DimensionMismatch(concepts_.size(), static_cast<std::size_t>(w_.cols()));
}

double WeightMatrix::at(const std::string& source, const std::string& target) const {
  return w_(static_cast<Eigen::Index>(index_of(source)), static_cast<Eigen::Index>(index_of(target)));
}

std::optional<std::size_t> WeightMatrix::find(const std::string& concept_id) const {
  for (std::size_t i = 0; i < concepts_.size(); ++i) {
    if (concepts_[i] == concept_id) return i;
  }
  return std::nullopt;
}

std::size_t WeightMatrix::index_of(const std::string& concept_id) const {
  if (auto i = find(concept_id)) return *i;
  throw UnknownConcept(concept_id);
}

bool WeightMatrix::operator==(const WeightMatrix& other) const {
  return concepts_ == other.concepts_ && w_ == other.w_;
}

StateVector make_state(const std::vector<std::string>& concepts, const std::map<std::string, double>& values,
                       double fill) {
  StateVector state = StateVector::Constant(static_cast<Eigen::Index>(concepts.size()), fill);
  for (const auto& [id, value] : values) {
    bool found = false;
    for (std::size_t i = 0; i < concepts.size(); ++i) {
      if (concepts[i] == id) {
        state(static_cast<Eigen::Index>(i)) = value;
        found = true;
        break;
      }
    }
    if (!found) throw UnknownConcept(id);
  }
  return state;
}

}  // namespace fcm
