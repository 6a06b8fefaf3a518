#include "fcm/error.hpp"

namespace fcm {

FileNotFound::FileNotFound(const std::string& path)
    : InputError("file not found: " + path), path_(path) {}

SchemaError::SchemaError(std::size_t row, const std::string& reason)
    : InputError("schema error at row " + std::to_string(row) + ": " + reason), row_(row) {}

UnknownTerm::UnknownTerm(const std::string& term) : InputError("unknown linguistic term '" + term + "'") {}

EmptyEdge::EmptyEdge(const std::string& source, const std::string& target)
    : InputError("edge " + source + " -> " + target + " has no ratings") {}

InvalidParams::InvalidParams(const std::string& term, const std::string& reason)
    : InputError("invalid membership parameters for '" + term + "': " + reason) {}

LengthMismatch::LengthMismatch(std::size_t lhs, std::size_t rhs)
    : InputError("membership functions differ in length (" + std::to_string(lhs) + " vs " +
                 std::to_string(rhs) + ")") {}

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t actual)
    : InputError("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                 std::to_string(actual)) {}

UnknownConcept::UnknownConcept(const std::string& concept_id)
    : InputError("unknown concept '" + concept_id + "'") {}

UnknownDoc::UnknownDoc(const std::string& concept_id)
    : InputError("desired output concept '" + concept_id + "' is not in the weight matrix") {}

InvalidLearningRate::InvalidLearningRate(double eta)
    : InvalidConfig("learning rate must be finite and non-negative, got " + std::to_string(eta)) {}

EmptyPopulation::EmptyPopulation() : InputError("population is empty") {}

DuplicateName::DuplicateName(const std::string& name)
    : InputError("intervention '" + name + "' is already registered") {}

EffectivenessOutOfRange::EffectivenessOutOfRange(double effectiveness)
    : InputError("effectiveness must lie in [0,1], got " + std::to_string(effectiveness)) {}

UnknownIntervention::UnknownIntervention(const std::string& name)
    : InputError("no intervention named '" + name + "'") {}

ZeroArea::ZeroArea() : NumericError("membership function has zero area; nothing to defuzzify") {}

ZeroBaseline::ZeroBaseline(const std::string& concept_id)
    : NumericError("baseline equilibrium of '" + concept_id + "' is exactly 0; relative change undefined") {}

}  // namespace fcm
