#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fcm {

/// Root of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: missing files, malformed rows, unknown ids, invalid configuration.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical operation had no defined result (zero area, zero baseline, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

class FileNotFound : public InputError {
 public:
  explicit FileNotFound(const std::string& path);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class SchemaError : public InputError {
 public:
  SchemaError(std::size_t row, const std::string& reason);
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class UnknownTerm : public InputError {
 public:
  explicit UnknownTerm(const std::string& term);
};

class EmptyEdge : public InputError {
 public:
  EmptyEdge(const std::string& source, const std::string& target);
};

class InvalidParams : public InputError {
 public:
  InvalidParams(const std::string& term, const std::string& reason);
};

class InvalidConfig : public InputError {
 public:
  using InputError::InputError;
};

class LengthMismatch : public InputError {
 public:
  LengthMismatch(std::size_t lhs, std::size_t rhs);
};

class DimensionMismatch : public InputError {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual);
};

class UnknownConcept : public InputError {
 public:
  explicit UnknownConcept(const std::string& concept_id);
};

class UnknownDoc : public InputError {
 public:
  explicit UnknownDoc(const std::string& concept_id);
};

class InvalidLearningRate : public InvalidConfig {
 public:
  explicit InvalidLearningRate(double eta);
};

class IncompletePattern : public InvalidConfig {
 public:
  using InvalidConfig::InvalidConfig;
};

class EmptyPopulation : public InputError {
 public:
  EmptyPopulation();
};

class InvalidRange : public InputError {
 public:
  using InputError::InputError;
};

class DuplicateName : public InputError {
 public:
  explicit DuplicateName(const std::string& name);
};

class EffectivenessOutOfRange : public InputError {
 public:
  explicit EffectivenessOutOfRange(double effectiveness);
};

class UnknownIntervention : public InputError {
 public:
  explicit UnknownIntervention(const std::string& name);
};

class ZeroArea : public NumericError {
 public:
  ZeroArea();
};

class ZeroBaseline : public NumericError {
 public:
  explicit ZeroBaseline(const std::string& concept_id);
};

}  // namespace fcm
