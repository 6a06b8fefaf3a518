#pragma once

// Record of one command-line invocation, written next to its outputs so the
// run can be replayed.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fcm::cli {

inline constexpr const char* kVersion = "0.1.0";

struct RunManifest {
  std::string command;
  /// Arguments after the program name, with a generated seed made explicit.
  std::vector<std::string> argv;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::optional<std::uint64_t> seed;
  std::string version = kVersion;
  /// Non-fatal outcome notes such as non-convergence.
  std::vector<std::string> notes;
};

nlohmann::ordered_json to_json(const RunManifest& m);
/// Throws SchemaError.
RunManifest manifest_from_json(const nlohmann::ordered_json& j);

/// Atomic: the manifest appears complete or not at all.
void write_manifest(const std::filesystem::path& path, const RunManifest& m);
/// Throws FileNotFound or SchemaError.
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace fcm::cli
