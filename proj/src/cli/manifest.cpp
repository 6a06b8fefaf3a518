#include "fcm/manifest.hpp"

#include "fcm/error.hpp"
#include "fcm/io.hpp"

namespace fcm::cli {

using nlohmann::ordered_json;

ordered_json to_json(const RunManifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["argv"] = m.argv;
  j["config"] = m.config;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["seed"] = m.seed ? ordered_json(*m.seed) : ordered_json(nullptr);
  j["version"] = m.version;
  j["notes"] = m.notes;
  return j;
}

RunManifest manifest_from_json(const ordered_json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.config = j.value("config", ordered_json::object());
    m.inputs = j.value("inputs", std::vector<std::string>{});
    m.outputs = j.value("outputs", std::vector<std::string>{});
    if (j.contains("seed") && !j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.value("version", std::string(kVersion));
    m.notes = j.value("notes", std::vector<std::string>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(0, std::string("malformed run manifest: ") + e.what());
  }
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  io::write_file_atomic(path, to_json(m).dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  const auto text = io::read_text(path);
  try {
    return manifest_from_json(ordered_json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(0, path.string() + ": invalid JSON: " + e.what());
  }
}

}  // namespace fcm::cli
