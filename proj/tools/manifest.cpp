#include "manifest.hpp"

#include <algorithm>
#include <chrono>

#include <json.hpp>

#include "edgewise/io.hpp"

namespace edgewise::cli {

void add_input(RunManifest& manifest, const std::filesystem::path& path) {
  manifest.input_digests.emplace_back(path.string(), file_digest(path));
}

void add_input_dir(RunManifest& manifest, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) add_input(manifest, f);
}

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::json doc;
  doc["command"] = manifest.command;
  doc["config"] = manifest.config_path;
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& [path, digest] : manifest.input_digests) inputs[path] = digest;
  doc["inputs"] = std::move(inputs);
  doc["seed"] = manifest.seed;
  doc["artifacts"] = manifest.artifacts;
  doc["wall_time_sec"] = manifest.wall_time_sec;
  return doc.dump(2);
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  write_text_atomic(path, manifest_to_json(manifest));
}

Stopwatch::Stopwatch() : start_(std::chrono::steady_clock::now()) {}

double Stopwatch::seconds() const {
  const auto elapsed = std::chrono::steady_clock::now() - start_;
  return std::chrono::duration<double>(elapsed).count();
}

}  // namespace edgewise::cli
