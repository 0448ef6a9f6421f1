#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace edgewise::cli {

/// Provenance record written next to every command's artifacts: the command,
/// config path, content digests of the inputs, the seed, the artifact paths
/// and the wall time. Everything except wall_time_sec is reproducible.
struct RunManifest {
  std::string command;
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> input_digests;  // path, digest
  std::uint64_t seed = 0;
  std::vector<std::string> artifacts;
  double wall_time_sec = 0.0;
};

void add_input(RunManifest& manifest, const std::filesystem::path& path);
/// Digest every regular file under a directory input (e.g. a graph dir).
void add_input_dir(RunManifest& manifest, const std::filesystem::path& dir);
std::string manifest_to_json(const RunManifest& manifest);
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

/// Wall clock helper for the manifest.
class Stopwatch {
 public:
  Stopwatch();
  double seconds() const;

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace edgewise::cli
