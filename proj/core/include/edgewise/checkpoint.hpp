#pragma once

#include <filesystem>
#include <string>

#include "edgewise/config.hpp"
#include "edgewise/parameters.hpp"

namespace edgewise {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  ModelConfig config;
  Parameters params;
};

/// Checkpoint JSON: {"version": 1, "config_hash": ..., "config": {...},
/// "parameters": {name: {rows, cols, data}}}. Numbers are rendered with
/// shortest round-trip decimals, so save/load is lossless and byte-stable.
std::string checkpoint_to_json(const ModelConfig& config, const Parameters& params);
void save_checkpoint(const std::filesystem::path& path, const ModelConfig& config,
                     const Parameters& params);

Checkpoint parse_checkpoint(const std::string& json_text);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace edgewise
