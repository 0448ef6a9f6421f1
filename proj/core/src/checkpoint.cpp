#include "edgewise/checkpoint.hpp"

#include <json.hpp>

#include "edgewise/errors.hpp"
#include "edgewise/io.hpp"

namespace edgewise {

using nlohmann::json;

std::string checkpoint_to_json(const ModelConfig& config, const Parameters& params) {
  json doc;
  doc["version"] = kCheckpointVersion;
  doc["config_hash"] = config_hash(config);
  doc["config"] = json::parse(model_config_to_json(config));
  json matrices = json::object();
  for (const std::string& name : params.names()) {
    const Dense& value = params.at(name);
    json entry;
    entry["rows"] = value.rows();
    entry["cols"] = value.cols();
    entry["data"] = std::vector<double>(value.values().begin(), value.values().end());
    matrices[name] = std::move(entry);
  }
  doc["parameters"] = std::move(matrices);
  return doc.dump(2);
}

void save_checkpoint(const std::filesystem::path& path, const ModelConfig& config,
                     const Parameters& params) {
  write_text_atomic(path, checkpoint_to_json(config, params));
}

Checkpoint parse_checkpoint(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("version")) {
    throw DataError("checkpoint: missing version");
  }
  if (doc.at("version").get<int>() != kCheckpointVersion) {
    throw DataError("checkpoint: unsupported version");
  }
  if (!doc.contains("config") || !doc.contains("config_hash") ||
      !doc.contains("parameters")) {
    throw DataError("checkpoint: missing config, config_hash or parameters");
  }

  Checkpoint out;
  const json& cfg = doc.at("config");
  out.config.input_dim = cfg.at("input_dim").get<std::size_t>();
  out.config.token_dim = cfg.at("token_dim").get<std::size_t>();
  out.config.edge_dim = cfg.at("edge_dim").get<std::size_t>();
  out.config.tokenizer_arch =
      tokenizer_from_string(cfg.at("tokenizer_arch").get<std::string>());
  out.config.head_hidden = {cfg.at("head_hidden")[0].get<std::size_t>(),
                            cfg.at("head_hidden")[1].get<std::size_t>()};
  out.config.task = task_from_string(cfg.at("task").get<std::string>());
  out.config.attend_over =
      attend_over_from_string(cfg.at("attend_over").get<std::string>());
  out.config.exclude_center_edge = cfg.at("exclude_center_edge").get<bool>();
  out.config.validate();

  const std::string expected = config_hash(out.config);
  if (doc.at("config_hash").get<std::string>() != expected) {
    throw DataError("checkpoint: config_hash does not match the embedded config");
  }

  for (const auto& [name, entry] : doc.at("parameters").items()) {
    const auto rows = entry.at("rows").get<std::size_t>();
    const auto cols = entry.at("cols").get<std::size_t>();
    auto data = entry.at("data").get<std::vector<double>>();
    if (data.size() != rows * cols) {
      throw DataError("checkpoint: parameter '" + name + "' has wrong data length");
    }
    out.params.add(name, Dense(rows, cols, std::move(data)));
  }
  return out;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return parse_checkpoint(read_text_file(path));
}

}  // namespace edgewise
