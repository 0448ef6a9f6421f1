#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

namespace edgewise {

enum class Task { kRegression, kBinaryClassification };
enum class TokenizerArch { kDeep, kShallow };
enum class AttendOver { kNeighbors, kMembers };
enum class Monitor { kValLoss, kValF1 };

std::string to_string(Task t);
std::string to_string(TokenizerArch a);
std::string to_string(AttendOver a);
std::string to_string(Monitor m);
Task task_from_string(std::string_view s);
TokenizerArch tokenizer_from_string(std::string_view s);
AttendOver attend_over_from_string(std::string_view s);
Monitor monitor_from_string(std::string_view s);

/// Architecture of one model instance. `input_dim` / `edge_dim` may be left
/// 0 in config files, in which case they are resolved from the graph before
/// any parameter is created.
struct ModelConfig {
  std::size_t input_dim = 0;               // d
  std::size_t token_dim = 8;               // t; embeddings have width 2t
  std::size_t edge_dim = 0;                // q; 0 means no edge features
  TokenizerArch tokenizer_arch = TokenizerArch::kDeep;
  std::array<std::size_t, 2> head_hidden = {16, 8};
  Task task = Task::kRegression;
  AttendOver attend_over = AttendOver::kNeighbors;
  bool exclude_center_edge = false;

  std::size_t embedding_dim() const { return 2 * token_dim; }
  void validate() const;
};

struct TrainConfig {
  double alpha = 1.0;  // supervised prediction term
  double beta = 1.0;   // supervised embedding-cosine term
  double gamma = 1.0;  // self-supervised prediction-vs-cosine term
  std::size_t epochs = 300;
  std::size_t batch_size = 32;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  std::size_t patience = 30;
  Task task = Task::kRegression;
  std::size_t folds = 5;
  std::size_t repeats = 1;
  Monitor monitor = Monitor::kValLoss;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double validation_fraction = 0.16;  // carved out of the train portion

  void validate() const;
};

struct RunConfig {
  ModelConfig model;
  TrainConfig train;
};

/// Parse a config JSON document with top-level "model" and "train" objects.
/// Unknown keys anywhere are rejected.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& json_text);
std::string run_config_to_json(const RunConfig& cfg);

/// Canonical JSON rendering of a model config; the checkpoint's config_hash
/// is the FNV-1a 64 digest of this string.
std::string model_config_to_json(const ModelConfig& cfg);
std::string config_hash(const ModelConfig& cfg);

}  // namespace edgewise
