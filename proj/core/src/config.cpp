#include "edgewise/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "edgewise/errors.hpp"
#include "edgewise/io.hpp"

namespace edgewise {

using nlohmann::json;

std::string to_string(Task t) {
  return t == Task::kRegression ? "regression" : "binary-classification";
}
std::string to_string(TokenizerArch a) {
  return a == TokenizerArch::kDeep ? "deep" : "shallow";
}
std::string to_string(AttendOver a) {
  return a == AttendOver::kNeighbors ? "neighbors" : "members";
}
std::string to_string(Monitor m) {
  return m == Monitor::kValLoss ? "val_loss" : "val_f1";
}

Task task_from_string(std::string_view s) {
  if (s == "regression") return Task::kRegression;
  if (s == "binary-classification" || s == "classification") {
    return Task::kBinaryClassification;
  }
  throw InvalidArgument("config: unknown task '" + std::string(s) + "'");
}

TokenizerArch tokenizer_from_string(std::string_view s) {
  if (s == "deep") return TokenizerArch::kDeep;
  if (s == "shallow") return TokenizerArch::kShallow;
  throw InvalidArgument("config: unknown tokenizer '" + std::string(s) + "'");
}

AttendOver attend_over_from_string(std::string_view s) {
  if (s == "neighbors") return AttendOver::kNeighbors;
  if (s == "members") return AttendOver::kMembers;
  throw InvalidArgument("config: unknown attend-over '" + std::string(s) + "'");
}

Monitor monitor_from_string(std::string_view s) {
  if (s == "val_loss") return Monitor::kValLoss;
  if (s == "val_f1") return Monitor::kValF1;
  throw InvalidArgument("config: unknown monitor '" + std::string(s) + "'");
}

void ModelConfig::validate() const {
  if (token_dim < 1) throw InvalidArgument("model config: token_dim must be >= 1");
  if (head_hidden[0] < 1 || head_hidden[1] < 1) {
    throw InvalidArgument("model config: head_hidden sizes must be >= 1");
  }
}

void TrainConfig::validate() const {
  if (alpha < 0 || beta < 0 || gamma < 0) {
    throw InvalidArgument("train config: loss weights must be nonnegative");
  }
  if (alpha == 0 && beta == 0 && gamma == 0) {
    throw InvalidArgument("train config: at least one loss weight must be positive");
  }
  if (epochs < 1) throw InvalidArgument("train config: epochs must be >= 1");
  if (batch_size < 1) throw InvalidArgument("train config: batch_size must be >= 1");
  if (lr <= 0) throw InvalidArgument("train config: lr must be positive");
  if (folds < 2) throw InvalidArgument("train config: folds must be >= 2");
  if (repeats < 1) throw InvalidArgument("train config: repeats must be >= 1");
  if (validation_fraction < 0 || validation_fraction >= 1) {
    throw InvalidArgument("train config: validation_fraction must be in [0, 1)");
  }
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.contains(key)) {
      throw InvalidArgument("config: unknown key '" + key + "' in " + where);
    }
  }
}

ModelConfig parse_model(const json& obj) {
  static const std::set<std::string> known = {
      "input_dim",   "token_dim", "edge_dim",    "tokenizer_arch",
      "head_hidden", "task",      "attend_over", "exclude_center_edge"};
  reject_unknown_keys(obj, known, "model");
  ModelConfig cfg;
  if (obj.contains("input_dim")) cfg.input_dim = obj.at("input_dim").get<std::size_t>();
  if (obj.contains("token_dim")) cfg.token_dim = obj.at("token_dim").get<std::size_t>();
  if (obj.contains("edge_dim")) cfg.edge_dim = obj.at("edge_dim").get<std::size_t>();
  if (obj.contains("tokenizer_arch")) {
    cfg.tokenizer_arch = tokenizer_from_string(obj.at("tokenizer_arch").get<std::string>());
  }
  if (obj.contains("head_hidden")) {
    const auto& arr = obj.at("head_hidden");
    if (!arr.is_array() || arr.size() != 2) {
      throw InvalidArgument("config: head_hidden must be an array of 2 sizes");
    }
    cfg.head_hidden = {arr[0].get<std::size_t>(), arr[1].get<std::size_t>()};
  }
  if (obj.contains("task")) cfg.task = task_from_string(obj.at("task").get<std::string>());
  if (obj.contains("attend_over")) {
    cfg.attend_over = attend_over_from_string(obj.at("attend_over").get<std::string>());
  }
  if (obj.contains("exclude_center_edge")) {
    cfg.exclude_center_edge = obj.at("exclude_center_edge").get<bool>();
  }
  cfg.validate();
  return cfg;
}

TrainConfig parse_train(const json& obj) {
  static const std::set<std::string> known = {
      "alpha",      "beta",       "gamma",    "epochs",  "batch_size",
      "lr",         "seed",       "patience", "task",    "folds",
      "repeats",    "monitor",    "adam_beta1", "adam_beta2", "adam_eps",
      "validation_fraction"};
  reject_unknown_keys(obj, known, "train");
  TrainConfig cfg;
  if (obj.contains("alpha")) cfg.alpha = obj.at("alpha").get<double>();
  if (obj.contains("beta")) cfg.beta = obj.at("beta").get<double>();
  if (obj.contains("gamma")) cfg.gamma = obj.at("gamma").get<double>();
  if (obj.contains("epochs")) cfg.epochs = obj.at("epochs").get<std::size_t>();
  if (obj.contains("batch_size")) cfg.batch_size = obj.at("batch_size").get<std::size_t>();
  if (obj.contains("lr")) cfg.lr = obj.at("lr").get<double>();
  if (obj.contains("seed")) cfg.seed = obj.at("seed").get<std::uint64_t>();
  if (obj.contains("patience")) cfg.patience = obj.at("patience").get<std::size_t>();
  if (obj.contains("task")) cfg.task = task_from_string(obj.at("task").get<std::string>());
  if (obj.contains("folds")) cfg.folds = obj.at("folds").get<std::size_t>();
  if (obj.contains("repeats")) cfg.repeats = obj.at("repeats").get<std::size_t>();
  if (obj.contains("monitor")) {
    cfg.monitor = monitor_from_string(obj.at("monitor").get<std::string>());
  }
  if (obj.contains("adam_beta1")) cfg.adam_beta1 = obj.at("adam_beta1").get<double>();
  if (obj.contains("adam_beta2")) cfg.adam_beta2 = obj.at("adam_beta2").get<double>();
  if (obj.contains("adam_eps")) cfg.adam_eps = obj.at("adam_eps").get<double>();
  if (obj.contains("validation_fraction")) {
    cfg.validation_fraction = obj.at("validation_fraction").get<double>();
  }
  cfg.validate();
  return cfg;
}

json model_to_json_obj(const ModelConfig& cfg) {
  json obj;
  obj["input_dim"] = cfg.input_dim;
  obj["token_dim"] = cfg.token_dim;
  obj["edge_dim"] = cfg.edge_dim;
  obj["tokenizer_arch"] = to_string(cfg.tokenizer_arch);
  obj["head_hidden"] = {cfg.head_hidden[0], cfg.head_hidden[1]};
  obj["task"] = to_string(cfg.task);
  obj["attend_over"] = to_string(cfg.attend_over);
  obj["exclude_center_edge"] = cfg.exclude_center_edge;
  return obj;
}

json train_to_json_obj(const TrainConfig& cfg) {
  json obj;
  obj["alpha"] = cfg.alpha;
  obj["beta"] = cfg.beta;
  obj["gamma"] = cfg.gamma;
  obj["epochs"] = cfg.epochs;
  obj["batch_size"] = cfg.batch_size;
  obj["lr"] = cfg.lr;
  obj["seed"] = cfg.seed;
  obj["patience"] = cfg.patience;
  obj["task"] = to_string(cfg.task);
  obj["folds"] = cfg.folds;
  obj["repeats"] = cfg.repeats;
  obj["monitor"] = to_string(cfg.monitor);
  obj["adam_beta1"] = cfg.adam_beta1;
  obj["adam_beta2"] = cfg.adam_beta2;
  obj["adam_eps"] = cfg.adam_eps;
  obj["validation_fraction"] = cfg.validation_fraction;
  return obj;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DataError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("config: document must be an object");
  reject_unknown_keys(doc, {"model", "train"}, "config");
  RunConfig cfg;
  if (doc.contains("model")) cfg.model = parse_model(doc.at("model"));
  if (doc.contains("train")) cfg.train = parse_train(doc.at("train"));
  if (cfg.model.task != cfg.train.task) {
    throw InvalidArgument("config: model.task and train.task disagree");
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_text_file(path));
}

std::string run_config_to_json(const RunConfig& cfg) {
  json doc;
  doc["model"] = model_to_json_obj(cfg.model);
  doc["train"] = train_to_json_obj(cfg.train);
  return doc.dump(2);
}

std::string model_config_to_json(const ModelConfig& cfg) {
  return model_to_json_obj(cfg).dump();
}

std::string config_hash(const ModelConfig& cfg) {
  return fnv1a_hex(model_config_to_json(cfg));
}

}  // namespace edgewise
