#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "edgewise/checkpoint.hpp"
#include "edgewise/config.hpp"
#include "edgewise/errors.hpp"
#include "edgewise/featurize.hpp"
#include "edgewise/io.hpp"
#include "edgewise/log.hpp"
#include "edgewise/metrics.hpp"
#include "edgewise/model.hpp"
#include "edgewise/pca.hpp"
#include "edgewise/rng.hpp"
#include "edgewise/train.hpp"
#include "manifest.hpp"

namespace edgewise::cli {

namespace {

constexpr std::uint64_t kTrainValStream = 0x434c4956ull;

void apply_overrides(RunConfig& cfg, const CommonOverrides& overrides) {
  if (overrides.seed) cfg.train.seed = *overrides.seed;
  if (overrides.attend_over) {
    cfg.model.attend_over = attend_over_from_string(*overrides.attend_over);
  }
  if (overrides.exclude_center_edge) cfg.model.exclude_center_edge = true;
}

ModelConfig resolve_model(const ModelConfig& model, const Graph& graph) {
  ModelConfig resolved = model;
  if (resolved.input_dim == 0) resolved.input_dim = graph.feature_dim();
  if (resolved.edge_dim == 0) resolved.edge_dim = graph.edge_feature_dim();
  if (resolved.input_dim != graph.feature_dim()) {
    throw InvalidArgument("model input_dim " + std::to_string(resolved.input_dim) +
                          " does not match graph feature width " +
                          std::to_string(graph.feature_dim()));
  }
  if (resolved.edge_dim != graph.edge_feature_dim()) {
    throw InvalidArgument("model edge_dim does not match graph edge feature width");
  }
  return resolved;
}

/// Seeded validation carve: round(fraction * n) indices become validation.
std::pair<std::vector<Pattern>, std::vector<Pattern>> split_train_val(
    const std::vector<Pattern>& patterns, double fraction, std::uint64_t seed) {
  std::vector<std::size_t> order(patterns.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, kTrainValStream));
  rng.shuffle(order);
  const auto val_size = static_cast<std::size_t>(
      std::lround(fraction * static_cast<double>(patterns.size())));
  std::vector<std::size_t> val_idx(order.begin(), order.begin() + val_size);
  std::vector<std::size_t> train_idx(order.begin() + val_size, order.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::pair<std::vector<Pattern>, std::vector<Pattern>> out;
  for (std::size_t idx : train_idx) out.first.push_back(patterns[idx]);
  for (std::size_t idx : val_idx) out.second.push_back(patterns[idx]);
  return out;
}

std::vector<Pattern> gather(const std::vector<Pattern>& patterns,
                            const std::vector<std::size_t>& idx) {
  std::vector<Pattern> out;
  out.reserve(idx.size());
  for (std::size_t k : idx) out.push_back(patterns[k]);
  return out;
}

MetricsReport test_metrics(const Model& model, const Parameters& params,
                           const Graph& graph, const std::vector<Pattern>& test,
                           Task task) {
  std::vector<double> scores;
  std::vector<double> targets;
  for (const Pattern& p : test) {
    if (!p.label) continue;
    const auto sub = induce_pattern_subgraph(graph, graph.require(p.i),
                                             graph.require(p.j),
                                             model.config().exclude_center_edge);
    scores.push_back(model.predict(params, sub).prediction);
    targets.push_back(*p.label);
  }
  if (scores.empty()) {
    throw DataError("crossval: a test fold has no labeled patterns");
  }
  return evaluate_metrics(scores, targets, task == Task::kBinaryClassification);
}

}  // namespace

int cmd_knn_graph(const std::filesystem::path& similarity, std::size_t k,
                  const std::filesystem::path& out_dir, bool mutual) {
  Stopwatch watch;
  std::vector<std::string> ids;
  const Dense matrix = read_similarity_tsv(similarity, ids);
  const Graph graph = build_knn_graph(
      matrix, ids, k, mutual ? KnnSymmetrize::kMutual : KnnSymmetrize::kUnion);
  save_graph_dir(out_dir, graph);

  double mean_degree =
      2.0 * static_cast<double>(graph.edge_count()) / static_cast<double>(graph.node_count());
  std::cout << "nodes: " << graph.node_count() << "\n"
            << "edges: " << graph.edge_count() << "\n"
            << "degree min/mean/max: " << graph.min_degree() << "/"
            << format_double(mean_degree) << "/" << graph.max_degree() << "\n";

  RunManifest manifest;
  manifest.command = "knn-graph";
  add_input(manifest, similarity);
  manifest.artifacts = {(out_dir / "nodes.tsv").string(),
                        (out_dir / "edges.tsv").string()};
  manifest.wall_time_sec = watch.seconds();
  write_manifest(out_dir / "manifest.json", manifest);
  return kExitOk;
}

int cmd_featurize_ct(const std::filesystem::path& fasta,
                     const std::filesystem::path& out,
                     const std::optional<std::filesystem::path>& groups,
                     bool raw_counts) {
  Stopwatch watch;
  const CtGrouping grouping =
      groups ? CtGrouping::from_file(*groups) : CtGrouping::standard();
  const auto records = read_fasta(fasta);
  if (records.empty()) throw DataError(fasta.string() + ": no FASTA records");

  std::vector<std::string> ids;
  Dense features(records.size(), 343);
  std::size_t warnings = 0;
  for (std::size_t r = 0; r < records.size(); ++r) {
    ids.push_back(records[r].first);
    const CTVector ct = ct_features(records[r].second, grouping, !raw_counts);
    if (ct.warning) {
      ++warnings;
      log_warn("featurize-ct: '" + records[r].first + "' has no valid triad window");
    }
    for (std::size_t c = 0; c < 343; ++c) features(r, c) = ct.values[c];
  }
  write_node_features_tsv(out, ids, features);
  std::cout << "sequences: " << records.size() << "\n"
            << "zero-window warnings: " << warnings << "\n";

  RunManifest manifest;
  manifest.command = "featurize-ct";
  add_input(manifest, fasta);
  if (groups) add_input(manifest, *groups);
  manifest.artifacts = {out.string()};
  manifest.wall_time_sec = watch.seconds();
  write_manifest(out.parent_path() / (out.stem().string() + ".manifest.json"),
                 manifest);
  return kExitOk;
}

int cmd_tanimoto_targets(const std::filesystem::path& fingerprints,
                         const std::optional<std::filesystem::path>& nodes,
                         const std::optional<std::filesystem::path>& pairs,
                         const std::filesystem::path& out) {
  Stopwatch watch;
  const auto fps = read_fingerprints_tsv(fingerprints);

  std::vector<std::pair<std::string, std::string>> pair_list;
  if (pairs) {
    for (const Pattern& p : read_patterns_tsv(*pairs)) {
      pair_list.emplace_back(p.i, p.j);
    }
  } else {
    std::vector<std::string> ids;
    if (nodes) {
      std::ifstream in(*nodes);
      if (!in) throw DataError("cannot open '" + nodes->string() + "'");
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) ids.push_back(line);
      }
      if (ids.empty()) throw DataError(nodes->string() + ": no ids found");
    } else {
      for (const Fingerprint& fp : fps) ids.push_back(fp.id);
    }
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        pair_list.emplace_back(ids[a], ids[b]);
      }
    }
  }

  const auto targets = pairwise_tanimoto_targets(fps, pair_list);
  write_patterns_tsv(out, targets.patterns);
  std::cout << "patterns: " << targets.patterns.size() << "\n"
            << "labeled: " << targets.labeled << "\n"
            << "unlabeled: " << targets.unlabeled << "\n";

  RunManifest manifest;
  manifest.command = "tanimoto-targets";
  add_input(manifest, fingerprints);
  if (pairs) add_input(manifest, *pairs);
  manifest.artifacts = {out.string()};
  manifest.wall_time_sec = watch.seconds();
  write_manifest(out.parent_path() / (out.stem().string() + ".manifest.json"),
                 manifest);
  return kExitOk;
}

int cmd_train(const std::filesystem::path& config,
              const std::filesystem::path& graph_dir,
              const std::filesystem::path& patterns,
              const std::filesystem::path& out_ckpt, const CommonOverrides& overrides,
              std::size_t runs) {
  Stopwatch watch;
  RunConfig cfg = load_run_config(config);
  apply_overrides(cfg, overrides);
  const Graph graph = load_graph_dir(graph_dir);
  const ModelConfig model_cfg = resolve_model(cfg.model, graph);
  const auto all_patterns = read_patterns_tsv(patterns);
  const std::size_t unlabeled = static_cast<std::size_t>(
      std::count_if(all_patterns.begin(), all_patterns.end(),
                    [](const Pattern& p) { return !p.label.has_value(); }));
  if (unlabeled > 0) {
    std::cout << "unlabeled patterns: " << unlabeled << "\n";
  }
  const auto [train_set, val_set] = split_train_val(
      all_patterns, cfg.train.validation_fraction, cfg.train.seed);

  if (runs < 1) runs = 1;
  std::optional<TrainResult> best;
  std::uint64_t best_seed = cfg.train.seed;
  for (std::size_t run = 0; run < runs; ++run) {
    TrainConfig run_cfg = cfg.train;
    run_cfg.seed = cfg.train.seed + run;
    TrainResult result = train(graph, train_set, val_set, model_cfg, run_cfg);
    log_info("train run " + std::to_string(run) + ": best epoch " +
             std::to_string(result.history.best_epoch) + ", monitor " +
             format_double(result.history.best_monitor));
    if (!best || result.history.best_monitor < best->history.best_monitor) {
      best = std::move(result);
      best_seed = run_cfg.seed;
    }
  }

  save_checkpoint(out_ckpt, model_cfg, best->params);
  const std::filesystem::path history_path =
      out_ckpt.parent_path() / (out_ckpt.stem().string() + ".history.csv");
  write_history_csv(history_path, best->history);
  std::cout << "best epoch: " << best->history.best_epoch << " ("
            << best->history.stop_reason << ")\n"
            << "selected seed: " << best_seed << "\n";

  RunManifest manifest;
  manifest.command = "train";
  manifest.config_path = config.string();
  add_input(manifest, config);
  add_input_dir(manifest, graph_dir);
  add_input(manifest, patterns);
  manifest.seed = cfg.train.seed;
  manifest.artifacts = {out_ckpt.string(), history_path.string()};
  manifest.wall_time_sec = watch.seconds();
  write_manifest(out_ckpt.parent_path() / (out_ckpt.stem().string() + ".manifest.json"),
                 manifest);
  return kExitOk;
}

int cmd_predict(const std::filesystem::path& ckpt,
                const std::filesystem::path& graph_dir,
                const std::filesystem::path& patterns,
                const std::filesystem::path& out) {
  Stopwatch watch;
  Checkpoint checkpoint = load_checkpoint(ckpt);
  const Graph graph = load_graph_dir(graph_dir);
  if (checkpoint.config.input_dim != graph.feature_dim() ||
      checkpoint.config.edge_dim != graph.edge_feature_dim()) {
    throw InvalidArgument("predict: checkpoint dimensions do not match the graph");
  }
  const Model model(checkpoint.config);
  model.validate_params(checkpoint.params);
  const auto pattern_list = read_patterns_tsv(patterns);

  // validate every row before predicting anything
  std::size_t bad = 0;
  for (std::size_t row = 0; row < pattern_list.size(); ++row) {
    for (const std::string& id : {pattern_list[row].i, pattern_list[row].j}) {
      if (!graph.find(id)) {
        std::cerr << patterns.string() << ": row " << row + 2 << ": unknown node id '"
                  << id << "'\n";
        ++bad;
      }
    }
  }
  if (bad > 0) {
    throw LookupError("predict: " + std::to_string(bad) + " unknown node id(s)");
  }

  std::string text = "i\tj\tprediction\tcosine\n";
  for (const Pattern& p : pattern_list) {
    const auto sub = induce_pattern_subgraph(graph, graph.require(p.i),
                                             graph.require(p.j),
                                             checkpoint.config.exclude_center_edge);
    const auto output = model.predict(checkpoint.params, sub);
    text += p.i;
    text += '\t';
    text += p.j;
    text += '\t';
    text += format_double(output.prediction);
    text += '\t';
    text += format_double(cosine_similarity_value(output.z_i, output.z_j));
    text += '\n';
  }
  write_text_atomic(out, text);

  RunManifest manifest;
  manifest.command = "predict";
  add_input(manifest, ckpt);
  add_input_dir(manifest, graph_dir);
  add_input(manifest, patterns);
  manifest.artifacts = {out.string()};
  manifest.wall_time_sec = watch.seconds();
  write_manifest(out.parent_path() / (out.stem().string() + ".manifest.json"),
                 manifest);
  return kExitOk;
}

int cmd_crossval(const std::filesystem::path& config,
                 const std::filesystem::path& graph_dir,
                 const std::filesystem::path& patterns,
                 const std::filesystem::path& out_dir,
                 const CommonOverrides& overrides, std::size_t jobs) {
  Stopwatch watch;
  RunConfig cfg = load_run_config(config);
  apply_overrides(cfg, overrides);
  const Graph graph = load_graph_dir(graph_dir);
  const ModelConfig model_cfg = resolve_model(cfg.model, graph);
  const auto all_patterns = read_patterns_tsv(patterns);

  const auto splits = kfold_split(all_patterns.size(), cfg.train.folds,
                                  cfg.train.repeats, cfg.train.seed,
                                  cfg.train.validation_fraction);
  std::filesystem::create_directories(out_dir);

  // fold assignment file
  {
    std::string text = "repeat\tfold\trole\tindex\ti\tj\n";
    for (const auto& split : splits) {
      auto emit = [&](const std::vector<std::size_t>& idx, const char* role) {
        for (std::size_t k : idx) {
          text += std::to_string(split.repeat);
          text += '\t';
          text += std::to_string(split.fold);
          text += '\t';
          text += role;
          text += '\t';
          text += std::to_string(k);
          text += '\t';
          text += all_patterns[k].i;
          text += '\t';
          text += all_patterns[k].j;
          text += '\n';
        }
      };
      emit(split.train, "train");
      emit(split.validation, "val");
      emit(split.test, "test");
    }
    write_text_atomic(out_dir / "folds.tsv", text);
  }

  std::vector<std::optional<MetricsReport>> reports(splits.size());
  std::vector<std::string> failures(splits.size());
  std::mutex log_mutex;
  const Model eval_model(model_cfg);

  auto run_split = [&](std::size_t s) {
    const FoldSplit& split = splits[s];
    try {
      TrainConfig fold_cfg = cfg.train;
      fold_cfg.seed = derive_seed(cfg.train.seed, 7000 + split.repeat * 97 + split.fold);
      const auto result = train(graph, gather(all_patterns, split.train),
                                gather(all_patterns, split.validation), model_cfg,
                                fold_cfg);
      const auto report = test_metrics(eval_model, result.params, graph,
                                       gather(all_patterns, split.test),
                                       cfg.train.task);
      reports[s] = report;
      const std::string name = "metrics_r" + std::to_string(split.repeat) + "_f" +
                               std::to_string(split.fold) + ".json";
      write_text_atomic(out_dir / name,
                        metrics_to_json(report, model_config_to_json(model_cfg)));
    } catch (const std::exception& e) {
      std::scoped_lock lock(log_mutex);
      failures[s] = e.what();
    }
  };

  if (jobs <= 1) {
    for (std::size_t s = 0; s < splits.size(); ++s) run_split(s);
  } else {
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < std::min(jobs, splits.size()); ++w) {
      workers.emplace_back([&] {
        while (true) {
          const std::size_t s = next.fetch_add(1);
          if (s >= splits.size()) return;
          run_split(s);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  // aggregate over successful splits
  nlohmann::json aggregate;
  auto stat = [&](const char* key, auto getter) {
    std::vector<double> values;
    for (const auto& report : reports) {
      if (!report) continue;
      if (auto v = getter(*report)) values.push_back(*v);
    }
    if (values.empty()) return;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double stddev =
        values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
    aggregate[key] = {{"mean", mean}, {"stddev", stddev}, {"count", values.size()}};
  };
  stat("mae", [](const MetricsReport& r) { return r.mean_absolute_error; });
  stat("f1", [](const MetricsReport& r) -> std::optional<double> {
    if (!r.classification) return std::nullopt;
    return r.classification->f1;
  });
  stat("precision", [](const MetricsReport& r) -> std::optional<double> {
    if (!r.classification) return std::nullopt;
    return r.classification->precision;
  });
  stat("recall", [](const MetricsReport& r) -> std::optional<double> {
    if (!r.classification) return std::nullopt;
    return r.classification->recall;
  });
  stat("f1_max", [](const MetricsReport& r) -> std::optional<double> {
    if (!r.f1max) return std::nullopt;
    return r.f1max->f1;
  });
  aggregate["splits"] = splits.size();
  aggregate["config"] = nlohmann::json::parse(model_config_to_json(model_cfg));
  write_text_atomic(out_dir / "aggregate.json", aggregate.dump(2));

  RunManifest manifest;
  manifest.command = "crossval";
  manifest.config_path = config.string();
  add_input(manifest, config);
  add_input_dir(manifest, graph_dir);
  add_input(manifest, patterns);
  manifest.seed = cfg.train.seed;
  manifest.artifacts.push_back((out_dir / "folds.tsv").string());
  manifest.artifacts.push_back((out_dir / "aggregate.json").string());
  for (const auto& split : splits) {
    manifest.artifacts.push_back(
        (out_dir / ("metrics_r" + std::to_string(split.repeat) + "_f" +
                    std::to_string(split.fold) + ".json"))
            .string());
  }
  manifest.wall_time_sec = watch.seconds();
  write_manifest(out_dir / "manifest.json", manifest);

  std::size_t failed = 0;
  for (std::size_t s = 0; s < splits.size(); ++s) {
    if (!failures[s].empty()) {
      ++failed;
      std::cerr << "fold r" << splits[s].repeat << " f" << splits[s].fold
                << " failed: " << failures[s] << "\n";
    }
  }
  std::cout << "splits: " << splits.size() << ", failed: " << failed << "\n";
  return failed == 0 ? kExitOk : kExitNumeric;
}

int cmd_eval(const std::filesystem::path& predictions,
             const std::filesystem::path& patterns,
             const std::filesystem::path& out, const std::string& task,
             double threshold) {
  Stopwatch watch;
  const Task task_kind = task_from_string(task);

  // predictions TSV: i, j, prediction, cosine
  const std::string text = read_text_file(predictions);
  std::vector<std::tuple<std::string, std::string, double>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line.rfind("i\tj\tprediction", 0) != 0) {
        throw DataError(predictions.string() + ": unexpected header");
      }
      continue;
    }
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const std::size_t tab = line.find('\t', pos);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    if (fields.size() < 3) {
      throw DataError(predictions.string() + ":" + std::to_string(line_no) +
                      ": expected i, j, prediction");
    }
    rows.emplace_back(fields[0], fields[1],
                      parse_double(fields[2], predictions.string()));
  }

  std::map<std::pair<std::string, std::string>, double> labels;
  for (const Pattern& p : read_patterns_tsv(patterns)) {
    if (!p.label) continue;
    labels[std::minmax(p.i, p.j)] = *p.label;
  }

  std::vector<double> scores;
  std::vector<double> targets;
  for (const auto& [i, j, score] : rows) {
    auto it = labels.find(std::minmax(i, j));
    if (it == labels.end()) continue;
    scores.push_back(score);
    targets.push_back(it->second);
  }
  if (scores.empty()) {
    throw DataError("eval: no labeled patterns match the prediction rows");
  }
  const auto report = evaluate_metrics(scores, targets,
                                       task_kind == Task::kBinaryClassification,
                                       threshold);
  write_text_atomic(out, metrics_to_json(report));
  std::cout << "evaluated patterns: " << report.count << "\n";
  if (report.mean_absolute_error) {
    std::cout << "mae: " << format_double(*report.mean_absolute_error) << "\n";
  }
  if (report.classification) {
    std::cout << "f1@" << format_double(threshold) << ": "
              << format_double(report.classification->f1) << "\n";
  }
  if (report.f1max) {
    std::cout << "f1_max: " << format_double(report.f1max->f1) << "\n";
  }

  RunManifest manifest;
  manifest.command = "eval";
  add_input(manifest, predictions);
  add_input(manifest, patterns);
  manifest.artifacts = {out.string()};
  manifest.wall_time_sec = watch.seconds();
  write_manifest(out.parent_path() / (out.stem().string() + ".manifest.json"),
                 manifest);
  return kExitOk;
}

int cmd_embed(const std::filesystem::path& ckpt,
              const std::filesystem::path& graph_dir,
              const std::filesystem::path& out_dir) {
  Stopwatch watch;
  Checkpoint checkpoint = load_checkpoint(ckpt);
  const Graph graph = load_graph_dir(graph_dir);
  if (checkpoint.config.input_dim != graph.feature_dim()) {
    throw InvalidArgument("embed: checkpoint dimensions do not match the graph");
  }
  const Model model(checkpoint.config);
  model.validate_params(checkpoint.params);

  std::filesystem::create_directories(out_dir);
  const std::size_t width = checkpoint.config.embedding_dim();
  Dense embeddings(graph.node_count(), width);
  for (std::size_t node = 0; node < graph.node_count(); ++node) {
    const Dense z = model.embed_node(checkpoint.params, graph, node);
    for (std::size_t c = 0; c < width; ++c) embeddings(node, c) = z(0, c);
  }
  write_node_features_tsv(out_dir / "embeddings.tsv", graph.node_ids(), embeddings);

  const auto projection = pca2(embeddings);
  std::string text;
  for (std::size_t node = 0; node < graph.node_count(); ++node) {
    text += graph.node_ids()[node];
    text += '\t';
    text += format_double(projection.coordinates(node, 0));
    text += '\t';
    text += format_double(projection.coordinates(node, 1));
    text += '\n';
  }
  write_text_atomic(out_dir / "pca.tsv", text);

  nlohmann::json sidecar;
  sidecar["explained_variance"] = {projection.explained_variance[0],
                                   projection.explained_variance[1]};
  sidecar["eigenvalues"] = {projection.eigenvalues[0], projection.eigenvalues[1]};
  write_text_atomic(out_dir / "pca.json", sidecar.dump(2));

  RunManifest manifest;
  manifest.command = "embed";
  add_input(manifest, ckpt);
  add_input_dir(manifest, graph_dir);
  manifest.artifacts = {(out_dir / "embeddings.tsv").string(),
                        (out_dir / "pca.tsv").string(),
                        (out_dir / "pca.json").string()};
  manifest.wall_time_sec = watch.seconds();
  write_manifest(out_dir / "manifest.json", manifest);
  return kExitOk;
}

}  // namespace edgewise::cli
