#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "edgewise/errors.hpp"
#include "commands.hpp"

namespace {

using edgewise::cli::CommonOverrides;

struct SeedOption {
  std::uint64_t value = 0;
  bool set = false;
};

void attach_overrides(CLI::App* cmd, CommonOverrides& overrides, SeedOption& seed) {
  cmd->add_option("--seed", seed.value, "Override the config seed")
      ->each([&seed](const std::string&) { seed.set = true; });
  cmd->add_option("--attend-over", overrides.attend_over,
                  "Attention sources: neighbors|members")
      ->check(CLI::IsMember({"neighbors", "members"}));
  cmd->add_flag("--exclude-center-edge", overrides.exclude_center_edge,
                "Drop a direct edge between the two pattern centers");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edgewise: edge-centric graph attention model pipeline"};
  app.require_subcommand(1);

  // knn-graph
  std::string sim_path, out_dir;
  std::size_t k = 0;
  bool mutual = false;
  auto* knn = app.add_subcommand("knn-graph",
                                 "Build an undirected k-nearest-neighbor graph "
                                 "from a similarity matrix");
  knn->add_option("--similarity", sim_path, "Similarity matrix TSV")->required();
  knn->add_option("--k", k, "Neighbors per node")->required();
  knn->add_option("--out", out_dir, "Output graph directory")->required();
  knn->add_flag("--mutual", mutual, "Keep only mutually selected edges");

  // featurize-ct
  std::string fasta_path, ct_out;
  std::string groups_path;
  bool raw_counts = false;
  auto* ct = app.add_subcommand("featurize-ct",
                                "Conjoint-triad features from a FASTA file");
  ct->add_option("--fasta", fasta_path, "Input FASTA")->required();
  ct->add_option("--out", ct_out, "Output node feature TSV")->required();
  ct->add_option("--groups", groups_path, "Override the 7-group residue table");
  ct->add_flag("--raw-counts", raw_counts, "Skip frequency normalization");

  // tanimoto-targets
  std::string fp_path, nodes_path, pairs_path, targets_out;
  auto* tt = app.add_subcommand("tanimoto-targets",
                                "Pairwise Tanimoto-labeled patterns from "
                                "fingerprints");
  tt->add_option("--fingerprints", fp_path, "Fingerprint TSV (id, bits)")->required();
  tt->add_option("--nodes", nodes_path,
                 "Full id list (one per line); pairs involving ids without "
                 "fingerprints become unlabeled");
  tt->add_option("--pairs", pairs_path, "Explicit pair list (patterns TSV)");
  tt->add_option("--out", targets_out, "Output patterns TSV")->required();

  // train
  std::string train_config, train_graph, train_patterns, train_out;
  std::size_t runs = 1;
  std::string select = "best-val";
  CommonOverrides train_overrides;
  SeedOption train_seed;
  auto* tr = app.add_subcommand("train", "Train a model and write a checkpoint");
  tr->add_option("--config", train_config, "Config JSON")->required();
  tr->add_option("--graph", train_graph, "Graph directory")->required();
  tr->add_option("--patterns", train_patterns, "Patterns TSV")->required();
  tr->add_option("--out", train_out, "Output checkpoint JSON")->required();
  tr->add_option("--runs", runs, "Seed-repetition count; the best run is kept");
  tr->add_option("--select", select, "Run selection rule")
      ->check(CLI::IsMember({"best-val"}));
  attach_overrides(tr, train_overrides, train_seed);

  // predict
  std::string pd_ckpt, pd_graph, pd_patterns, pd_out;
  auto* pd = app.add_subcommand("predict", "Predict pattern scores with a checkpoint");
  pd->add_option("--ckpt", pd_ckpt, "Checkpoint JSON")->required();
  pd->add_option("--graph", pd_graph, "Graph directory")->required();
  pd->add_option("--patterns", pd_patterns, "Patterns TSV")->required();
  pd->add_option("--out", pd_out, "Output predictions TSV")->required();

  // crossval
  std::string cv_config, cv_graph, cv_patterns, cv_out;
  std::size_t jobs = 1;
  CommonOverrides cv_overrides;
  SeedOption cv_seed;
  auto* cv = app.add_subcommand("crossval",
                                "Repeated k-fold cross-validation with per-fold "
                                "metrics");
  cv->add_option("--config", cv_config, "Config JSON")->required();
  cv->add_option("--graph", cv_graph, "Graph directory")->required();
  cv->add_option("--patterns", cv_patterns, "Patterns TSV")->required();
  cv->add_option("--out", cv_out, "Output directory")->required();
  cv->add_option("--jobs", jobs, "Parallel fold workers");
  attach_overrides(cv, cv_overrides, cv_seed);

  // eval
  std::string ev_pred, ev_patterns, ev_out, ev_task = "regression";
  double ev_threshold = 0.5;
  auto* ev = app.add_subcommand("eval", "Score predictions against labeled patterns");
  ev->add_option("--predictions", ev_pred, "Predictions TSV from `predict`")
      ->required();
  ev->add_option("--patterns", ev_patterns, "Patterns TSV with labels")->required();
  ev->add_option("--out", ev_out, "Output metrics JSON")->required();
  ev->add_option("--task", ev_task, "regression|binary-classification");
  ev->add_option("--threshold", ev_threshold, "Classification threshold");

  // embed
  std::string em_ckpt, em_graph, em_out;
  auto* em = app.add_subcommand("embed",
                                "Export per-node embeddings and their 2-D PCA "
                                "projection");
  em->add_option("--ckpt", em_ckpt, "Checkpoint JSON")->required();
  em->add_option("--graph", em_graph, "Graph directory")->required();
  em->add_option("--out", em_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return edgewise::cli::kExitUsage;
  }

  try {
    if (knn->parsed()) {
      return edgewise::cli::cmd_knn_graph(sim_path, k, out_dir, mutual);
    }
    if (ct->parsed()) {
      return edgewise::cli::cmd_featurize_ct(
          fasta_path, ct_out,
          groups_path.empty() ? std::nullopt
                              : std::optional<std::filesystem::path>(groups_path),
          raw_counts);
    }
    if (tt->parsed()) {
      return edgewise::cli::cmd_tanimoto_targets(
          fp_path,
          nodes_path.empty() ? std::nullopt
                             : std::optional<std::filesystem::path>(nodes_path),
          pairs_path.empty() ? std::nullopt
                             : std::optional<std::filesystem::path>(pairs_path),
          targets_out);
    }
    if (tr->parsed()) {
      if (train_seed.set) train_overrides.seed = train_seed.value;
      return edgewise::cli::cmd_train(train_config, train_graph, train_patterns,
                                      train_out, train_overrides, runs);
    }
    if (pd->parsed()) {
      return edgewise::cli::cmd_predict(pd_ckpt, pd_graph, pd_patterns, pd_out);
    }
    if (cv->parsed()) {
      if (cv_seed.set) cv_overrides.seed = cv_seed.value;
      return edgewise::cli::cmd_crossval(cv_config, cv_graph, cv_patterns, cv_out,
                                         cv_overrides, jobs);
    }
    if (ev->parsed()) {
      return edgewise::cli::cmd_eval(ev_pred, ev_patterns, ev_out, ev_task,
                                     ev_threshold);
    }
    if (em->parsed()) {
      return edgewise::cli::cmd_embed(em_ckpt, em_graph, em_out);
    }
  } catch (const edgewise::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return edgewise::cli::kExitUsage;
  } catch (const edgewise::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return edgewise::cli::kExitUsage;
  } catch (const edgewise::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return edgewise::cli::kExitData;
  } catch (const edgewise::LookupError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return edgewise::cli::kExitData;
  } catch (const edgewise::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return edgewise::cli::kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return edgewise::cli::kExitNumeric;
  }
  return edgewise::cli::kExitUsage;
}
