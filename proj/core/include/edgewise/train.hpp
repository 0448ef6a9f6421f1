#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "edgewise/config.hpp"
#include "edgewise/graph.hpp"
#include "edgewise/loss.hpp"
#include "edgewise/model.hpp"
#include "edgewise/parameters.hpp"

namespace edgewise {

/// Mean weighted loss terms over one split for one epoch.
struct EpochStats {
  std::size_t epoch = 0;
  double total = 0.0;
  double l_sup = 0.0;
  double l_cos = 0.0;
  double l_cospred = 0.0;
};

struct TrainHistory {
  std::vector<EpochStats> train;
  std::vector<EpochStats> validation;  // empty when no validation set
  std::size_t best_epoch = 0;          // 1-based; 0 when training never ran
  std::string stop_reason;             // "completed" or "early_stop"
  double best_monitor = 0.0;           // monitored value at best_epoch (lower wins)
};

struct TrainResult {
  Parameters params;  // snapshot from the best monitored epoch
  TrainHistory history;
};

/// Pattern with endpoints resolved against a Graph.
struct ResolvedPattern {
  std::size_t i = 0;
  std::size_t j = 0;
  std::optional<double> label;
};

std::vector<ResolvedPattern> resolve_patterns(const Graph& graph,
                                              std::span<const Pattern> patterns);

/// Mini-batch training of the hybrid objective. Patterns are shuffled per
/// epoch with a seed-derived stream; each batch accumulates per-pattern
/// gradients (processed in ascending dataset-index order within the batch),
/// averages them and takes one Adam step. Validation loss (or F1, per
/// cfg.monitor) is evaluated every epoch; training stops early after
/// cfg.patience epochs without improvement and the best epoch's parameters
/// are returned. Throws InvalidArgument when the training split has no
/// labeled pattern.
TrainResult train(const Graph& graph, std::span<const Pattern> train_patterns,
                  std::span<const Pattern> val_patterns, const ModelConfig& model_cfg,
                  const TrainConfig& cfg);

/// Forward + loss evaluation of a pattern set under frozen parameters.
EpochStats evaluate_loss(const Model& model, const Parameters& params,
                         const Graph& graph,
                         std::span<const ResolvedPattern> patterns,
                         const TrainConfig& cfg);

/// Loss and gradient of the composite objective for a single pattern.
/// Exposed for gradient checking.
LossBreakdown pattern_loss_and_gradients(const Model& model, const Parameters& params,
                                         const Graph& graph,
                                         const ResolvedPattern& pattern,
                                         const TrainConfig& cfg, GradientMap* grads);

struct FoldSplit {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

/// Seeded k-fold assignments, repeated. Per repeat a shuffle partitions the
/// indices into k near-equal folds; each fold serves once as test and the
/// validation set is carved out of the remaining train portion
/// (round(validation_fraction * |train portion|), seeded). Folds are
/// disjoint and exhaustive.
std::vector<FoldSplit> kfold_split(std::size_t n_patterns, std::size_t k,
                                   std::size_t repeats, std::uint64_t seed,
                                   double validation_fraction = 0.16);

/// History as CSV with columns epoch, split, total, l_sup, l_cos, l_cospred.
std::string history_to_csv(const TrainHistory& history);
void write_history_csv(const std::filesystem::path& path, const TrainHistory& history);

}  // namespace edgewise
