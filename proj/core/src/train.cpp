#include "edgewise/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "edgewise/errors.hpp"
#include "edgewise/io.hpp"
#include "edgewise/log.hpp"
#include "edgewise/metrics.hpp"
#include "edgewise/rng.hpp"

namespace edgewise {

namespace {

// Derived-stream tags so the epoch shuffle, fold shuffle and validation
// carve never share a stream.
constexpr std::uint64_t kEpochStream = 0x45504f43ull;   // "EPOC"
constexpr std::uint64_t kRepeatStream = 0x52455045ull;  // "REPE"
constexpr std::uint64_t kValStream = 0x56414c43ull;     // "VALC"

PatternSubgraph induce_for(const Graph& graph, const ResolvedPattern& p,
                           const ModelConfig& cfg) {
  return induce_pattern_subgraph(graph, p.i, p.j, cfg.exclude_center_edge);
}

/// Monitored value where smaller is better.
double monitored_value(const Model& model, const Parameters& params,
                       const Graph& graph, std::span<const ResolvedPattern> val,
                       const TrainConfig& cfg, const EpochStats& val_stats) {
  if (cfg.monitor == Monitor::kValLoss) return val_stats.total;
  // val_f1: negate so the best (highest) F1 minimizes the monitor
  std::vector<double> scores;
  std::vector<int> labels;
  for (const ResolvedPattern& p : val) {
    if (!p.label) continue;
    const auto sub = induce_for(graph, p, model.config());
    scores.push_back(model.predict(params, sub).prediction);
    labels.push_back(*p.label == 1.0 ? 1 : 0);
  }
  if (scores.empty() ||
      std::none_of(labels.begin(), labels.end(), [](int l) { return l == 1; })) {
    log_warn("monitor val_f1: no labeled positives in validation, falling back to loss");
    return val_stats.total;
  }
  const auto prf = precision_recall_f1(scores, labels, 0.5);
  return -prf.f1;
}

}  // namespace

std::vector<ResolvedPattern> resolve_patterns(const Graph& graph,
                                              std::span<const Pattern> patterns) {
  std::vector<ResolvedPattern> out;
  out.reserve(patterns.size());
  for (const Pattern& p : patterns) {
    if (p.i == p.j) throw InvalidArgument("pattern endpoints must differ");
    ResolvedPattern r;
    r.i = graph.require(p.i);
    r.j = graph.require(p.j);
    r.label = p.label;
    out.push_back(r);
  }
  return out;
}

LossBreakdown pattern_loss_and_gradients(const Model& model, const Parameters& params,
                                         const Graph& graph,
                                         const ResolvedPattern& pattern,
                                         const TrainConfig& cfg, GradientMap* grads) {
  const auto sub = induce_for(graph, pattern, model.config());
  Tape tape;
  BoundParams bound(tape, params);
  const auto fwd = model.forward(tape, bound, sub);
  Var y_tilde = cosine_embedding_target(tape, fwd.z_i, fwd.z_j);
  LossNodes loss = composite_loss(tape, fwd.prediction, y_tilde, pattern.label, cfg);
  if (grads != nullptr) {
    tape.backward(loss.total);
    *grads = collect_gradients(tape, bound);
  }
  return loss.breakdown;
}

EpochStats evaluate_loss(const Model& model, const Parameters& params,
                         const Graph& graph,
                         std::span<const ResolvedPattern> patterns,
                         const TrainConfig& cfg) {
  EpochStats stats;
  if (patterns.empty()) return stats;
  for (const ResolvedPattern& p : patterns) {
    const LossBreakdown b =
        pattern_loss_and_gradients(model, params, graph, p, cfg, nullptr);
    stats.total += b.total;
    stats.l_sup += b.supervised;
    stats.l_cos += b.cosine;
    stats.l_cospred += b.cosine_pred;
  }
  const double inv = 1.0 / static_cast<double>(patterns.size());
  stats.total *= inv;
  stats.l_sup *= inv;
  stats.l_cos *= inv;
  stats.l_cospred *= inv;
  return stats;
}

TrainResult train(const Graph& graph, std::span<const Pattern> train_patterns,
                  std::span<const Pattern> val_patterns, const ModelConfig& model_cfg,
                  const TrainConfig& cfg) {
  cfg.validate();
  ModelConfig resolved = model_cfg;
  if (resolved.input_dim == 0) resolved.input_dim = graph.feature_dim();
  if (resolved.edge_dim == 0) resolved.edge_dim = graph.edge_feature_dim();
  if (resolved.input_dim != graph.feature_dim()) {
    throw InvalidArgument("train: model input_dim does not match graph features");
  }
  if (resolved.edge_dim != graph.edge_feature_dim()) {
    throw InvalidArgument("train: model edge_dim does not match graph edge features");
  }
  if (resolved.task != cfg.task) {
    throw InvalidArgument("train: model task and train task disagree");
  }
  const Model model(resolved);

  const auto train_set = resolve_patterns(graph, train_patterns);
  const auto val_set = resolve_patterns(graph, val_patterns);
  const std::size_t labeled =
      static_cast<std::size_t>(std::count_if(train_set.begin(), train_set.end(),
                                             [](const auto& p) { return p.label.has_value(); }));
  if (train_set.empty()) throw InvalidArgument("train: empty training split");
  if (labeled == 0) {
    throw InvalidArgument(
        "train: every training pattern is unlabeled, no supervised signal");
  }
  if (labeled < train_set.size()) {
    log_info("train: " + std::to_string(train_set.size() - labeled) +
             " unlabeled pattern(s) contribute only the self-supervised term");
  }

  TrainResult result{model.init_params(cfg.seed), {}};
  Parameters& params = result.params;
  Parameters best = params;
  double best_monitor = std::numeric_limits<double>::infinity();
  std::size_t epochs_since_best = 0;
  const AdamConfig adam{cfg.lr, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps};

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const bool monitor_validation = !val_set.empty();
  result.history.stop_reason = "completed";

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(derive_seed(cfg.seed, kEpochStream), epoch));
    shuffle_rng.shuffle(order);

    EpochStats train_stats;
    train_stats.epoch = epoch;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      // canonical in-batch order keeps accumulation independent of the shuffle
      std::vector<std::size_t> batch(order.begin() + start, order.begin() + stop);
      std::sort(batch.begin(), batch.end());

      GradientMap batch_grads;
      for (std::size_t idx : batch) {
        GradientMap grads;
        const LossBreakdown b = pattern_loss_and_gradients(
            model, params, graph, train_set[idx], cfg, &grads);
        accumulate(batch_grads, grads);
        train_stats.total += b.total;
        train_stats.l_sup += b.supervised;
        train_stats.l_cos += b.cosine;
        train_stats.l_cospred += b.cosine_pred;
      }
      scale_gradients(batch_grads, 1.0 / static_cast<double>(batch.size()));
      adam_step(params, batch_grads, adam);
    }
    const double inv = 1.0 / static_cast<double>(train_set.size());
    train_stats.total *= inv;
    train_stats.l_sup *= inv;
    train_stats.l_cos *= inv;
    train_stats.l_cospred *= inv;
    result.history.train.push_back(train_stats);

    double monitor = train_stats.total;
    if (monitor_validation) {
      EpochStats val_stats = evaluate_loss(model, params, graph, val_set, cfg);
      val_stats.epoch = epoch;
      result.history.validation.push_back(val_stats);
      monitor = monitored_value(model, params, graph, val_set, cfg, val_stats);
    }

    if (monitor < best_monitor) {
      best_monitor = monitor;
      best = params;
      result.history.best_epoch = epoch;
      result.history.best_monitor = monitor;
      epochs_since_best = 0;
    } else {
      ++epochs_since_best;
      if (epochs_since_best > cfg.patience) {
        result.history.stop_reason = "early_stop";
        break;
      }
    }
  }

  result.params = std::move(best);
  return result;
}

std::vector<FoldSplit> kfold_split(std::size_t n_patterns, std::size_t k,
                                   std::size_t repeats, std::uint64_t seed,
                                   double validation_fraction) {
  if (k < 2) throw InvalidArgument("kfold: k must be >= 2");
  if (k > n_patterns) throw InvalidArgument("kfold: k exceeds pattern count");
  if (repeats < 1) throw InvalidArgument("kfold: repeats must be >= 1");

  std::vector<FoldSplit> splits;
  for (std::size_t rep = 0; rep < repeats; ++rep) {
    std::vector<std::size_t> order(n_patterns);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(derive_seed(seed, kRepeatStream), rep));
    rng.shuffle(order);

    // near-equal fold sizes; the first (n mod k) folds get one extra element
    const std::size_t base = n_patterns / k;
    const std::size_t extra = n_patterns % k;
    std::size_t cursor = 0;
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t f = 0; f < k; ++f) {
      const std::size_t size = base + (f < extra ? 1 : 0);
      folds[f].assign(order.begin() + cursor, order.begin() + cursor + size);
      cursor += size;
    }

    for (std::size_t f = 0; f < k; ++f) {
      FoldSplit split;
      split.repeat = rep;
      split.fold = f;
      split.test = folds[f];
      std::vector<std::size_t> rest;
      for (std::size_t g = 0; g < k; ++g) {
        if (g == f) continue;
        rest.insert(rest.end(), folds[g].begin(), folds[g].end());
      }
      Rng val_rng(derive_seed(derive_seed(derive_seed(seed, kValStream), rep), f));
      val_rng.shuffle(rest);
      const auto val_size = static_cast<std::size_t>(
          std::lround(validation_fraction * static_cast<double>(rest.size())));
      split.validation.assign(rest.begin(), rest.begin() + val_size);
      split.train.assign(rest.begin() + val_size, rest.end());
      std::sort(split.validation.begin(), split.validation.end());
      std::sort(split.train.begin(), split.train.end());
      std::sort(split.test.begin(), split.test.end());
      splits.push_back(std::move(split));
    }
  }
  return splits;
}

std::string history_to_csv(const TrainHistory& history) {
  std::string out = "epoch,split,total,l_sup,l_cos,l_cospred\n";
  auto emit = [&out](const EpochStats& s, const char* split) {
    out += std::to_string(s.epoch);
    out += ',';
    out += split;
    out += ',';
    out += format_double(s.total);
    out += ',';
    out += format_double(s.l_sup);
    out += ',';
    out += format_double(s.l_cos);
    out += ',';
    out += format_double(s.l_cospred);
    out += '\n';
  };
  std::size_t vi = 0;
  for (std::size_t ti = 0; ti < history.train.size(); ++ti) {
    emit(history.train[ti], "train");
    if (vi < history.validation.size() &&
        history.validation[vi].epoch == history.train[ti].epoch) {
      emit(history.validation[vi], "val");
      ++vi;
    }
  }
  return out;
}

void write_history_csv(const std::filesystem::path& path, const TrainHistory& history) {
  write_text_atomic(path, history_to_csv(history));
}

}  // namespace edgewise
