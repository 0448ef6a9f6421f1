#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace edgewise {

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Confusion-matrix metrics at one threshold; a score counts as positive
/// when score >= threshold. Zero-denominator precision/recall are 0, and
/// f1 = 0 when precision + recall = 0. Throws InvalidArgument on empty or
/// mismatched inputs.
PrecisionRecallF1 precision_recall_f1(std::span<const double> scores,
                                      std::span<const int> labels, double threshold);

struct F1MaxResult {
  double f1 = 0.0;
  double threshold = 0.0;
};

/// Maximum F1 over all thresholds. The sweep visits the sorted unique score
/// values plus one value above the maximum (F1 is piecewise constant between
/// unique scores); the smallest threshold attaining the maximum is returned.
/// Throws InvalidArgument when no positive label exists.
F1MaxResult f1_max(std::span<const double> scores, std::span<const int> labels);

/// Mean absolute error.
double mae(std::span<const double> predictions, std::span<const double> targets);

struct MetricsReport {
  std::optional<PrecisionRecallF1> classification;  // at `threshold`
  double threshold = 0.5;
  std::optional<F1MaxResult> f1max;
  std::optional<double> mean_absolute_error;
  std::size_t count = 0;
};

/// Metrics over scored patterns. Classification metrics are filled when
/// `binary_labels` is true; MAE is always filled.
MetricsReport evaluate_metrics(std::span<const double> scores,
                               std::span<const double> targets, bool binary_labels,
                               double threshold = 0.5);

std::string metrics_to_json(const MetricsReport& report,
                            const std::string& config_echo_json = "");

}  // namespace edgewise
