#include "edgewise/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "edgewise/errors.hpp"

namespace edgewise {

PrecisionRecallF1 precision_recall_f1(std::span<const double> scores,
                                      std::span<const int> labels, double threshold) {
  if (scores.empty()) throw InvalidArgument("precision_recall_f1: empty input");
  if (scores.size() != labels.size()) {
    throw InvalidArgument("precision_recall_f1: scores and labels differ in length");
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const bool positive = scores[k] >= threshold;
    if (labels[k] != 0 && labels[k] != 1) {
      throw InvalidArgument("precision_recall_f1: labels must be 0 or 1");
    }
    if (positive && labels[k] == 1) ++tp;
    if (positive && labels[k] == 0) ++fp;
    if (!positive && labels[k] == 1) ++fn;
  }
  PrecisionRecallF1 out;
  out.precision = (tp + fp) == 0 ? 0.0
                                 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  out.recall = (tp + fn) == 0 ? 0.0
                              : static_cast<double>(tp) / static_cast<double>(tp + fn);
  out.f1 = (out.precision + out.recall) == 0.0
               ? 0.0
               : 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

F1MaxResult f1_max(std::span<const double> scores, std::span<const int> labels) {
  if (scores.empty()) throw InvalidArgument("f1_max: empty input");
  if (scores.size() != labels.size()) {
    throw InvalidArgument("f1_max: scores and labels differ in length");
  }
  if (std::none_of(labels.begin(), labels.end(), [](int l) { return l == 1; })) {
    throw InvalidArgument("f1_max: undefined without positive labels");
  }
  std::vector<double> thresholds(scores.begin(), scores.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(thresholds.back() + 1.0);

  F1MaxResult best;
  bool first = true;
  for (double tau : thresholds) {
    const auto prf = precision_recall_f1(scores, labels, tau);
    if (first || prf.f1 > best.f1) {
      best.f1 = prf.f1;
      best.threshold = tau;
      first = false;
    }
  }
  return best;
}

double mae(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.empty()) throw InvalidArgument("mae: empty input");
  if (predictions.size() != targets.size()) {
    throw InvalidArgument("mae: predictions and targets differ in length");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    acc += std::abs(targets[k] - predictions[k]);
  }
  return acc / static_cast<double>(predictions.size());
}

MetricsReport evaluate_metrics(std::span<const double> scores,
                               std::span<const double> targets, bool binary_labels,
                               double threshold) {
  MetricsReport report;
  report.count = scores.size();
  report.threshold = threshold;
  report.mean_absolute_error = mae(scores, targets);
  if (binary_labels) {
    std::vector<int> labels;
    labels.reserve(targets.size());
    for (double t : targets) {
      if (t != 0.0 && t != 1.0) {
        throw InvalidArgument("evaluate_metrics: binary labels must be 0 or 1");
      }
      labels.push_back(t == 1.0 ? 1 : 0);
    }
    report.classification = precision_recall_f1(scores, labels, threshold);
    if (std::any_of(labels.begin(), labels.end(), [](int l) { return l == 1; })) {
      report.f1max = f1_max(scores, labels);
    }
  }
  return report;
}

std::string metrics_to_json(const MetricsReport& report,
                            const std::string& config_echo_json) {
  nlohmann::json doc;
  doc["count"] = report.count;
  if (report.classification) {
    doc["precision"] = report.classification->precision;
    doc["recall"] = report.classification->recall;
    doc["f1"] = report.classification->f1;
    doc["threshold"] = report.threshold;
  }
  if (report.f1max) {
    doc["f1_max"] = report.f1max->f1;
    doc["f1_max_threshold"] = report.f1max->threshold;
  }
  if (report.mean_absolute_error) {
    doc["mae"] = *report.mean_absolute_error;
  }
  if (!config_echo_json.empty()) {
    doc["config"] = nlohmann::json::parse(config_echo_json);
  }
  return doc.dump(2);
}

}  // namespace edgewise
