#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace fpnn {

// counts[i][j] = examples with true class i predicted as class j.
class ConfusionMatrix {
public:
  explicit ConfusionMatrix(size_t num_classes)
      : num_classes_(num_classes), counts_(num_classes * num_classes, 0) {}

  size_t num_classes() const { return num_classes_; }
  uint64_t at(size_t t, size_t p) const { return counts_[t * num_classes_ + p]; }
  uint64_t& at(size_t t, size_t p) { return counts_[t * num_classes_ + p]; }
  uint64_t total() const;

private:
  size_t num_classes_;
  std::vector<uint64_t> counts_;
};

ConfusionMatrix confusion(std::span<const size_t> y_true,
                          std::span<const size_t> y_pred, size_t num_classes);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  uint64_t support = 0;
};

// One-vs-rest per class: TP=cm[c][c], FP=column−TP, FN=row−TP,
// support=row sum. Division by zero yields 0 for the affected metric.
std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm);

struct ClassReport {
  std::vector<std::string> labels;        // index order (alphabetical)
  std::vector<ClassMetrics> per_class;
  double accuracy = 0.0;                  // trace / total
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  uint64_t total_support = 0;
};

// Aggregates from the confusion matrix; labels must match its class count.
ClassReport build_report(const ConfusionMatrix& cm,
                         const std::vector<std::string>& labels);

// Fixed-width table: header `precision recall f1-score support`, one row per
// class, blank line, `accuracy` row (f1 column and total support only), then
// `macro avg` and `weighted avg`. Metric values rounded to 2 decimals.
std::string render_report(const ClassReport& report);

// Unrounded twin: one key per class label plus `accuracy`, `macro_avg`,
// `weighted_avg`, `total_support`.
std::string report_to_json(const ClassReport& report);
void write_report_json(const ClassReport& report,
                       const std::filesystem::path& path);

}  // namespace fpnn
