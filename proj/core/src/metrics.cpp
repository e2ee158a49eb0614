#include "fpnn/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "fpnn/errors.hpp"

namespace fpnn {

namespace {

constexpr size_t kMinLabelWidth = 12;  // len("weighted avg")

std::string pad_left(const std::string& s, size_t width) {
  if (s.size() >= width) return s;
  return std::string(width - s.size(), ' ') + s;
}

std::string fmt_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%9.2f", v);
  return buf;
}

std::string fmt_support(uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%9llu", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), uint64_t{0});
}

ConfusionMatrix confusion(std::span<const size_t> y_true,
                          std::span<const size_t> y_pred, size_t num_classes) {
  if (y_true.size() != y_pred.size()) {
    throw ArgumentError("confusion: " + std::to_string(y_true.size()) +
                        " true labels vs " + std::to_string(y_pred.size()) +
                        " predictions");
  }
  ConfusionMatrix cm(num_classes);
  for (size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] >= num_classes || y_pred[i] >= num_classes) {
      throw ArgumentError("confusion: class index out of range at position " +
                          std::to_string(i));
    }
    ++cm.at(y_true[i], y_pred[i]);
  }
  return cm;
}

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
  const size_t c_count = cm.num_classes();
  std::vector<ClassMetrics> out(c_count);
  for (size_t c = 0; c < c_count; ++c) {
    uint64_t tp = cm.at(c, c);
    uint64_t col = 0, row = 0;
    for (size_t i = 0; i < c_count; ++i) {
      col += cm.at(i, c);
      row += cm.at(c, i);
    }
    ClassMetrics& m = out[c];
    m.support = row;
    const uint64_t fp = col - tp;
    const uint64_t fn = row - tp;
    if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (m.precision + m.recall > 0.0) {
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
  }
  return out;
}

ClassReport build_report(const ConfusionMatrix& cm,
                         const std::vector<std::string>& labels) {
  if (labels.size() != cm.num_classes()) {
    throw ArgumentError("build_report: " + std::to_string(labels.size()) +
                        " labels vs " + std::to_string(cm.num_classes()) +
                        " classes");
  }
  const uint64_t total = cm.total();
  if (total == 0) throw ArgumentError("build_report: empty confusion matrix");

  ClassReport report;
  report.labels = labels;
  report.per_class = per_class_metrics(cm);
  report.total_support = total;

  uint64_t trace = 0;
  for (size_t c = 0; c < cm.num_classes(); ++c) trace += cm.at(c, c);
  report.accuracy = static_cast<double>(trace) / static_cast<double>(total);

  const double inv_c = 1.0 / static_cast<double>(cm.num_classes());
  const double inv_total = 1.0 / static_cast<double>(total);
  for (const ClassMetrics& m : report.per_class) {
    report.macro_precision += m.precision * inv_c;
    report.macro_recall += m.recall * inv_c;
    report.macro_f1 += m.f1 * inv_c;
    const double w = static_cast<double>(m.support) * inv_total;
    report.weighted_precision += m.precision * w;
    report.weighted_f1 += m.f1 * w;
  }
  // Support-weighted recall is Σ_c support_c/total · TP_c/support_c, which
  // collapses to trace/total; computing it that way keeps it bit-identical
  // to accuracy.
  report.weighted_recall = report.accuracy;
  return report;
}

std::string render_report(const ClassReport& report) {
  size_t width = kMinLabelWidth;
  for (const std::string& label : report.labels) {
    width = std::max(width, label.size());
  }
  std::string out;
  out += std::string(width, ' ');
  out += ' ' + pad_left("precision", 9);
  out += ' ' + pad_left("recall", 9);
  out += ' ' + pad_left("f1-score", 9);
  out += ' ' + pad_left("support", 9);
  out += '\n';

  for (size_t c = 0; c < report.labels.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    out += pad_left(report.labels[c], width);
    out += ' ' + fmt_metric(m.precision);
    out += ' ' + fmt_metric(m.recall);
    out += ' ' + fmt_metric(m.f1);
    out += ' ' + fmt_support(m.support);
    out += '\n';
  }

  out += '\n';
  out += pad_left("accuracy", width);
  out += std::string(20, ' ');
  out += ' ' + fmt_metric(report.accuracy);
  out += ' ' + fmt_support(report.total_support);
  out += '\n';

  out += pad_left("macro avg", width);
  out += ' ' + fmt_metric(report.macro_precision);
  out += ' ' + fmt_metric(report.macro_recall);
  out += ' ' + fmt_metric(report.macro_f1);
  out += ' ' + fmt_support(report.total_support);
  out += '\n';

  out += pad_left("weighted avg", width);
  out += ' ' + fmt_metric(report.weighted_precision);
  out += ' ' + fmt_metric(report.weighted_recall);
  out += ' ' + fmt_metric(report.weighted_f1);
  out += ' ' + fmt_support(report.total_support);
  out += '\n';
  return out;
}

std::string report_to_json(const ClassReport& report) {
  nlohmann::json j;
  for (size_t c = 0; c < report.labels.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    j[report.labels[c]] = {{"precision", m.precision},
                           {"recall", m.recall},
                           {"f1", m.f1},
                           {"support", m.support}};
  }
  j["accuracy"] = report.accuracy;
  j["macro_avg"] = {{"precision", report.macro_precision},
                    {"recall", report.macro_recall},
                    {"f1", report.macro_f1}};
  j["weighted_avg"] = {{"precision", report.weighted_precision},
                       {"recall", report.weighted_recall},
                       {"f1", report.weighted_f1}};
  j["total_support"] = report.total_support;
  return j.dump(2) + "\n";
}

void write_report_json(const ClassReport& report,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open report for writing: " + path.string());
  out << report_to_json(report);
  if (!out) throw IoError("report write failed: " + path.string());
}

}  // namespace fpnn
