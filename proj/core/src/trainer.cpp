#include "fpnn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "fpnn/adam.hpp"
#include "fpnn/errors.hpp"
#include "fpnn/rng.hpp"

namespace fpnn {

namespace {

void check_compatible(const ArchSpec& spec, const Dataset& data,
                      const char* which) {
  if (data.max_len() != spec.max_len) {
    throw ConfigError(std::string(which) + " set max_len " +
                      std::to_string(data.max_len()) + " vs model max_len " +
                      std::to_string(spec.max_len));
  }
  if (data.num_classes() != spec.num_classes) {
    throw ConfigError(std::string(which) + " set has " +
                      std::to_string(data.num_classes()) +
                      " classes vs model " + std::to_string(spec.num_classes));
  }
}

}  // namespace

EvalResult evaluate_pass(const ModelParams& params, const ArchSpec& spec,
                         const Dataset& data) {
  if (data.size() == 0) throw ArgumentError("evaluate_pass: empty data set");
  check_compatible(spec, data, "evaluation");

  EvalResult res{0.0, 0.0, {}};
  res.predictions.reserve(data.size());
  size_t correct = 0;
  for (size_t i = 0; i < data.size(); ++i) {
    const ForwardCaches caches = forward(params, spec, data.ids(i));
    const uint32_t y = data.label(i);
    res.loss -= std::log(std::max(caches.probs(0, y), 1e-12));
    const double* p = caches.probs.row(0);
    size_t arg = 0;
    for (size_t j = 1; j < spec.num_classes; ++j) {
      if (p[j] > p[arg]) arg = j;
    }
    res.predictions.push_back(arg);
    if (arg == y) ++correct;
  }
  res.loss /= static_cast<double>(data.size());
  res.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  return res;
}

std::vector<EpochRecord> train(ModelParams& params, const ArchSpec& spec,
                               const Dataset& train_set, const Dataset& val_set,
                               const TrainConfig& cfg, std::ostream* progress) {
  if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (cfg.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (train_set.size() == 0) throw ArgumentError("train: empty train set");
  check_compatible(spec, train_set, "train");
  if (val_set.size() > 0) check_compatible(spec, val_set, "validation");

  std::vector<double> flat = params.flatten();
  AdamState state(flat.size(), cfg.lr, cfg.beta1, cfg.beta2, cfg.eps);
  Rng rng(cfg.seed);

  std::vector<size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), size_t{0});

  ModelParams grads = zeros_like(spec);
  std::vector<EpochRecord> records;
  records.reserve(cfg.epochs);

  for (size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.shuffle_each_epoch) shuffle(order, rng);

    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t end = std::min(start + cfg.batch_size, order.size());
      grads.for_each_tensor([](const std::string&, Matrix& m) { m.fill(0.0); });
      for (size_t k = start; k < end; ++k) {
        const size_t i = order[k];
        const ForwardCaches caches = forward(params, spec, train_set.ids(i));
        backward(params, spec, caches, train_set.onehot(i), grads);
      }
      const double inv_b = 1.0 / static_cast<double>(end - start);
      std::vector<double> flat_grads = grads.flatten();
      for (double& g : flat_grads) g *= inv_b;
      flat = params.flatten();
      adam_step(flat, flat_grads, state);
      params.unflatten(flat);
    }

    const EvalResult on_train = evaluate_pass(params, spec, train_set);
    EvalResult on_val{0.0, 0.0, {}};
    if (val_set.size() > 0) on_val = evaluate_pass(params, spec, val_set);

    records.push_back({epoch, on_train.loss, on_train.accuracy, on_val.loss,
                       on_val.accuracy});
    if (progress) {
      char line[160];
      std::snprintf(line, sizeof(line),
                    "epoch %zu/%zu train_loss=%.6f val_acc=%.6f", epoch,
                    cfg.epochs, on_train.loss, on_val.accuracy);
      *progress << line << '\n';
    }
  }
  return records;
}

void write_curves(const std::vector<EpochRecord>& records,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open curves file for writing: " + path.string());
  out << "epoch,train_loss,train_acc,val_loss,val_acc\n";
  char line[200];
  for (const EpochRecord& r : records) {
    std::snprintf(line, sizeof(line), "%zu,%.6f,%.6f,%.6f,%.6f", r.epoch,
                  r.train_loss, r.train_acc, r.val_loss, r.val_acc);
    out << line << '\n';
  }
  if (!out) throw IoError("curves write failed: " + path.string());
}

std::vector<EpochRecord> read_curves(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open curves file: " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "epoch,train_loss,train_acc,val_loss,val_acc") {
    throw FormatError("curves file header mismatch: " + path.string());
  }
  std::vector<EpochRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EpochRecord r{};
    std::istringstream fields(line);
    std::string field;
    double* slots[4] = {&r.train_loss, &r.train_acc, &r.val_loss, &r.val_acc};
    if (!std::getline(fields, field, ',')) {
      throw FormatError("curves row missing epoch: " + line);
    }
    r.epoch = std::stoul(field);
    for (double* slot : slots) {
      if (!std::getline(fields, field, ',')) {
        throw FormatError("curves row has too few columns: " + line);
      }
      *slot = std::stod(field);
    }
    records.push_back(r);
  }
  return records;
}

}  // namespace fpnn
