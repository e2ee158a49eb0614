#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "fpnn/dataset.hpp"
#include "fpnn/net.hpp"

namespace fpnn {

struct TrainConfig {
  size_t epochs = 10;
  size_t batch_size = 32;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  uint64_t seed = 0;
  bool shuffle_each_epoch = true;
};

struct EpochRecord {
  size_t epoch;        // 1-based
  double train_loss;
  double train_acc;
  double val_loss;
  double val_acc;
};

struct EvalResult {
  double loss;                     // mean cross-entropy
  double accuracy;                 // fraction predicted correctly
  std::vector<size_t> predictions; // argmax class per example, input order
};

// Full pass without parameter mutation.
EvalResult evaluate_pass(const ModelParams& params, const ArchSpec& spec,
                         const Dataset& data);

// Mini-batch Adam loop. Each epoch: seeded shuffle (one RNG stream across
// epochs), batches of cfg.batch_size with the short final batch kept,
// per-example gradients accumulated in order and scaled by 1/B, one
// adam_step over the flat parameter vector per batch. After each epoch a
// full evaluate_pass over train and val is recorded. Deterministic given
// (data, cfg.seed). `progress` gets one line per epoch when non-null.
std::vector<EpochRecord> train(ModelParams& params, const ArchSpec& spec,
                               const Dataset& train_set, const Dataset& val_set,
                               const TrainConfig& cfg,
                               std::ostream* progress = nullptr);

// CSV: header `epoch,train_loss,train_acc,val_loss,val_acc`, one row per
// record, floats with 6 decimal places.
void write_curves(const std::vector<EpochRecord>& records,
                  const std::filesystem::path& path);
std::vector<EpochRecord> read_curves(const std::filesystem::path& path);

}  // namespace fpnn
