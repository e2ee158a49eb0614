#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace fpnn {

// Every field is optional pre-resolution; each command resolves flag values
// over config-file values over the FPNN_SEED environment default over
// built-in defaults, then validates. Missing required values raise usage
// errors.

struct PrepareOptions {
  std::optional<std::string> config;   // config.json to draw defaults from
  std::optional<std::string> input;
  std::optional<std::string> format;   // csv | jsonl
  std::optional<std::string> out;      // output directory
  std::optional<uint64_t> max_len;
  std::optional<uint64_t> vocab_size;
  std::optional<double> test_frac;
  std::optional<double> val_frac;
  std::optional<std::string> truncate; // head | tail
  std::optional<uint64_t> seed;
};

struct TrainOptions {
  std::optional<std::string> config;
  std::optional<std::string> data;     // prepared data directory
  std::optional<std::string> arch;
  std::optional<uint64_t> epochs;
  std::optional<uint64_t> batch;
  std::optional<double> lr;
  std::optional<uint64_t> embed_dim;
  std::optional<uint64_t> hidden;
  std::optional<uint64_t> dense;
  std::optional<uint64_t> seed;
  std::optional<std::string> out;      // checkpoint path
  std::optional<std::string> curves;   // optional curves CSV path
};

struct EvaluateOptions {
  std::optional<std::string> model;
  std::optional<std::string> data;
  std::optional<std::string> split;    // test | val | train
  std::optional<std::string> report;   // optional text report path
  std::optional<std::string> json;     // optional JSON twin path
};

struct PredictOptions {
  std::optional<std::string> model;
  std::optional<std::string> vocab;
  std::optional<std::string> labels;
  std::optional<std::string> text;
};

struct SynthOptions {
  std::optional<std::string> out;
  std::optional<uint64_t> n;
  std::optional<uint64_t> classes;
  std::optional<uint64_t> vocab_size;
  std::optional<double> signal;
  std::optional<uint64_t> len_min;     // defaults 20
  std::optional<uint64_t> len_max;     // defaults 50
  std::optional<uint64_t> seed;
};

// Each returns 0 on success and throws fpnn::Error subclasses otherwise;
// the CLI maps those to exit codes.
int cmd_prepare(const PrepareOptions& opts, std::ostream& out);
int cmd_train(const TrainOptions& opts, std::ostream& out,
              std::ostream* progress);
int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out);
int cmd_predict(const PredictOptions& opts, std::ostream& out);
int cmd_synth(const SynthOptions& opts, std::ostream& out);

}  // namespace fpnn
