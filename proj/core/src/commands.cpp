#include "fpnn/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "fpnn/corpus.hpp"
#include "fpnn/dataset.hpp"
#include "fpnn/errors.hpp"
#include "fpnn/metrics.hpp"
#include "fpnn/net.hpp"
#include "fpnn/textprep.hpp"
#include "fpnn/trainer.hpp"

namespace fs = std::filesystem;

namespace fpnn {

namespace {

nlohmann::json load_config_if(const std::optional<std::string>& path) {
  if (!path) return nlohmann::json::object();
  std::ifstream in(*path);
  if (!in) throw IoError("cannot open config file: " + *path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + *path + " is not valid JSON: " + e.what());
  }
}

template <typename T>
T resolve(const std::optional<T>& flag, const nlohmann::json& cfg,
          const char* key, T fallback) {
  if (flag) return *flag;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config key ") + key + ": " + e.what());
    }
  }
  return fallback;
}

template <typename T>
T resolve_required(const std::optional<T>& flag, const nlohmann::json& cfg,
                   const char* key, const char* flag_name) {
  if (flag) return *flag;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config key ") + key + ": " + e.what());
    }
  }
  throw ArgumentError(std::string("missing required ") + flag_name);
}

uint64_t resolve_seed(const std::optional<uint64_t>& flag,
                      const nlohmann::json& cfg) {
  if (flag) return *flag;
  if (cfg.contains("seed")) {
    try {
      return cfg.at("seed").get<uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config key seed: ") + e.what());
    }
  }
  if (const char* env = std::getenv("FPNN_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw ArgumentError(std::string("FPNN_SEED is not an unsigned integer: ") + env);
    }
    return v;
  }
  throw ArgumentError("missing required --seed (FPNN_SEED not set)");
}

void write_config(const nlohmann::json& config, const fs::path& dir) {
  std::ofstream out(dir / "config.json", std::ios::trunc);
  if (!out) {
    throw IoError("cannot write config.json in " + dir.string());
  }
  out << config.dump(2) << '\n';
  if (!out) throw IoError("config.json write failed in " + dir.string());
}

void ensure_parent_dir(const std::string& file_path) {
  const fs::path parent = fs::path(file_path).parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) {
    throw IoError("cannot create directory " + parent.string() + ": " +
                  ec.message());
  }
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += "\"\"";
    else quoted.push_back(c);
  }
  quoted += '"';
  return quoted;
}

std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string arch_values() {
  std::string values;
  for (const auto& v : arch_variants()) {
    if (!values.empty()) values += ", ";
    values += v;
  }
  return values;
}

}  // namespace

int cmd_prepare(const PrepareOptions& opts, std::ostream& out) {
  const nlohmann::json cfg = load_config_if(opts.config);
  const std::string input =
      resolve_required<std::string>(opts.input, cfg, "input", "--input");
  const std::string format_s =
      resolve<std::string>(opts.format, cfg, "format", "csv");
  RecordFormat format;
  if (format_s == "csv") format = RecordFormat::kCsv;
  else if (format_s == "jsonl") format = RecordFormat::kJsonl;
  else throw ArgumentError("unknown --format \"" + format_s + "\"; accepted values: csv, jsonl");
  const std::string out_dir_s =
      resolve_required<std::string>(opts.out, cfg, "out", "--out");
  const auto max_len = static_cast<size_t>(
      resolve<uint64_t>(opts.max_len, cfg, "max_len", kDefaultMaxLen));
  const auto vocab_cap = static_cast<size_t>(
      resolve<uint64_t>(opts.vocab_size, cfg, "vocab_size", kDefaultVocabCap));
  const double test_frac = resolve<double>(opts.test_frac, cfg, "test_frac", 0.20);
  const double val_frac = resolve<double>(opts.val_frac, cfg, "val_frac", 0.10);
  const std::string trunc_s =
      resolve<std::string>(opts.truncate, cfg, "truncate", "head");
  TruncateSide side;
  if (trunc_s == "head") side = TruncateSide::kHead;
  else if (trunc_s == "tail") side = TruncateSide::kTail;
  else throw ArgumentError("unknown --truncate \"" + trunc_s + "\"; accepted values: head, tail");
  const uint64_t seed = resolve_seed(opts.seed, cfg);

  if (max_len < 1) throw ArgumentError("--max-len must be >= 1");
  if (vocab_cap < 1) throw ArgumentError("--vocab-size must be >= 1");
  if (test_frac < 0.0 || test_frac >= 1.0) {
    throw ArgumentError("--test-frac must be in [0,1)");
  }
  if (val_frac < 0.0 || val_frac >= 1.0) {
    throw ArgumentError("--val-frac must be in [0,1)");
  }

  std::vector<Document> docs = load_records(input, format);
  docs = clean_records(docs);
  if (docs.empty()) throw SchemaError("no usable records after cleaning");
  const LabelSet labels = label_inventory(docs);

  const fs::path out_dir(out_dir_s);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() +
                        ": " + ec.message());

  labels.save(out_dir / "labels.txt");

  std::vector<std::vector<std::string>> token_lists;
  token_lists.reserve(docs.size());
  for (const Document& doc : docs) token_lists.push_back(normalize(doc.narrative));
  const Vocabulary vocab = Vocabulary::build(token_lists, vocab_cap);
  vocab.save_tsv(out_dir / "vocab.tsv");

  const SplitResult split = stratified_split(docs, {test_frac, val_frac, seed});

  const auto encode_split = [&](const std::vector<Document>& split_docs) {
    Dataset data(static_cast<uint32_t>(max_len),
                 static_cast<uint32_t>(labels.size()));
    for (const Document& doc : split_docs) {
      const std::vector<uint32_t> ids =
          encode_sequence(normalize(doc.narrative), vocab, max_len, side);
      data.add(ids, static_cast<uint32_t>(labels.index_of(doc.label)));
    }
    return data;
  };
  save_dataset(encode_split(split.train), out_dir / "train.bin");
  save_dataset(encode_split(split.val), out_dir / "val.bin");
  save_dataset(encode_split(split.test), out_dir / "test.bin");

  write_config({{"command", "prepare"},
                {"input", input},
                {"format", format_s},
                {"out", out_dir_s},
                {"max_len", max_len},
                {"vocab_size", vocab_cap},
                {"test_frac", test_frac},
                {"val_frac", val_frac},
                {"truncate", trunc_s},
                {"seed", seed}},
               out_dir);

  out << "train " << split.train.size() << '\n'
      << "val " << split.val.size() << '\n'
      << "test " << split.test.size() << '\n';
  return 0;
}

int cmd_train(const TrainOptions& opts, std::ostream& out,
              std::ostream* progress) {
  const nlohmann::json cfg = load_config_if(opts.config);
  const std::string data_dir_s =
      resolve_required<std::string>(opts.data, cfg, "data", "--data");
  const std::string arch_s =
      resolve_required<std::string>(opts.arch, cfg, "arch", "--arch");
  bool known = false;
  for (const auto& v : arch_variants()) known = known || arch_s == v;
  if (!known) {
    throw ArgumentError("unknown --arch \"" + arch_s +
                        "\"; accepted values: " + arch_values());
  }
  const auto epochs =
      static_cast<size_t>(resolve<uint64_t>(opts.epochs, cfg, "epochs", 10));
  const auto batch =
      static_cast<size_t>(resolve<uint64_t>(opts.batch, cfg, "batch", 32));
  const double lr = resolve<double>(opts.lr, cfg, "lr", 1e-3);
  const auto embed_dim = static_cast<size_t>(
      resolve<uint64_t>(opts.embed_dim, cfg, "embed_dim", 100));
  const auto hidden =
      static_cast<size_t>(resolve<uint64_t>(opts.hidden, cfg, "hidden", 64));
  const auto dense =
      static_cast<size_t>(resolve<uint64_t>(opts.dense, cfg, "dense", 64));
  const uint64_t seed = resolve_seed(opts.seed, cfg);
  const std::string out_path =
      resolve_required<std::string>(opts.out, cfg, "out", "--out");
  std::optional<std::string> curves = opts.curves;
  if (!curves && cfg.contains("curves")) {
    curves = cfg.at("curves").get<std::string>();
  }

  const fs::path data_dir(data_dir_s);
  const Vocabulary vocab = Vocabulary::load_tsv(data_dir / "vocab.tsv");
  const LabelSet labels = LabelSet::load(data_dir / "labels.txt");
  const Dataset train_set = load_dataset(data_dir / "train.bin");
  const Dataset val_set = load_dataset(data_dir / "val.bin");

  if (train_set.num_classes() != labels.size()) {
    throw ConfigError("class count mismatch: train.bin has " +
                      std::to_string(train_set.num_classes()) +
                      ", labels.txt has " + std::to_string(labels.size()));
  }
  if (val_set.num_classes() != labels.size()) {
    throw ConfigError("class count mismatch: val.bin has " +
                      std::to_string(val_set.num_classes()) +
                      ", labels.txt has " + std::to_string(labels.size()));
  }
  if (val_set.max_len() != train_set.max_len()) {
    throw ConfigError("max_len mismatch: train.bin has " +
                      std::to_string(train_set.max_len()) + ", val.bin has " +
                      std::to_string(val_set.max_len()));
  }

  ArchSpec spec;
  spec.cells = parse_arch(arch_s);
  spec.embed_dim = embed_dim;
  spec.hidden = hidden;
  spec.dense_hidden = dense;
  spec.num_classes = labels.size();
  spec.max_len = train_set.max_len();
  spec.vocab_size = vocab.size();

  Rng rng(seed);
  ModelParams params = build(spec, rng);

  TrainConfig tc;
  tc.epochs = epochs;
  tc.batch_size = batch;
  tc.lr = lr;
  tc.seed = seed;
  const std::vector<EpochRecord> records =
      train(params, spec, train_set, val_set, tc, progress);

  ensure_parent_dir(out_path);
  save_checkpoint(params, spec, "vocab.tsv", out_path);
  if (curves) {
    ensure_parent_dir(*curves);
    write_curves(records, *curves);
  }

  nlohmann::json config = {{"command", "train"}, {"data", data_dir_s},
                           {"arch", arch_s},     {"epochs", epochs},
                           {"batch", batch},     {"lr", lr},
                           {"embed_dim", embed_dim}, {"hidden", hidden},
                           {"dense", dense},     {"seed", seed},
                           {"out", out_path}};
  if (curves) config["curves"] = *curves;
  fs::path config_dir = fs::path(out_path).parent_path();
  if (config_dir.empty()) config_dir = ".";
  write_config(config, config_dir);

  out << "final val_acc=" << fmt6(records.back().val_acc) << '\n';
  return 0;
}

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out) {
  const nlohmann::json cfg = nlohmann::json::object();
  const std::string model =
      resolve_required<std::string>(opts.model, cfg, "model", "--model");
  const std::string data_dir_s =
      resolve_required<std::string>(opts.data, cfg, "data", "--data");
  const std::string split =
      resolve<std::string>(opts.split, cfg, "split", "test");
  if (split != "test" && split != "val" && split != "train") {
    throw ArgumentError("unknown --split \"" + split +
                        "\"; accepted values: test, val, train");
  }

  const Checkpoint ckpt = load_checkpoint(model);
  const fs::path data_dir(data_dir_s);
  const Vocabulary vocab = Vocabulary::load_tsv(data_dir / "vocab.tsv");
  const LabelSet labels = LabelSet::load(data_dir / "labels.txt");
  const Dataset data = load_dataset(data_dir / (split + ".bin"));

  if (ckpt.spec.vocab_size != vocab.size()) {
    throw ConfigError("vocabulary size mismatch: checkpoint has V=" +
                      std::to_string(ckpt.spec.vocab_size) +
                      ", vocab.tsv has V=" + std::to_string(vocab.size()));
  }
  if (ckpt.spec.num_classes != labels.size()) {
    throw ConfigError("class count mismatch: checkpoint has C=" +
                      std::to_string(ckpt.spec.num_classes) +
                      ", labels.txt has C=" + std::to_string(labels.size()));
  }
  if (data.num_classes() != labels.size()) {
    throw ConfigError("class count mismatch: " + split + ".bin has C=" +
                      std::to_string(data.num_classes()) +
                      ", labels.txt has C=" + std::to_string(labels.size()));
  }
  if (ckpt.spec.max_len != data.max_len()) {
    throw ConfigError("max_len mismatch: checkpoint has " +
                      std::to_string(ckpt.spec.max_len) + ", " + split +
                      ".bin has " + std::to_string(data.max_len()));
  }

  const EvalResult eval = evaluate_pass(ckpt.params, ckpt.spec, data);
  std::vector<size_t> y_true(data.size());
  for (size_t i = 0; i < data.size(); ++i) y_true[i] = data.label(i);
  const ConfusionMatrix cm = confusion(y_true, eval.predictions, labels.size());
  const ClassReport report = build_report(cm, labels.labels());
  const std::string text = render_report(report);
  out << text;

  if (opts.report) {
    ensure_parent_dir(*opts.report);
    std::ofstream f(*opts.report, std::ios::trunc);
    if (!f) throw IoError("cannot write report: " + *opts.report);
    f << text;
    if (!f) throw IoError("report write failed: " + *opts.report);
  }
  if (opts.json) {
    ensure_parent_dir(*opts.json);
    write_report_json(report, *opts.json);
  }
  return 0;
}

int cmd_predict(const PredictOptions& opts, std::ostream& out) {
  const nlohmann::json cfg = nlohmann::json::object();
  const std::string model =
      resolve_required<std::string>(opts.model, cfg, "model", "--model");
  const std::string vocab_path =
      resolve_required<std::string>(opts.vocab, cfg, "vocab", "--vocab");
  const std::string labels_path =
      resolve_required<std::string>(opts.labels, cfg, "labels", "--labels");
  if (!opts.text) throw ArgumentError("missing required --text");

  const Checkpoint ckpt = load_checkpoint(model);
  const Vocabulary vocab = Vocabulary::load_tsv(vocab_path);
  const LabelSet labels = LabelSet::load(labels_path);

  if (ckpt.spec.vocab_size != vocab.size()) {
    throw ConfigError("vocabulary size mismatch: checkpoint has V=" +
                      std::to_string(ckpt.spec.vocab_size) +
                      ", vocab file has V=" + std::to_string(vocab.size()));
  }
  if (ckpt.spec.num_classes != labels.size()) {
    throw ConfigError("class count mismatch: checkpoint has C=" +
                      std::to_string(ckpt.spec.num_classes) +
                      ", labels file has C=" + std::to_string(labels.size()));
  }

  const std::vector<uint32_t> ids =
      encode_sequence(normalize(*opts.text), vocab, ckpt.spec.max_len);
  const Prediction pred = predict(ckpt.params, ckpt.spec, ids);

  out << labels.label_of(pred.class_index) << '\n';
  char buf[32];
  for (size_t c = 0; c < labels.size(); ++c) {
    std::snprintf(buf, sizeof(buf), "%.4f", pred.probs[c]);
    out << (c == 0 ? "" : " ") << labels.label_of(c) << ':' << buf;
  }
  out << '\n';
  return 0;
}

int cmd_synth(const SynthOptions& opts, std::ostream& out) {
  const nlohmann::json cfg = nlohmann::json::object();
  const std::string out_path =
      resolve_required<std::string>(opts.out, cfg, "out", "--out");
  SyntheticSpec spec;
  spec.n = static_cast<size_t>(
      resolve_required<uint64_t>(opts.n, cfg, "n", "--n"));
  spec.num_classes = static_cast<size_t>(
      resolve_required<uint64_t>(opts.classes, cfg, "classes", "--classes"));
  spec.vocab_size = static_cast<size_t>(resolve_required<uint64_t>(
      opts.vocab_size, cfg, "vocab_size", "--vocab-size"));
  spec.signal = resolve_required<double>(opts.signal, cfg, "signal", "--signal");
  spec.len_min =
      static_cast<size_t>(resolve<uint64_t>(opts.len_min, cfg, "len_min", 20));
  spec.len_max =
      static_cast<size_t>(resolve<uint64_t>(opts.len_max, cfg, "len_max", 50));
  spec.seed = resolve_seed(opts.seed, cfg);

  const std::vector<Document> docs = gen_synthetic_corpus(spec);

  ensure_parent_dir(out_path);
  std::ofstream f(out_path, std::ios::trunc | std::ios::binary);
  if (!f) throw IoError("cannot open output CSV: " + out_path);
  f << "Id,Narrative,POF\n";
  for (const Document& doc : docs) {
    f << csv_escape(doc.id) << ',' << csv_escape(doc.narrative) << ','
      << csv_escape(doc.label) << '\n';
  }
  if (!f) throw IoError("CSV write failed: " + out_path);

  out << "wrote " << docs.size() << " rows\n";
  return 0;
}

}  // namespace fpnn
