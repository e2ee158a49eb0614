#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <sys/resource.h>

#include <json.hpp>

#include "fpnn/commands.hpp"
#include "fpnn/corpus.hpp"
#include "fpnn/dataset.hpp"
#include "fpnn/errors.hpp"
#include "fpnn/metrics.hpp"
#include "fpnn/net.hpp"
#include "fpnn/rng.hpp"
#include "fpnn/tensor.hpp"
#include "fpnn/textprep.hpp"
#include "fpnn/trainer.hpp"
#include "testutil.hpp"

using namespace fpnn;
namespace fs = std::filesystem;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

bool check(bool ok, const char* what) {
  if (!ok) std::printf("  FAILED: %s\n", what);
  return ok;
}

// ---------------------------------------------------------------- criterion 1

// Toy spec pinned by the gradient-verification contract:
// V=6, T=4, d=2, h=2, C=3, dense=3.
ArchSpec grad_check_spec(const std::string& arch) {
  ArchSpec spec;
  spec.cells = parse_arch(arch);
  spec.embed_dim = 2;
  spec.hidden = 2;
  spec.dense_hidden = 3;
  spec.num_classes = 3;
  spec.max_len = 4;
  spec.vocab_size = 6;
  return spec;
}

// Batch cross-entropy over 6 fixed sequences. Parameters are re-drawn
// U(−0.8,0.8) after build() so every gradient path stays far above the
// central-difference noise floor, and the frozen seeds below were chosen so
// no ReLU pre-activation sits near its kink for any variant (min |pre| >
// 1e-3, worst rel err < 8.2e-6 — a 12x margin against the 1e-4 gate).
double pipeline_worst_rel_err(const std::string& arch, uint64_t seed) {
  const ArchSpec spec = grad_check_spec(arch);
  Rng rng(seed);
  ModelParams params = build(spec, rng);
  std::vector<double> flat = params.flatten();
  for (double& v : flat) v = rng.uniform(-0.8, 0.8);
  params.unflatten(flat);

  Rng data_rng(seed * 7919 + 17);
  const size_t batch = 6;
  std::vector<std::vector<uint32_t>> seqs(batch);
  std::vector<size_t> labels(batch);
  for (size_t b = 0; b < batch; ++b) {
    seqs[b].resize(spec.max_len);
    for (auto& id : seqs[b]) {
      id = static_cast<uint32_t>(data_rng.below(spec.vocab_size + 2));
    }
    labels[b] = data_rng.below(spec.num_classes);
  }

  ModelParams grads = zeros_like(spec);
  for (size_t b = 0; b < batch; ++b) {
    const ForwardCaches caches = forward(params, spec, seqs[b]);
    std::vector<double> onehot(spec.num_classes, 0.0);
    onehot[labels[b]] = 1.0;
    backward(params, spec, caches, onehot, grads);
  }
  std::vector<double> analytic = grads.flatten();
  const double inv_b = 1.0 / static_cast<double>(batch);
  for (double& g : analytic) g *= inv_b;

  const std::vector<double> theta = params.flatten();
  const auto f = [&](std::span<const double> point) {
    ModelParams p = zeros_like(spec);
    p.unflatten(point);
    double loss = 0.0;
    for (size_t b = 0; b < batch; ++b) {
      const ForwardCaches c = forward(p, spec, seqs[b]);
      loss -= std::log(std::max(c.probs(0, labels[b]), 1e-12));
    }
    return loss * inv_b;
  };
  const std::vector<double> numeric = finite_diff_grad(f, theta);
  double worst = 0.0;
  for (size_t i = 0; i < theta.size(); ++i) {
    worst = std::max(worst, grad_rel_error(analytic[i], numeric[i]));
  }
  return worst;
}

bool criterion1() {
  std::printf("gradient verification: seven variants, five seeds each\n");
  const Timer timer;
  const uint64_t seeds[] = {13, 29, 53, 59, 70};
  bool ok = true;
  for (const auto& arch : arch_variants()) {
    double worst = 0.0;
    for (const uint64_t seed : seeds) {
      worst = std::max(worst,
                       pipeline_worst_rel_err(std::string(arch), seed));
    }
    std::printf("  %-16s worst rel err %.3e\n",
                std::string(arch).c_str(), worst);
    ok = check(worst < 1e-4, "max relative error < 1e-4") && ok;
  }
  const double elapsed = timer.seconds();
  std::printf("  elapsed %.1f s\n", elapsed);
  return check(elapsed < 60.0, "runtime < 60 s") && ok;
}

// ---------------------------------------------------------------- criterion 2

bool criterion2() {
  std::printf("metric oracle equivalence: 1000 random instances\n");
  const Timer timer;
  Rng rng(2024);
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const size_t num_classes = 2 + rng.below(9);
    const size_t n = 1 + rng.below(200);
    std::vector<size_t> y_true(n), y_pred(n);
    for (size_t i = 0; i < n; ++i) {
      y_true[i] = rng.below(num_classes);
      y_pred[i] = rng.below(num_classes);
    }
    const ConfusionMatrix cm = confusion(y_true, y_pred, num_classes);
    std::vector<std::string> labels;
    for (size_t c = 0; c < num_classes; ++c) {
      labels.push_back("c" + std::to_string(c));
    }
    const ClassReport report = build_report(cm, labels);

    size_t correct = 0;
    double macro_p = 0.0, macro_r = 0.0, macro_f = 0.0;
    double weighted_p = 0.0, weighted_f = 0.0;
    for (size_t c = 0; c < num_classes; ++c) {
      size_t tp = 0, pred_c = 0, true_c = 0;
      for (size_t i = 0; i < n; ++i) {
        if (y_true[i] == c && y_pred[i] == c) ++tp;
        if (y_pred[i] == c) ++pred_c;
        if (y_true[i] == c) ++true_c;
      }
      const double p = pred_c ? static_cast<double>(tp) / pred_c : 0.0;
      const double r = true_c ? static_cast<double>(tp) / true_c : 0.0;
      const double f = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
      const ClassMetrics& m = report.per_class[c];
      worst = std::max({worst, std::fabs(m.precision - p),
                        std::fabs(m.recall - r), std::fabs(m.f1 - f)});
      ok = ok && m.support == true_c;
      correct += tp;
      macro_p += p / num_classes;
      macro_r += r / num_classes;
      macro_f += f / num_classes;
      weighted_p += p * true_c / n;
      weighted_f += f * true_c / n;
    }
    const double accuracy = static_cast<double>(correct) / n;
    worst = std::max({worst, std::fabs(report.accuracy - accuracy),
                      std::fabs(report.macro_precision - macro_p),
                      std::fabs(report.macro_recall - macro_r),
                      std::fabs(report.macro_f1 - macro_f),
                      std::fabs(report.weighted_precision - weighted_p),
                      std::fabs(report.weighted_f1 - weighted_f)});
    ok = ok && report.total_support == n;
    // Support-weighted recall must equal accuracy bit for bit.
    ok = ok && report.weighted_recall == report.accuracy;
  }
  std::printf("  worst deviation from the pair-counting oracle %.3e\n", worst);
  ok = check(ok, "supports and exact identities hold") &&
       check(worst <= 1e-12, "all metrics within 1e-12 of the oracle");
  const double elapsed = timer.seconds();
  std::printf("  elapsed %.1f s\n", elapsed);
  return check(elapsed < 10.0, "runtime < 10 s") && ok;
}

// ---------------------------------------------------------------- criterion 3

std::string random_text(Rng& rng) {
  static const char charset[] =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
      "  ,.;:!?-_()[]/\\'\"@#$%^&*+=~`|{}<>\t\n";
  const size_t len = rng.below(201);
  std::string s;
  s.reserve(len);
  for (size_t i = 0; i < len; ++i) {
    s.push_back(charset[rng.below(sizeof(charset) - 1)]);
  }
  return s;
}

bool criterion3() {
  std::printf("preprocessing contract: 10^4 random strings\n");
  Rng rng(7);
  std::vector<std::string> corpus(10000);
  for (std::string& s : corpus) s = random_text(rng);

  std::vector<std::vector<std::string>> token_lists;
  token_lists.reserve(2000);
  for (size_t i = 0; i < 2000; ++i) token_lists.push_back(normalize(corpus[i]));
  const Vocabulary small = Vocabulary::build(token_lists, 50);
  const Vocabulary large = Vocabulary::build(token_lists, 5000);
  std::printf("  vocab caps: %zu <= 50, %zu <= 5000\n", small.size(),
              large.size());
  bool ok = check(small.size() <= 50, "vocabulary cap 50 respected") &&
            check(large.size() <= 5000, "vocabulary cap 5000 respected") &&
            check(small.size() > 0, "capped vocabulary is non-empty");

  const size_t lens[] = {1, 5, 64};
  for (const std::string& s : corpus) {
    const std::vector<std::string> tokens = normalize(s);
    for (const size_t max_len : lens) {
      const std::vector<uint32_t> head =
          encode_sequence(tokens, small, max_len, TruncateSide::kHead);
      ok = ok && head.size() == max_len;
      for (const uint32_t id : head) ok = ok && id < small.id_count();
      if (tokens.size() < max_len) {
        // zero-padding is prepended, payload is right-aligned
        for (size_t i = 0; i + tokens.size() < max_len; ++i) {
          ok = ok && head[i] == kPadId;
        }
        for (size_t i = 0; i < tokens.size(); ++i) {
          ok = ok && head[max_len - tokens.size() + i] ==
                         small.id_of(tokens[i]);
        }
      } else {
        // over-length input keeps the first max_len ids (head) ...
        for (size_t i = 0; i < max_len; ++i) {
          ok = ok && head[i] == small.id_of(tokens[i]);
        }
        // ... or the last max_len (tail)
        const std::vector<uint32_t> tail =
            encode_sequence(tokens, small, max_len, TruncateSide::kTail);
        for (size_t i = 0; i < max_len; ++i) {
          ok = ok && tail[i] ==
                         small.id_of(tokens[tokens.size() - max_len + i]);
        }
      }
      if (!ok) {
        std::printf("  FAILED on input of %zu tokens at max_len %zu\n",
                    tokens.size(), max_len);
        return false;
      }
    }
  }
  std::printf("  length, padding, truncation, and id-range checks all hold\n");
  return ok;
}

// ------------------------------------------------------------ criteria 4 & 5

struct Prepared {
  Vocabulary vocab;
  LabelSet labels;
  Dataset train;
  Dataset val;
  Dataset test;
  std::vector<Document> test_docs;
};

Prepared prepare_synthetic(const SyntheticSpec& synth, size_t max_len,
                           uint64_t split_seed) {
  std::vector<Document> docs = gen_synthetic_corpus(synth);
  docs = clean_records(docs);
  const LabelSet labels = label_inventory(docs);
  std::vector<std::vector<std::string>> token_lists;
  token_lists.reserve(docs.size());
  for (const Document& doc : docs) token_lists.push_back(normalize(doc.narrative));
  const Vocabulary vocab = Vocabulary::build(token_lists, kDefaultVocabCap);
  const SplitResult split = stratified_split(docs, {0.2, 0.1, split_seed});

  const auto encode = [&](const std::vector<Document>& split_docs) {
    Dataset data(static_cast<uint32_t>(max_len),
                 static_cast<uint32_t>(labels.size()));
    for (const Document& doc : split_docs) {
      data.add(encode_sequence(normalize(doc.narrative), vocab, max_len),
               static_cast<uint32_t>(labels.index_of(doc.label)));
    }
    return data;
  };
  return {vocab,
          labels,
          encode(split.train),
          encode(split.val),
          encode(split.test),
          split.test};
}

ArchSpec train_spec(const std::string& arch, const Prepared& p, size_t dims,
                    size_t dense) {
  ArchSpec spec;
  spec.cells = parse_arch(arch);
  spec.embed_dim = dims;
  spec.hidden = dims;
  spec.dense_hidden = dense;
  spec.num_classes = p.labels.size();
  spec.max_len = p.train.max_len();
  spec.vocab_size = p.vocab.size();
  return spec;
}

bool criterion4() {
  std::printf("random-guess baseline: seven variants on the keyword corpus\n");
  const Timer timer;
  SyntheticSpec synth;
  synth.n = 2000;
  synth.num_classes = 7;
  synth.vocab_size = 500;
  synth.len_min = 20;
  synth.len_max = 50;
  synth.signal = 0.9;
  synth.seed = 42;
  const Prepared p = prepare_synthetic(synth, 64, 42);

  size_t oracle_hits = 0;
  for (const Document& doc : p.test_docs) {
    const size_t predicted = keyword_pool_prediction(doc.narrative, 7);
    if (static_cast<int>(predicted) == p.labels.index_of(doc.label)) {
      ++oracle_hits;
    }
  }
  const double oracle_acc =
      static_cast<double>(oracle_hits) / p.test_docs.size();
  std::printf("  keyword-count oracle accuracy %.4f on %zu test docs\n",
              oracle_acc, p.test_docs.size());
  bool ok = check(oracle_acc >= 0.97, "oracle accuracy >= 0.97");

  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.batch_size = 32;
  cfg.lr = 1e-3;
  cfg.seed = 7;
  for (const auto& arch_view : arch_variants()) {
    const std::string arch(arch_view);
    const ArchSpec spec = train_spec(arch, p, 32, 64);
    Rng rng(7);
    ModelParams params = build(spec, rng);
    train(params, spec, p.train, p.val, cfg);
    const EvalResult result = evaluate_pass(params, spec, p.test);
    std::printf("  %-16s test accuracy %.4f (%.0f s)\n", arch.c_str(),
                result.accuracy, timer.seconds());
    std::fflush(stdout);
    ok = check(result.accuracy >= 0.50,
               "every variant reaches test accuracy >= 0.50") && ok;
    if (arch == "lstm") {
      ok = check(result.accuracy >= 0.90, "lstm reaches >= 0.90") && ok;
    }
  }
  const double elapsed = timer.seconds();
  std::printf("  elapsed %.1f s\n", elapsed);
  return check(elapsed < 600.0, "runtime < 600 s") && ok;
}

bool criterion5() {
  std::printf("overfit smoke: 32 examples memorized by each single cell\n");
  SyntheticSpec synth;
  synth.n = 32;
  synth.num_classes = 7;
  synth.vocab_size = 200;
  synth.len_min = 10;
  synth.len_max = 30;
  synth.signal = 1.0;
  synth.seed = 3;
  // No held-out data in a memorization check: everything trains.
  std::vector<Document> docs = gen_synthetic_corpus(synth);
  const LabelSet labels = label_inventory(docs);
  std::vector<std::vector<std::string>> token_lists;
  for (const Document& doc : docs) token_lists.push_back(normalize(doc.narrative));
  const Vocabulary vocab = Vocabulary::build(token_lists, kDefaultVocabCap);
  const size_t max_len = 32;
  Dataset data(max_len, static_cast<uint32_t>(labels.size()));
  for (const Document& doc : docs) {
    data.add(encode_sequence(normalize(doc.narrative), vocab, max_len),
             static_cast<uint32_t>(labels.index_of(doc.label)));
  }
  const Dataset empty_val(max_len, static_cast<uint32_t>(labels.size()));

  bool ok = true;
  for (const std::string arch : {"lstm", "gru", "bilstm"}) {
    const Timer timer;
    ArchSpec spec;
    spec.cells = parse_arch(arch);
    spec.embed_dim = 16;
    spec.hidden = 16;
    spec.dense_hidden = 16;
    spec.num_classes = labels.size();
    spec.max_len = max_len;
    spec.vocab_size = vocab.size();
    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.batch_size = 8;
    cfg.lr = 1e-2;
    cfg.seed = 5;
    Rng rng(11);
    ModelParams params = build(spec, rng);
    const std::vector<EpochRecord> records =
        train(params, spec, data, empty_val, cfg);
    size_t first_perfect = 0;
    for (const EpochRecord& r : records) {
      if (r.train_acc == 1.0) {
        first_perfect = r.epoch;
        break;
      }
    }
    const double elapsed = timer.seconds();
    if (first_perfect) {
      std::printf("  %-8s train accuracy 1.0 at epoch %zu (%.1f s)\n",
                  arch.c_str(), first_perfect, elapsed);
    } else {
      std::printf("  %-8s never reached train accuracy 1.0 (%.1f s)\n",
                  arch.c_str(), elapsed);
    }
    ok = check(first_perfect != 0,
               "train accuracy 1.0 within 200 epochs") && ok;
    ok = check(elapsed < 120.0, "runtime < 120 s per variant") && ok;
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 6

bool criterion6() {
  std::printf("determinism: prepare and train twice with one seed\n");
  const testutil::TempDir dir("accept6");
  std::ostringstream sink;

  const auto corpus = dir / "corpus.csv";
  SynthOptions synth;
  synth.out = corpus.string();
  synth.n = 60;
  synth.classes = 3;
  synth.vocab_size = 60;
  synth.signal = 0.9;
  synth.seed = 5;
  if (cmd_synth(synth, sink) != 0) return false;

  const auto run_once = [&](const std::string& tag) {
    const fs::path prep = dir / ("prep_" + tag);
    PrepareOptions po;
    po.input = corpus.string();
    po.out = prep.string();
    po.max_len = 20;
    po.vocab_size = 200;
    po.seed = 11;
    if (cmd_prepare(po, sink) != 0) throw std::runtime_error("prepare");
    TrainOptions to;
    to.data = prep.string();
    to.arch = "gru";
    to.epochs = 2;
    to.batch = 8;
    to.embed_dim = 8;
    to.hidden = 8;
    to.dense = 8;
    to.seed = 12;
    to.out = (dir / ("model_" + tag + ".fpnn")).string();
    to.curves = (dir / ("curves_" + tag + ".csv")).string();
    if (cmd_train(to, sink, nullptr) != 0) throw std::runtime_error("train");
    return prep;
  };
  const fs::path prep_a = run_once("a");
  const fs::path prep_b = run_once("b");

  bool ok = true;
  for (const char* name :
       {"vocab.tsv", "labels.txt", "train.bin", "val.bin", "test.bin"}) {
    const bool same = testutil::same_bytes(prep_a / name, prep_b / name);
    std::printf("  %-10s %s\n", name, same ? "identical" : "DIFFERS");
    ok = ok && same;
  }
  const bool model_same =
      testutil::same_bytes(dir / "model_a.fpnn", dir / "model_b.fpnn");
  std::printf("  %-10s %s\n", "checkpoint", model_same ? "identical" : "DIFFERS");
  const bool curves_same =
      testutil::same_bytes(dir / "curves_a.csv", dir / "curves_b.csv");
  std::printf("  %-10s %s\n", "curves", curves_same ? "identical" : "DIFFERS");
  return ok && model_same && curves_same;
}

// ---------------------------------------------------------------- criterion 7

bool criterion7() {
  std::printf("report fidelity: golden render of the reference table\n");
  ClassReport report;
  report.labels = {"Approach", "Enroute", "Landing", "Standing",
                   "Takeoff",  "Taxi",    "Unknown"};
  report.per_class = {
      {0.45, 0.47, 0.46, 89},  {0.59, 0.47, 0.52, 149},
      {0.82, 0.85, 0.84, 338}, {0.65, 0.64, 0.65, 81},
      {0.53, 0.70, 0.60, 87},  {0.46, 0.41, 0.44, 41},
      {0.24, 0.21, 0.22, 72},
  };
  report.accuracy = 0.67;
  report.macro_precision = 0.56;
  report.macro_recall = 0.57;
  report.macro_f1 = 0.56;
  report.weighted_precision = 0.66;
  report.weighted_recall = 0.67;
  report.weighted_f1 = 0.66;
  report.total_support = 857;

  const std::string expected =
      "             precision    recall  f1-score   support\n"
      "    Approach      0.45      0.47      0.46        89\n"
      "     Enroute      0.59      0.47      0.52       149\n"
      "     Landing      0.82      0.85      0.84       338\n"
      "    Standing      0.65      0.64      0.65        81\n"
      "     Takeoff      0.53      0.70      0.60        87\n"
      "        Taxi      0.46      0.41      0.44        41\n"
      "     Unknown      0.24      0.21      0.22        72\n"
      "\n"
      "    accuracy                          0.67       857\n"
      "   macro avg      0.56      0.57      0.56       857\n"
      "weighted avg      0.66      0.67      0.66       857\n";

  const std::string rendered = render_report(report);
  const bool landing =
      rendered.find("     Landing      0.82      0.85      0.84       338\n") !=
      std::string::npos;
  std::printf("  Landing row 0.82 0.85 0.84 338: %s\n",
              landing ? "present" : "MISSING");
  const bool golden = rendered == expected;
  std::printf("  full layout: %s\n", golden ? "byte-identical" : "DIFFERS");
  if (!golden) std::printf("%s", rendered.c_str());
  return check(landing, "Landing row values") &&
         check(golden, "golden layout comparison");
}

// ---------------------------------------------------------------- criterion 8

bool criterion8() {
  std::printf("checkpoint round trip: all seven variants\n");
  const testutil::TempDir dir("accept8");
  bool ok = true;
  uint64_t seed = 59;
  for (const auto& arch_view : arch_variants()) {
    const std::string arch(arch_view);
    ArchSpec spec;
    spec.cells = parse_arch(arch);
    spec.embed_dim = 3;
    spec.hidden = 4;
    spec.dense_hidden = 5;
    spec.num_classes = 4;
    spec.max_len = 9;
    spec.vocab_size = 11;
    Rng rng(seed++);
    const ModelParams params = build(spec, rng);
    const fs::path path = dir / (arch + ".fpnn");
    save_checkpoint(params, spec, "vocab.tsv", path);
    const Checkpoint loaded = load_checkpoint(path);

    const std::vector<double> before = params.flatten();
    const std::vector<double> after = loaded.params.flatten();
    const bool bitwise =
        before.size() == after.size() &&
        std::memcmp(before.data(), after.data(),
                    before.size() * sizeof(double)) == 0;
    const bool spec_same = loaded.spec.cells == spec.cells &&
                           loaded.spec.embed_dim == spec.embed_dim &&
                           loaded.spec.hidden == spec.hidden &&
                           loaded.spec.dense_hidden == spec.dense_hidden &&
                           loaded.spec.num_classes == spec.num_classes &&
                           loaded.spec.max_len == spec.max_len &&
                           loaded.spec.vocab_size == spec.vocab_size;
    std::printf("  %-16s %s\n", arch.c_str(),
                bitwise && spec_same ? "bitwise round trip" : "MISMATCH");
    ok = ok && bitwise && spec_same;
  }

  const fs::path victim = dir / "lstm.fpnn";
  const std::string bytes = testutil::slurp(victim);
  bool rejected_magic = false;
  {
    std::string bad = bytes;
    bad[0] = 'X';
    testutil::spit(dir / "magic.fpnn", bad);
    try {
      load_checkpoint(dir / "magic.fpnn");
    } catch (const FormatError&) {
      rejected_magic = true;
    }
  }
  bool rejected_truncation = false;
  {
    testutil::spit(dir / "short.fpnn", bytes.substr(0, bytes.size() - 8));
    try {
      load_checkpoint(dir / "short.fpnn");
    } catch (const FormatError&) {
      rejected_truncation = true;
    }
  }
  std::printf("  corrupted magic rejected: %s\n",
              rejected_magic ? "yes" : "NO");
  std::printf("  truncated payload rejected: %s\n",
              rejected_truncation ? "yes" : "NO");
  return ok && check(rejected_magic, "magic corruption raises a format error") &&
         check(rejected_truncation, "truncation raises a format error");
}

// ---------------------------------------------------------------- criterion 9

bool criterion9() {
  std::printf("large-corpus end-to-end run: 4000 records at max_len 2000\n");
  const Timer timer;
  const testutil::TempDir dir("accept9");
  const fs::path corpus = dir / "corpus.csv";
  const fs::path prep = dir / "prep";
  const fs::path model = dir / "run" / "model.fpnn";
  const fs::path report_txt = dir / "run" / "report.txt";
  const fs::path report_json = dir / "run" / "report.json";
  const fs::path log = dir / "log.txt";
  const auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };

  bool ok = check(
      testutil::run_cli("synth --out " + q(corpus) +
                            " --n 4000 --classes 7 --vocab-size 800 "
                            "--signal 0.8 --len-min 30 --len-max 60 --seed 11",
                        log) == 0,
      "synth exits 0");
  std::printf("  synth done (%.0f s)\n", timer.seconds());
  ok = ok && check(testutil::run_cli(
                       "prepare --input " + q(corpus) + " --out " + q(prep) +
                           " --max-len 2000 --seed 7",
                       log) == 0,
                   "prepare exits 0");
  std::printf("  prepare done (%.0f s)\n", timer.seconds());
  std::fflush(stdout);
  ok = ok && check(testutil::run_cli(
                       "train --data " + q(prep) +
                           " --arch lstm --epochs 1 --batch 32 --seed 7 "
                           "--out " + q(model) + " --curves " +
                           q(dir / "run" / "curves.csv"),
                       log) == 0,
                   "train exits 0");
  std::printf("  train done (%.0f s)\n", timer.seconds());
  std::fflush(stdout);
  ok = ok && check(testutil::run_cli(
                       "evaluate --model " + q(model) + " --data " + q(prep) +
                           " --split test --report " + q(report_txt) +
                           " --json " + q(report_json),
                       log) == 0,
                   "evaluate exits 0");

  if (ok) {
    const std::string report = testutil::slurp(report_txt);
    ok = check(report.find("weighted avg") != std::string::npos,
               "report carries the weighted avg row");
    for (int c = 0; c < 7; ++c) {
      const std::string label = "class_" + std::to_string(c);
      ok = check(report.find(label) != std::string::npos,
                 "report lists every class") && ok;
    }
    const std::string json_text = testutil::slurp(report_json);
    ok = check(json_text.find("\"accuracy\"") != std::string::npos,
               "JSON twin written") && ok;
  }

  rusage usage{};
  getrusage(RUSAGE_CHILDREN, &usage);
  const double peak_gib = static_cast<double>(usage.ru_maxrss) / (1024.0 * 1024.0);
  const double elapsed = timer.seconds();
  std::printf("  peak child rss %.2f GiB, elapsed %.0f s\n", peak_gib, elapsed);
  return check(usage.ru_maxrss < 8LL * 1024 * 1024,
               "peak memory below 8 GiB") && ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1-9>\n");
    return 2;
  }
  const int n = std::atoi(argv[1]);
  bool ok = false;
  switch (n) {
    case 1: ok = criterion1(); break;
    case 2: ok = criterion2(); break;
    case 3: ok = criterion3(); break;
    case 4: ok = criterion4(); break;
    case 5: ok = criterion5(); break;
    case 6: ok = criterion6(); break;
    case 7: ok = criterion7(); break;
    case 8: ok = criterion8(); break;
    case 9: ok = criterion9(); break;
    default:
      std::fprintf(stderr, "usage: acceptance <criterion 1-9>\n");
      return 2;
  }
  std::printf("criterion %d: %s\n", n, ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}
