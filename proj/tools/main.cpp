#include <iostream>

#include <CLI11.hpp>

#include "fpnn/commands.hpp"
#include "fpnn/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"phase-of-flight narrative classifier"};
  app.require_subcommand(1);

  fpnn::PrepareOptions prep;
  CLI::App* prepare =
      app.add_subcommand("prepare", "Tokenize, split, and encode a corpus");
  prepare->add_option("--config", prep.config, "config.json supplying defaults");
  prepare->add_option("--input", prep.input, "input records file");
  prepare->add_option("--format", prep.format, "csv | jsonl (default csv)");
  prepare->add_option("--out", prep.out, "output directory");
  prepare->add_option("--max-len", prep.max_len,
                      "encoded sequence length (default 2000)");
  prepare->add_option("--vocab-size", prep.vocab_size,
                      "vocabulary cap (default 100000)");
  prepare->add_option("--test-frac", prep.test_frac,
                      "test fraction per class (default 0.2)");
  prepare->add_option("--val-frac", prep.val_frac,
                      "validation fraction of the train remainder (default 0.1)");
  prepare->add_option("--truncate", prep.truncate, "head | tail (default head)");
  prepare->add_option("--seed", prep.seed, "split shuffle seed");

  fpnn::TrainOptions tr;
  CLI::App* train = app.add_subcommand("train", "Train a model on prepared data");
  train->add_option("--config", tr.config, "config.json supplying defaults");
  train->add_option("--data", tr.data, "prepared data directory");
  train->add_option("--arch", tr.arch,
                    "lstm | gru | bilstm | gru+lstm | lstm+bilstm | "
                    "gru+bilstm | gru+bilstm+lstm");
  train->add_option("--epochs", tr.epochs, "training epochs (default 10)");
  train->add_option("--batch", tr.batch, "mini-batch size (default 32)");
  train->add_option("--lr", tr.lr, "Adam learning rate (default 1e-3)");
  train->add_option("--embed-dim", tr.embed_dim, "embedding width (default 100)");
  train->add_option("--hidden", tr.hidden, "recurrent width (default 64)");
  train->add_option("--dense", tr.dense, "dense hidden width (default 64)");
  train->add_option("--seed", tr.seed, "initialization and shuffle seed");
  train->add_option("--out", tr.out, "checkpoint output path");
  train->add_option("--curves", tr.curves, "per-epoch curves CSV path");

  fpnn::EvaluateOptions ev;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Classification report for a split");
  evaluate->add_option("--model", ev.model, "checkpoint path");
  evaluate->add_option("--data", ev.data, "prepared data directory");
  evaluate->add_option("--split", ev.split, "test | val | train (default test)");
  evaluate->add_option("--report", ev.report, "write the text report here too");
  evaluate->add_option("--json", ev.json, "write the unrounded JSON twin here");

  fpnn::PredictOptions pr;
  CLI::App* predict =
      app.add_subcommand("predict", "Classify a single narrative");
  predict->add_option("--model", pr.model, "checkpoint path");
  predict->add_option("--vocab", pr.vocab, "vocab.tsv path");
  predict->add_option("--labels", pr.labels, "labels.txt path");
  predict->add_option("--text", pr.text, "narrative text");

  fpnn::SynthOptions sy;
  CLI::App* synth =
      app.add_subcommand("synth", "Generate a synthetic labeled corpus CSV");
  synth->add_option("--out", sy.out, "output CSV path");
  synth->add_option("--n", sy.n, "document count");
  synth->add_option("--classes", sy.classes, "class count (>= 2)");
  synth->add_option("--vocab-size", sy.vocab_size,
                    "distinct terms (>= 10 per class)");
  synth->add_option("--signal", sy.signal,
                    "keyword-pool probability per token, in (0,1]");
  synth->add_option("--len-min", sy.len_min, "minimum tokens (default 20)");
  synth->add_option("--len-max", sy.len_max, "maximum tokens (default 50)");
  synth->add_option("--seed", sy.seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fpnn::kExitUsage;
  }

  try {
    if (prepare->parsed()) return fpnn::cmd_prepare(prep, std::cout);
    if (train->parsed()) return fpnn::cmd_train(tr, std::cout, &std::cerr);
    if (evaluate->parsed()) return fpnn::cmd_evaluate(ev, std::cout);
    if (predict->parsed()) return fpnn::cmd_predict(pr, std::cout);
    if (synth->parsed()) return fpnn::cmd_synth(sy, std::cout);
  } catch (const fpnn::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fpnn::kExitFailure;
  }
  return fpnn::kExitUsage;
}
