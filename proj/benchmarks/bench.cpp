#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "fpnn/cells.hpp"
#include "fpnn/net.hpp"
#include "fpnn/rng.hpp"
#include "fpnn/tensor.hpp"
#include "fpnn/textprep.hpp"

using namespace fpnn;

namespace {

Matrix random_matrix(size_t rows, size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform(-0.5, 0.5);
  return m;
}

void bm_affine(benchmark::State& state) {
  const size_t n = state.range(0);
  Rng rng(1);
  const Matrix x = random_matrix(1, n, rng);
  const Matrix w = random_matrix(n, n, rng);
  const Matrix b = random_matrix(1, n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(affine(x, w, b.data()));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void bm_softmax(benchmark::State& state) {
  const size_t n = state.range(0);
  Rng rng(2);
  const Matrix logits = random_matrix(8, n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(softmax(logits));
  }
  state.SetItemsProcessed(state.iterations() * 8 * n);
}

void bm_lstm_forward(benchmark::State& state) {
  const size_t t_steps = state.range(0);
  const size_t d = 100, h = 64;
  Rng rng(3);
  const Matrix x = random_matrix(t_steps, d, rng);
  const LstmParams p{random_matrix(d, 4 * h, rng),
                     random_matrix(h, 4 * h, rng),
                     random_matrix(1, 4 * h, rng)};
  const std::vector<double> zeros(h, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lstm_forward(x, p, zeros, zeros));
  }
  state.SetItemsProcessed(state.iterations() * t_steps);
}

void bm_lstm_backward(benchmark::State& state) {
  const size_t t_steps = state.range(0);
  const size_t d = 100, h = 64;
  Rng rng(4);
  const Matrix x = random_matrix(t_steps, d, rng);
  const LstmParams p{random_matrix(d, 4 * h, rng),
                     random_matrix(h, 4 * h, rng),
                     random_matrix(1, 4 * h, rng)};
  const std::vector<double> zeros(h, 0.0);
  const LstmCache cache = lstm_forward(x, p, zeros, zeros);
  const Matrix dh = random_matrix(t_steps, h, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lstm_backward(p, cache, dh));
  }
  state.SetItemsProcessed(state.iterations() * t_steps);
}

void bm_gru_forward(benchmark::State& state) {
  const size_t t_steps = state.range(0);
  const size_t d = 100, h = 64;
  Rng rng(5);
  const Matrix x = random_matrix(t_steps, d, rng);
  const GruParams p{random_matrix(d, 3 * h, rng),
                    random_matrix(h, 3 * h, rng),
                    random_matrix(1, 3 * h, rng)};
  const std::vector<double> zeros(h, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gru_forward(x, p, zeros));
  }
  state.SetItemsProcessed(state.iterations() * t_steps);
}

void bm_bilstm_forward(benchmark::State& state) {
  const size_t t_steps = state.range(0);
  const size_t d = 100, h = 64;
  Rng rng(6);
  const Matrix x = random_matrix(t_steps, d, rng);
  const BiLstmParams p{{random_matrix(d, 4 * h, rng),
                        random_matrix(h, 4 * h, rng),
                        random_matrix(1, 4 * h, rng)},
                       {random_matrix(d, 4 * h, rng),
                        random_matrix(h, 4 * h, rng),
                        random_matrix(1, 4 * h, rng)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(bilstm_forward(x, p));
  }
  state.SetItemsProcessed(state.iterations() * t_steps);
}

void bm_normalize(benchmark::State& state) {
  Rng rng(7);
  static const char* words[] = {"the",      "aircraft", "landed",  "runway",
                                "during",   "approach", "weather", "12",
                                "visibility", "reported"};
  std::string text;
  for (int i = 0; i < 200; ++i) {
    text += words[rng.below(10)];
    text += ' ';
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize(text));
  }
  state.SetBytesProcessed(state.iterations() * text.size());
}

BENCHMARK(bm_affine)->Arg(64)->Arg(256);
BENCHMARK(bm_softmax)->Arg(7)->Arg(64);
BENCHMARK(bm_lstm_forward)->Arg(64)->Arg(512);
BENCHMARK(bm_lstm_backward)->Arg(64)->Arg(512);
BENCHMARK(bm_gru_forward)->Arg(64)->Arg(512);
BENCHMARK(bm_bilstm_forward)->Arg(64)->Arg(512);
BENCHMARK(bm_normalize);

}  // namespace

BENCHMARK_MAIN();
