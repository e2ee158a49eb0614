#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fpnn {

// Adam with bias correction. m and v are zero-initialized and sized to the
// flat parameter count; t counts completed steps.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  uint64_t t = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  explicit AdamState(size_t n_params, double lr_ = 1e-3, double beta1_ = 0.9,
                     double beta2_ = 0.999, double eps_ = 1e-8)
      : m(n_params, 0.0), v(n_params, 0.0), lr(lr_), beta1(beta1_),
        beta2(beta2_), eps(eps_) {}
};

// θ ← θ − lr · m̂ / (√v̂ + ε) over the whole flat parameter vector.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state);

}  // namespace fpnn
