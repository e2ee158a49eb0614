#include "fpnn/adam.hpp"

#include <cmath>
#include <string>

#include "fpnn/errors.hpp"

namespace fpnn {

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw ShapeError("adam_step: params " + std::to_string(params.size()) +
                     ", grads " + std::to_string(grads.size()) + ", state " +
                     std::to_string(state.m.size()));
  }
  state.t += 1;
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
  for (size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
    const double mhat = state.m[i] / bias1;
    const double vhat = state.v[i] / bias2;
    params[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

}  // namespace fpnn
