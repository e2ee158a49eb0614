#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fpnn/tensor.hpp"

namespace fpnn {

// Embedding table: one row per vocabulary id, PAD(0) and OOV(1) included.
// The PAD row starts at zero and trains like any other row.
Matrix embed_forward(std::span<const uint32_t> ids, const Matrix& table);

// dE[r] = Σ over positions t with ids[t] = r of dX[t].
Matrix embed_backward(std::span<const uint32_t> ids, const Matrix& dx,
                      size_t table_rows);

// Scatter-add form used by the training loop so no dense per-example
// embedding gradient is materialized.
void embed_backward_into(std::span<const uint32_t> ids, const Matrix& dx,
                         Matrix& de);

// Packed gate weights, order i,f,g,o: W [d×4h], U [h×4h], b [1×4h].
struct LstmParams {
  Matrix w;
  Matrix u;
  Matrix b;
};

// Packed gate weights, order z,r,h̃: W [d×3h], U [h×3h], b [1×3h].
struct GruParams {
  Matrix w;
  Matrix u;
  Matrix b;
};

struct BiLstmParams {
  LstmParams fwd;
  LstmParams bwd;
};

// Everything the exact backward pass needs, retained per timestep.
struct LstmCache {
  Matrix x;        // [T×d]
  Matrix gates;    // [T×4h], post-activation i,f,g,o
  Matrix c;        // [T×h]
  Matrix tanh_c;   // [T×h]
  Matrix h;        // [T×h], the layer output
  std::vector<double> h0;
  std::vector<double> c0;
};

struct GruCache {
  Matrix x;        // [T×d]
  Matrix gates;    // [T×3h], post-activation z,r,h̃
  Matrix rh_prev;  // [T×h], r ⊙ h_{t-1}
  Matrix h;        // [T×h]
  std::vector<double> h0;
};

struct BiLstmCache {
  LstmCache fwd;   // over x in time order
  LstmCache bwd;   // over x reversed
  Matrix h;        // [T×2h], concat(h_fwd[t], h_bwd re-reversed[t])
};

struct LstmGrads {
  Matrix dx;
  LstmParams dp;
  std::vector<double> dh0;
  std::vector<double> dc0;
};

struct GruGrads {
  Matrix dx;
  GruParams dp;
  std::vector<double> dh0;
};

struct BiLstmGrads {
  Matrix dx;
  BiLstmParams dp;
};

// iₜ=σ(..), fₜ=σ(..), gₜ=tanh(..), oₜ=σ(..); cₜ=fₜ⊙cₜ₋₁+iₜ⊙gₜ; hₜ=oₜ⊙tanh(cₜ).
// cache.h holds the full hidden sequence.
LstmCache lstm_forward(const Matrix& x, const LstmParams& p,
                       std::span<const double> h0, std::span<const double> c0);

LstmGrads lstm_backward(const LstmParams& p, const LstmCache& cache,
                        const Matrix& dh);

// zₜ=σ(..), rₜ=σ(..), h̃ₜ=tanh(W_h xₜ + U_h(rₜ⊙hₜ₋₁) + b_h);
// hₜ=(1−zₜ)⊙hₜ₋₁+zₜ⊙h̃ₜ. Reset gate applied inside the candidate's
// recurrent term.
GruCache gru_forward(const Matrix& x, const GruParams& p,
                     std::span<const double> h0);

GruGrads gru_backward(const GruParams& p, const GruCache& cache,
                      const Matrix& dh);

// Both directions start from zero states; the backward direction runs over
// the reversed input and its outputs are re-reversed before concatenation.
BiLstmCache bilstm_forward(const Matrix& x, const BiLstmParams& p);

BiLstmGrads bilstm_backward(const BiLstmParams& p, const BiLstmCache& cache,
                            const Matrix& dh);

}  // namespace fpnn
