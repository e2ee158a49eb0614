#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fpnn/cells.hpp"
#include "fpnn/tensor.hpp"

namespace fpnn {

enum class CellKind { kLstm, kGru, kBiLstm };

const char* cell_name(CellKind kind);

// "lstm", "gru+bilstm+lstm", ... — cell names joined by '+', evaluated
// left-to-right as layer order.
std::vector<CellKind> parse_arch(const std::string& arch);

// The seven supported --arch strings.
std::span<const std::string_view> arch_variants();

struct ArchSpec {
  std::vector<CellKind> cells;   // 1–3 layers
  size_t embed_dim = 100;
  size_t hidden = 64;            // per recurrent layer
  size_t dense_hidden = 64;      // ReLU layer between last cell and head
  size_t num_classes = 0;
  size_t max_len = 2000;
  size_t vocab_size = 0;         // retained terms V; embedding has V+2 rows

  void validate() const;
  // Input width of cell i; bilstm emits 2h into the next layer.
  size_t cell_input_dim(size_t i) const;
  // Width of the final cell's last hidden state (2h for bilstm).
  size_t head_input_dim() const;
};

// (V+2)d + Σ cellParams + dense + head, with cellParams(lstm)=4h(d_in+h+1),
// cellParams(gru)=3h(d_in+h+1), cellParams(bilstm)=2·4h(d_in+h+1).
size_t param_count(const ArchSpec& spec);

using CellParams = std::variant<LstmParams, GruParams, BiLstmParams>;

struct ModelParams {
  Matrix embedding;               // [(V+2)×d]
  std::vector<CellParams> cells;  // matches ArchSpec.cells
  Matrix dense_w;                 // [head_input×dense_hidden]
  Matrix dense_b;                 // [1×dense_hidden]
  Matrix out_w;                   // [dense_hidden×C]
  Matrix out_b;                   // [1×C]

  // Visits every tensor in the fixed manifest order (embedding, cells in
  // layer order with w,u,b and fwd-before-bwd, dense, head). This order is
  // the flat parameter layout used by Adam and the checkpoint payload.
  template <typename Fn>
  void for_each_tensor(Fn&& fn) {
    fn("embedding", embedding);
    for (size_t i = 0; i < cells.size(); ++i) {
      const std::string prefix = "cell" + std::to_string(i);
      std::visit(
          [&](auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BiLstmParams>) {
              fn(prefix + ".fwd.w", p.fwd.w);
              fn(prefix + ".fwd.u", p.fwd.u);
              fn(prefix + ".fwd.b", p.fwd.b);
              fn(prefix + ".bwd.w", p.bwd.w);
              fn(prefix + ".bwd.u", p.bwd.u);
              fn(prefix + ".bwd.b", p.bwd.b);
            } else {
              fn(prefix + ".w", p.w);
              fn(prefix + ".u", p.u);
              fn(prefix + ".b", p.b);
            }
          },
          cells[i]);
    }
    fn("dense.w", dense_w);
    fn("dense.b", dense_b);
    fn("out.w", out_w);
    fn("out.b", out_b);
  }

  template <typename Fn>
  void for_each_tensor(Fn&& fn) const {
    const_cast<ModelParams*>(this)->for_each_tensor(
        [&](const std::string& name, Matrix& m) {
          fn(name, static_cast<const Matrix&>(m));
        });
  }

  size_t total_params() const;
  // Concatenation of all tensors in manifest order.
  std::vector<double> flatten() const;
  void unflatten(std::span<const double> flat);
};

// Glorot for weight matrices, zeros for biases except the LSTM forget-gate
// slice (1.0), embedding U(−0.05,0.05) with the PAD row zeroed.
ModelParams build(const ArchSpec& spec, Rng& rng);

// Same shapes as `params`, all zeros. Used for gradient accumulation.
ModelParams zeros_like(const ArchSpec& spec);

using CellCache = std::variant<LstmCache, GruCache, BiLstmCache>;

struct ForwardCaches {
  std::vector<uint32_t> ids;
  std::vector<CellCache> cells;
  Matrix last_hidden;   // [1×head_input]
  Matrix dense_pre;     // [1×dense_hidden], pre-ReLU
  Matrix dense_out;     // [1×dense_hidden]
  Matrix logits;        // [1×C]
  Matrix probs;         // [1×C]
};

// embed → cells chained over full sequences → last timestep of the final
// cell → dense ReLU → affine → softmax.
ForwardCaches forward(const ModelParams& params, const ArchSpec& spec,
                      std::span<const uint32_t> ids);

// Accumulates exact gradients of the cross-entropy of this example into
// `grads` (dlogits = probs − onehot).
void backward(const ModelParams& params, const ArchSpec& spec,
              const ForwardCaches& caches, std::span<const double> onehot,
              ModelParams& grads);

struct Prediction {
  size_t class_index;            // smallest index attaining the max
  std::vector<double> probs;
};

Prediction predict(const ModelParams& params, const ArchSpec& spec,
                   std::span<const uint32_t> ids);

// Checkpoint: magic `FPNN`, u32 version=1, u32 header length, JSON header
// (arch, gate order declaration, tensor manifest with byte offsets,
// vocabulary path reference), then little-endian float64 payload in
// manifest order. Round-trips bitwise.
void save_checkpoint(const ModelParams& params, const ArchSpec& spec,
                     const std::string& vocab_path_ref,
                     const std::filesystem::path& path);

struct Checkpoint {
  ModelParams params;
  ArchSpec spec;
  std::string vocab_path_ref;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace fpnn
