#include "fpnn/net.hpp"

#include <algorithm>
#include <numeric>

#include "fpnn/errors.hpp"

namespace fpnn {

namespace {

constexpr std::string_view kArchVariants[] = {
    "lstm",        "gru",         "bilstm",         "gru+lstm",
    "lstm+bilstm", "gru+bilstm",  "gru+bilstm+lstm",
};

size_t cell_output_dim(CellKind kind, size_t hidden) {
  return kind == CellKind::kBiLstm ? 2 * hidden : hidden;
}

LstmParams build_lstm(size_t d_in, size_t h, Rng& rng) {
  LstmParams p;
  p.w = init_params(d_in, 4 * h, InitScheme::kGlorotUniform, rng);
  p.u = init_params(h, 4 * h, InitScheme::kGlorotUniform, rng);
  p.b = init_params(1, 4 * h, InitScheme::kZeros, rng);
  for (size_t j = 0; j < h; ++j) p.b(0, h + j) = 1.0;  // forget-gate slice
  return p;
}

GruParams build_gru(size_t d_in, size_t h, Rng& rng) {
  GruParams p;
  p.w = init_params(d_in, 3 * h, InitScheme::kGlorotUniform, rng);
  p.u = init_params(h, 3 * h, InitScheme::kGlorotUniform, rng);
  p.b = init_params(1, 3 * h, InitScheme::kZeros, rng);
  return p;
}

}  // namespace

const char* cell_name(CellKind kind) {
  switch (kind) {
    case CellKind::kLstm: return "lstm";
    case CellKind::kGru: return "gru";
    case CellKind::kBiLstm: return "bilstm";
  }
  return "?";
}

std::vector<CellKind> parse_arch(const std::string& arch) {
  std::vector<CellKind> cells;
  size_t pos = 0;
  while (pos <= arch.size()) {
    size_t plus = arch.find('+', pos);
    if (plus == std::string::npos) plus = arch.size();
    const std::string_view name(arch.data() + pos, plus - pos);
    if (name == "lstm") cells.push_back(CellKind::kLstm);
    else if (name == "gru") cells.push_back(CellKind::kGru);
    else if (name == "bilstm") cells.push_back(CellKind::kBiLstm);
    else {
      std::string accepted;
      for (const auto& v : kArchVariants) {
        if (!accepted.empty()) accepted += ", ";
        accepted += v;
      }
      throw ArgumentError("unknown architecture \"" + arch +
                          "\"; accepted values: " + accepted);
    }
    pos = plus + 1;
  }
  return cells;
}

std::span<const std::string_view> arch_variants() { return kArchVariants; }

void ArchSpec::validate() const {
  if (cells.empty() || cells.size() > 3) {
    throw ConfigError("architecture must chain 1 to 3 cells");
  }
  if (embed_dim < 1 || hidden < 1 || dense_hidden < 1) {
    throw ConfigError("embed_dim, hidden, and dense_hidden must be >= 1");
  }
  if (num_classes < 1) throw ConfigError("num_classes must be >= 1");
  if (max_len < 1) throw ConfigError("max_len must be >= 1");
}

size_t ArchSpec::cell_input_dim(size_t i) const {
  size_t dim = embed_dim;
  for (size_t k = 0; k < i; ++k) dim = cell_output_dim(cells[k], hidden);
  return dim;
}

size_t ArchSpec::head_input_dim() const {
  return cell_output_dim(cells.back(), hidden);
}

size_t param_count(const ArchSpec& spec) {
  const size_t h = spec.hidden;
  size_t total = (spec.vocab_size + 2) * spec.embed_dim;
  for (size_t i = 0; i < spec.cells.size(); ++i) {
    const size_t d_in = spec.cell_input_dim(i);
    switch (spec.cells[i]) {
      case CellKind::kLstm: total += 4 * h * (d_in + h + 1); break;
      case CellKind::kGru: total += 3 * h * (d_in + h + 1); break;
      case CellKind::kBiLstm: total += 2 * 4 * h * (d_in + h + 1); break;
    }
  }
  total += spec.head_input_dim() * spec.dense_hidden + spec.dense_hidden;
  total += spec.dense_hidden * spec.num_classes + spec.num_classes;
  return total;
}

size_t ModelParams::total_params() const {
  size_t total = 0;
  for_each_tensor([&](const std::string&, const Matrix& m) { total += m.size(); });
  return total;
}

std::vector<double> ModelParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(total_params());
  for_each_tensor([&](const std::string&, const Matrix& m) {
    flat.insert(flat.end(), m.data().begin(), m.data().end());
  });
  return flat;
}

void ModelParams::unflatten(std::span<const double> flat) {
  size_t offset = 0;
  for_each_tensor([&](const std::string&, Matrix& m) {
    if (offset + m.size() > flat.size()) {
      throw ShapeError("unflatten: flat vector too short");
    }
    std::copy(flat.begin() + offset, flat.begin() + offset + m.size(),
              m.data().begin());
    offset += m.size();
  });
  if (offset != flat.size()) {
    throw ShapeError("unflatten: flat vector has " +
                     std::to_string(flat.size()) + " values, model needs " +
                     std::to_string(offset));
  }
}

ModelParams build(const ArchSpec& spec, Rng& rng) {
  spec.validate();
  ModelParams params;
  params.embedding = init_params(spec.vocab_size + 2, spec.embed_dim,
                                 InitScheme::kUniformEmbed, rng);
  for (size_t j = 0; j < spec.embed_dim; ++j) params.embedding(0, j) = 0.0;

  for (size_t i = 0; i < spec.cells.size(); ++i) {
    const size_t d_in = spec.cell_input_dim(i);
    switch (spec.cells[i]) {
      case CellKind::kLstm:
        params.cells.emplace_back(build_lstm(d_in, spec.hidden, rng));
        break;
      case CellKind::kGru:
        params.cells.emplace_back(build_gru(d_in, spec.hidden, rng));
        break;
      case CellKind::kBiLstm: {
        BiLstmParams p;
        p.fwd = build_lstm(d_in, spec.hidden, rng);
        p.bwd = build_lstm(d_in, spec.hidden, rng);
        params.cells.emplace_back(std::move(p));
        break;
      }
    }
  }
  params.dense_w = init_params(spec.head_input_dim(), spec.dense_hidden,
                               InitScheme::kGlorotUniform, rng);
  params.dense_b = init_params(1, spec.dense_hidden, InitScheme::kZeros, rng);
  params.out_w = init_params(spec.dense_hidden, spec.num_classes,
                             InitScheme::kGlorotUniform, rng);
  params.out_b = init_params(1, spec.num_classes, InitScheme::kZeros, rng);
  return params;
}

ModelParams zeros_like(const ArchSpec& spec) {
  Rng rng(0);
  ModelParams params = build(spec, rng);
  params.for_each_tensor([](const std::string&, Matrix& m) { m.fill(0.0); });
  return params;
}

ForwardCaches forward(const ModelParams& params, const ArchSpec& spec,
                      std::span<const uint32_t> ids) {
  ForwardCaches caches;
  caches.ids.assign(ids.begin(), ids.end());

  Matrix seq = embed_forward(ids, params.embedding);
  for (size_t i = 0; i < spec.cells.size(); ++i) {
    const std::vector<double> zeros(spec.hidden, 0.0);
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, LstmParams>) {
            LstmCache cache = lstm_forward(seq, p, zeros, zeros);
            seq = cache.h;
            caches.cells.emplace_back(std::move(cache));
          } else if constexpr (std::is_same_v<T, GruParams>) {
            GruCache cache = gru_forward(seq, p, zeros);
            seq = cache.h;
            caches.cells.emplace_back(std::move(cache));
          } else {
            BiLstmCache cache = bilstm_forward(seq, p);
            seq = cache.h;
            caches.cells.emplace_back(std::move(cache));
          }
        },
        params.cells[i]);
  }

  const size_t T = seq.rows();
  caches.last_hidden = Matrix(1, seq.cols());
  std::copy(seq.row(T - 1), seq.row(T - 1) + seq.cols(),
            caches.last_hidden.row(0));

  caches.dense_pre =
      affine(caches.last_hidden, params.dense_w, params.dense_b.data());
  caches.dense_out = relu(caches.dense_pre);
  caches.logits = affine(caches.dense_out, params.out_w, params.out_b.data());
  caches.probs = softmax(caches.logits);
  return caches;
}

void backward(const ModelParams& params, const ArchSpec& spec,
              const ForwardCaches& caches, std::span<const double> onehot,
              ModelParams& grads) {
  const size_t c_count = spec.num_classes;
  if (onehot.size() != c_count) {
    throw ShapeError("backward: one-hot size " + std::to_string(onehot.size()) +
                     " vs num_classes " + std::to_string(c_count));
  }

  Matrix dlogits(1, c_count);
  for (size_t j = 0; j < c_count; ++j) {
    dlogits(0, j) = caches.probs(0, j) - onehot[j];
  }

  // Head: logits = dense_out · out_w + out_b
  {
    Matrix d_out_w = matmul_tn(caches.dense_out, dlogits);
    add_into(grads.out_w, d_out_w);
    for (size_t j = 0; j < c_count; ++j) grads.out_b(0, j) += dlogits(0, j);
  }
  Matrix d_dense_out = matmul_nt(dlogits, params.out_w);
  Matrix d_dense_pre = relu_backward(caches.dense_pre, d_dense_out);
  {
    Matrix d_dense_w = matmul_tn(caches.last_hidden, d_dense_pre);
    add_into(grads.dense_w, d_dense_w);
    for (size_t j = 0; j < d_dense_pre.cols(); ++j) {
      grads.dense_b(0, j) += d_dense_pre(0, j);
    }
  }
  Matrix d_last = matmul_nt(d_dense_pre, params.dense_w);

  // Only the last timestep of the final cell contributes to the head.
  Matrix dh(caches.ids.size(), d_last.cols());
  std::copy(d_last.row(0), d_last.row(0) + d_last.cols(),
            dh.row(dh.rows() - 1));

  for (size_t i = spec.cells.size(); i-- > 0;) {
    Matrix dx;
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, LstmParams>) {
            const auto& cache = std::get<LstmCache>(caches.cells[i]);
            LstmGrads g = lstm_backward(p, cache, dh);
            auto& gp = std::get<LstmParams>(grads.cells[i]);
            add_into(gp.w, g.dp.w);
            add_into(gp.u, g.dp.u);
            add_into(gp.b, g.dp.b);
            dx = std::move(g.dx);
          } else if constexpr (std::is_same_v<T, GruParams>) {
            const auto& cache = std::get<GruCache>(caches.cells[i]);
            GruGrads g = gru_backward(p, cache, dh);
            auto& gp = std::get<GruParams>(grads.cells[i]);
            add_into(gp.w, g.dp.w);
            add_into(gp.u, g.dp.u);
            add_into(gp.b, g.dp.b);
            dx = std::move(g.dx);
          } else {
            const auto& cache = std::get<BiLstmCache>(caches.cells[i]);
            BiLstmGrads g = bilstm_backward(p, cache, dh);
            auto& gp = std::get<BiLstmParams>(grads.cells[i]);
            add_into(gp.fwd.w, g.dp.fwd.w);
            add_into(gp.fwd.u, g.dp.fwd.u);
            add_into(gp.fwd.b, g.dp.fwd.b);
            add_into(gp.bwd.w, g.dp.bwd.w);
            add_into(gp.bwd.u, g.dp.bwd.u);
            add_into(gp.bwd.b, g.dp.bwd.b);
            dx = std::move(g.dx);
          }
        },
        params.cells[i]);
    dh = std::move(dx);
  }
  embed_backward_into(caches.ids, dh, grads.embedding);
}

Prediction predict(const ModelParams& params, const ArchSpec& spec,
                   std::span<const uint32_t> ids) {
  ForwardCaches caches = forward(params, spec, ids);
  Prediction pred;
  pred.probs.assign(caches.probs.row(0), caches.probs.row(0) + spec.num_classes);
  pred.class_index = static_cast<size_t>(
      std::max_element(pred.probs.begin(), pred.probs.end()) -
      pred.probs.begin());
  return pred;
}

}  // namespace fpnn
