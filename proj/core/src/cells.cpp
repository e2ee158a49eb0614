#include "fpnn/cells.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpnn/errors.hpp"

namespace fpnn {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// out[j] += Σ_k v[k] · m[k,j]; k outer so the inner loop runs down
// contiguous rows.
void add_vec_mat(const double* v, const Matrix& m, double* out) {
  for (size_t k = 0; k < m.rows(); ++k) {
    const double vk = v[k];
    const double* row = m.row(k);
    for (size_t j = 0; j < m.cols(); ++j) out[j] += vk * row[j];
  }
}

// m[k,j] += a[k] · b[j]
void add_outer(const double* a, size_t n_a, const double* b, size_t n_b,
               Matrix& m) {
  for (size_t k = 0; k < n_a; ++k) {
    const double ak = a[k];
    double* row = m.row(k);
    for (size_t j = 0; j < n_b; ++j) row[j] += ak * b[j];
  }
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (size_t i = 0; i < m.rows(); ++i) {
    for (size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  }
  return out;
}

Matrix reverse_rows(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i) {
    const double* src = m.row(m.rows() - 1 - i);
    double* dst = out.row(i);
    for (size_t j = 0; j < m.cols(); ++j) dst[j] = src[j];
  }
  return out;
}

void check_cell_shapes(const Matrix& x, const Matrix& w, const Matrix& u,
                       const Matrix& b, size_t gates_per_h, const char* cell) {
  const size_t h = u.rows();
  if (w.rows() != x.cols() || w.cols() != gates_per_h * h ||
      u.cols() != gates_per_h * h || b.rows() != 1 ||
      b.cols() != gates_per_h * h) {
    throw ShapeError(std::string(cell) + ": inconsistent shapes, x cols=" +
                     std::to_string(x.cols()) + " W=[" +
                     std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                     "] U=[" + std::to_string(u.rows()) + "x" +
                     std::to_string(u.cols()) + "] b=" +
                     std::to_string(b.size()));
  }
}

}  // namespace

Matrix embed_forward(std::span<const uint32_t> ids, const Matrix& table) {
  Matrix out(ids.size(), table.cols());
  for (size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] >= table.rows()) {
      throw ArgumentError("embedding id out of range: " +
                          std::to_string(ids[t]) + " >= " +
                          std::to_string(table.rows()));
    }
    const double* src = table.row(ids[t]);
    double* dst = out.row(t);
    for (size_t j = 0; j < table.cols(); ++j) dst[j] = src[j];
  }
  return out;
}

Matrix embed_backward(std::span<const uint32_t> ids, const Matrix& dx,
                      size_t table_rows) {
  Matrix de(table_rows, dx.cols());
  embed_backward_into(ids, dx, de);
  return de;
}

void embed_backward_into(std::span<const uint32_t> ids, const Matrix& dx,
                         Matrix& de) {
  if (dx.rows() != ids.size() || dx.cols() != de.cols()) {
    throw ShapeError("embed_backward: dX rows " + std::to_string(dx.rows()) +
                     " vs " + std::to_string(ids.size()) + " ids");
  }
  for (size_t t = 0; t < ids.size(); ++t) {
    const double* src = dx.row(t);
    double* dst = de.row(ids[t]);
    for (size_t j = 0; j < dx.cols(); ++j) dst[j] += src[j];
  }
}

LstmCache lstm_forward(const Matrix& x, const LstmParams& p,
                       std::span<const double> h0,
                       std::span<const double> c0) {
  check_cell_shapes(x, p.w, p.u, p.b, 4, "lstm_forward");
  const size_t T = x.rows();
  const size_t h = p.u.rows();
  if (h0.size() != h || c0.size() != h) {
    throw ShapeError("lstm_forward: state size " + std::to_string(h0.size()) +
                     "/" + std::to_string(c0.size()) + " vs hidden " +
                     std::to_string(h));
  }

  LstmCache cache;
  cache.x = x;
  cache.gates = Matrix(T, 4 * h);
  cache.c = Matrix(T, h);
  cache.tanh_c = Matrix(T, h);
  cache.h = Matrix(T, h);
  cache.h0.assign(h0.begin(), h0.end());
  cache.c0.assign(c0.begin(), c0.end());

  const double* h_prev = cache.h0.data();
  const double* c_prev = cache.c0.data();
  for (size_t t = 0; t < T; ++t) {
    double* z = cache.gates.row(t);
    for (size_t j = 0; j < 4 * h; ++j) z[j] = p.b(0, j);
    add_vec_mat(x.row(t), p.w, z);
    add_vec_mat(h_prev, p.u, z);

    double* ct = cache.c.row(t);
    double* tct = cache.tanh_c.row(t);
    double* ht = cache.h.row(t);
    for (size_t j = 0; j < h; ++j) {
      const double i_g = sigmoid(z[j]);
      const double f_g = sigmoid(z[h + j]);
      const double g_g = std::tanh(z[2 * h + j]);
      const double o_g = sigmoid(z[3 * h + j]);
      z[j] = i_g;
      z[h + j] = f_g;
      z[2 * h + j] = g_g;
      z[3 * h + j] = o_g;
      ct[j] = f_g * c_prev[j] + i_g * g_g;
      tct[j] = std::tanh(ct[j]);
      ht[j] = o_g * tct[j];
    }
    h_prev = ht;
    c_prev = ct;
  }
  return cache;
}

LstmGrads lstm_backward(const LstmParams& p, const LstmCache& cache,
                        const Matrix& dh) {
  const size_t T = cache.x.rows();
  const size_t d = cache.x.cols();
  const size_t h = p.u.rows();
  if (dh.rows() != T || dh.cols() != h) {
    throw ShapeError("lstm_backward: dH [" + std::to_string(dh.rows()) + "x" +
                     std::to_string(dh.cols()) + "] vs cache [" +
                     std::to_string(T) + "x" + std::to_string(h) + "]");
  }

  LstmGrads g;
  g.dx = Matrix(T, d);
  g.dp.w = Matrix(d, 4 * h);
  g.dp.u = Matrix(h, 4 * h);
  g.dp.b = Matrix(1, 4 * h);
  g.dh0.assign(h, 0.0);
  g.dc0.assign(h, 0.0);

  const Matrix wt = transpose(p.w);  // [4h×d]
  const Matrix ut = transpose(p.u);  // [4h×h]

  std::vector<double> dh_next(h, 0.0);
  std::vector<double> dc_next(h, 0.0);
  std::vector<double> dz(4 * h);
  for (size_t t = T; t-- > 0;) {
    const double* gates = cache.gates.row(t);
    const double* tct = cache.tanh_c.row(t);
    const double* c_prev = t > 0 ? cache.c.row(t - 1) : cache.c0.data();
    const double* h_prev = t > 0 ? cache.h.row(t - 1) : cache.h0.data();
    const double* dht = dh.row(t);

    for (size_t j = 0; j < h; ++j) {
      const double i_g = gates[j];
      const double f_g = gates[h + j];
      const double g_g = gates[2 * h + j];
      const double o_g = gates[3 * h + j];
      const double dh_total = dht[j] + dh_next[j];
      const double do_ = dh_total * tct[j];
      const double dc = dc_next[j] + dh_total * o_g * (1.0 - tct[j] * tct[j]);
      const double di = dc * g_g;
      const double df = dc * c_prev[j];
      const double dg = dc * i_g;
      dc_next[j] = dc * f_g;
      dz[j] = di * i_g * (1.0 - i_g);
      dz[h + j] = df * f_g * (1.0 - f_g);
      dz[2 * h + j] = dg * (1.0 - g_g * g_g);
      dz[3 * h + j] = do_ * o_g * (1.0 - o_g);
    }

    add_outer(cache.x.row(t), d, dz.data(), 4 * h, g.dp.w);
    add_outer(h_prev, h, dz.data(), 4 * h, g.dp.u);
    double* db = g.dp.b.row(0);
    for (size_t j = 0; j < 4 * h; ++j) db[j] += dz[j];

    add_vec_mat(dz.data(), wt, g.dx.row(t));
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    add_vec_mat(dz.data(), ut, dh_next.data());
  }
  g.dh0 = dh_next;
  g.dc0 = dc_next;
  return g;
}

GruCache gru_forward(const Matrix& x, const GruParams& p,
                     std::span<const double> h0) {
  check_cell_shapes(x, p.w, p.u, p.b, 3, "gru_forward");
  const size_t T = x.rows();
  const size_t h = p.u.rows();
  if (h0.size() != h) {
    throw ShapeError("gru_forward: state size " + std::to_string(h0.size()) +
                     " vs hidden " + std::to_string(h));
  }

  GruCache cache;
  cache.x = x;
  cache.gates = Matrix(T, 3 * h);
  cache.rh_prev = Matrix(T, h);
  cache.h = Matrix(T, h);
  cache.h0.assign(h0.begin(), h0.end());

  std::vector<double> cand_pre(h);
  const double* h_prev = cache.h0.data();
  for (size_t t = 0; t < T; ++t) {
    double* z = cache.gates.row(t);
    // z and r pre-activations share one pass; the candidate needs r first.
    for (size_t j = 0; j < 2 * h; ++j) z[j] = p.b(0, j);
    for (size_t k = 0; k < x.cols(); ++k) {
      const double xv = x(t, k);
      const double* w_row = p.w.row(k);
      for (size_t j = 0; j < 2 * h; ++j) z[j] += xv * w_row[j];
    }
    for (size_t k = 0; k < h; ++k) {
      const double hv = h_prev[k];
      const double* u_row = p.u.row(k);
      for (size_t j = 0; j < 2 * h; ++j) z[j] += hv * u_row[j];
    }
    double* rh = cache.rh_prev.row(t);
    for (size_t j = 0; j < h; ++j) {
      z[j] = sigmoid(z[j]);          // update gate
      z[h + j] = sigmoid(z[h + j]);  // reset gate
      rh[j] = z[h + j] * h_prev[j];
    }

    for (size_t j = 0; j < h; ++j) cand_pre[j] = p.b(0, 2 * h + j);
    for (size_t k = 0; k < x.cols(); ++k) {
      const double xv = x(t, k);
      const double* w_row = p.w.row(k) + 2 * h;
      for (size_t j = 0; j < h; ++j) cand_pre[j] += xv * w_row[j];
    }
    for (size_t k = 0; k < h; ++k) {
      const double rv = rh[k];
      const double* u_row = p.u.row(k) + 2 * h;
      for (size_t j = 0; j < h; ++j) cand_pre[j] += rv * u_row[j];
    }

    double* ht = cache.h.row(t);
    for (size_t j = 0; j < h; ++j) {
      const double cand = std::tanh(cand_pre[j]);
      z[2 * h + j] = cand;
      ht[j] = (1.0 - z[j]) * h_prev[j] + z[j] * cand;
    }
    h_prev = ht;
  }
  return cache;
}

GruGrads gru_backward(const GruParams& p, const GruCache& cache,
                      const Matrix& dh) {
  const size_t T = cache.x.rows();
  const size_t d = cache.x.cols();
  const size_t h = p.u.rows();
  if (dh.rows() != T || dh.cols() != h) {
    throw ShapeError("gru_backward: dH [" + std::to_string(dh.rows()) + "x" +
                     std::to_string(dh.cols()) + "] vs cache [" +
                     std::to_string(T) + "x" + std::to_string(h) + "]");
  }

  GruGrads g;
  g.dx = Matrix(T, d);
  g.dp.w = Matrix(d, 3 * h);
  g.dp.u = Matrix(h, 3 * h);
  g.dp.b = Matrix(1, 3 * h);
  g.dh0.assign(h, 0.0);

  const Matrix wt = transpose(p.w);  // [3h×d]
  const Matrix ut = transpose(p.u);  // [3h×h]

  std::vector<double> dh_next(h, 0.0);
  std::vector<double> dz(3 * h);       // pre-activation grads z,r,h̃
  std::vector<double> drh(h);
  for (size_t t = T; t-- > 0;) {
    const double* gates = cache.gates.row(t);
    const double* rh = cache.rh_prev.row(t);
    const double* h_prev = t > 0 ? cache.h.row(t - 1) : cache.h0.data();
    const double* dht = dh.row(t);

    // dh_next doubles as the accumulator for dh_{t-1}.
    for (size_t j = 0; j < h; ++j) {
      const double z_g = gates[j];
      const double cand = gates[2 * h + j];
      const double dh_total = dht[j] + dh_next[j];
      const double dz_gate = dh_total * (cand - h_prev[j]);
      const double dcand = dh_total * z_g;
      dh_next[j] = dh_total * (1.0 - z_g);
      dz[2 * h + j] = dcand * (1.0 - cand * cand);
      dz[j] = dz_gate * z_g * (1.0 - z_g);
      drh[j] = 0.0;
    }
    // drh = dcand_pre · U_hᵀ; U_h is columns 2h..3h of U, so rows 2h..3h
    // of the transpose.
    for (size_t j = 0; j < h; ++j) {
      const double dcp = dz[2 * h + j];
      const double* u_row = ut.row(2 * h + j);
      for (size_t k = 0; k < h; ++k) drh[k] += dcp * u_row[k];
    }
    for (size_t j = 0; j < h; ++j) {
      const double r_g = gates[h + j];
      const double dr = drh[j] * h_prev[j];
      dh_next[j] += drh[j] * r_g;
      dz[h + j] = dr * r_g * (1.0 - r_g);
    }

    add_outer(cache.x.row(t), d, dz.data(), 3 * h, g.dp.w);
    // Recurrent weights: z and r see h_prev, the candidate sees r⊙h_prev.
    for (size_t k = 0; k < h; ++k) {
      double* u_row = g.dp.u.row(k);
      const double hv = h_prev[k];
      const double rv = rh[k];
      for (size_t j = 0; j < 2 * h; ++j) u_row[j] += hv * dz[j];
      for (size_t j = 2 * h; j < 3 * h; ++j) u_row[j] += rv * dz[j];
    }
    double* db = g.dp.b.row(0);
    for (size_t j = 0; j < 3 * h; ++j) db[j] += dz[j];

    add_vec_mat(dz.data(), wt, g.dx.row(t));
    // dh_prev contributions through the z and r pre-activations.
    for (size_t j = 0; j < 2 * h; ++j) {
      const double dzj = dz[j];
      const double* u_row = ut.row(j);
      for (size_t k = 0; k < h; ++k) dh_next[k] += dzj * u_row[k];
    }
  }
  g.dh0 = dh_next;
  return g;
}

BiLstmCache bilstm_forward(const Matrix& x, const BiLstmParams& p) {
  const size_t h = p.fwd.u.rows();
  if (p.bwd.u.rows() != h) {
    throw ShapeError("bilstm_forward: direction hidden sizes differ");
  }
  const std::vector<double> zeros(h, 0.0);

  BiLstmCache cache;
  cache.fwd = lstm_forward(x, p.fwd, zeros, zeros);
  cache.bwd = lstm_forward(reverse_rows(x), p.bwd, zeros, zeros);

  const size_t T = x.rows();
  cache.h = Matrix(T, 2 * h);
  for (size_t t = 0; t < T; ++t) {
    double* dst = cache.h.row(t);
    const double* f = cache.fwd.h.row(t);
    const double* b = cache.bwd.h.row(T - 1 - t);
    for (size_t j = 0; j < h; ++j) dst[j] = f[j];
    for (size_t j = 0; j < h; ++j) dst[h + j] = b[j];
  }
  return cache;
}

BiLstmGrads bilstm_backward(const BiLstmParams& p, const BiLstmCache& cache,
                            const Matrix& dh) {
  const size_t T = cache.fwd.x.rows();
  const size_t h = p.fwd.u.rows();
  if (dh.rows() != T || dh.cols() != 2 * h) {
    throw ShapeError("bilstm_backward: dH [" + std::to_string(dh.rows()) +
                     "x" + std::to_string(dh.cols()) + "] vs [" +
                     std::to_string(T) + "x" + std::to_string(2 * h) + "]");
  }

  Matrix dh_fwd(T, h);
  Matrix dh_bwd(T, h);  // in the reversed clock of the bwd pass
  for (size_t t = 0; t < T; ++t) {
    const double* src = dh.row(t);
    double* f = dh_fwd.row(t);
    double* b = dh_bwd.row(T - 1 - t);
    for (size_t j = 0; j < h; ++j) f[j] = src[j];
    for (size_t j = 0; j < h; ++j) b[j] = src[h + j];
  }

  LstmGrads gf = lstm_backward(p.fwd, cache.fwd, dh_fwd);
  LstmGrads gb = lstm_backward(p.bwd, cache.bwd, dh_bwd);

  BiLstmGrads g;
  g.dx = std::move(gf.dx);
  const Matrix dx_bwd = reverse_rows(gb.dx);
  for (size_t i = 0; i < g.dx.size(); ++i) {
    g.dx.data()[i] += dx_bwd.data()[i];
  }
  g.dp.fwd = std::move(gf.dp);
  g.dp.bwd = std::move(gb.dp);
  return g;
}

}  // namespace fpnn
