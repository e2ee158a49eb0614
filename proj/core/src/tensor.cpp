#include "fpnn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpnn/errors.hpp"

namespace fpnn {

namespace {

std::string shape_str(size_t r, size_t c) {
  return "[" + std::to_string(r) + "x" + std::to_string(c) + "]";
}

void require_inner(const Matrix& a, const Matrix& b, size_t a_cols,
                   size_t b_rows, const char* what) {
  if (a_cols != b_rows) {
    throw ShapeError(std::string(what) + ": inner dimensions disagree, " +
                     shape_str(a.rows(), a.cols()) + " vs " +
                     shape_str(b.rows(), b.cols()));
  }
}

}  // namespace

Matrix affine(const Matrix& x, const Matrix& w, std::span<const double> b) {
  require_inner(x, w, x.cols(), w.rows(), "affine");
  if (b.size() != w.cols()) {
    throw ShapeError("affine: bias length " + std::to_string(b.size()) +
                     " vs weight " + shape_str(w.rows(), w.cols()));
  }
  Matrix out(x.rows(), w.cols());
  for (size_t i = 0; i < x.rows(); ++i) {
    double* out_row = out.row(i);
    std::copy(b.begin(), b.end(), out_row);
    const double* x_row = x.row(i);
    for (size_t k = 0; k < x.cols(); ++k) {
      const double xv = x_row[k];
      const double* w_row = w.row(k);
      for (size_t j = 0; j < w.cols(); ++j) out_row[j] += xv * w_row[j];
    }
  }
  return out;
}

void add_into(Matrix& acc, const Matrix& delta) {
  if (!acc.same_shape(delta)) {
    throw ShapeError("add_into: " + shape_str(acc.rows(), acc.cols()) +
                     " vs " + shape_str(delta.rows(), delta.cols()));
  }
  auto& dst = acc.data();
  const auto& src = delta.data();
  for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require_inner(a, b, a.cols(), b.rows(), "matmul");
  Matrix out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    double* out_row = out.row(i);
    const double* a_row = a.row(i);
    for (size_t k = 0; k < a.cols(); ++k) {
      const double av = a_row[k];
      const double* b_row = b.row(k);
      for (size_t j = 0; j < b.cols(); ++j) out_row[j] += av * b_row[j];
    }
  }
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  require_inner(a, b, a.rows(), b.rows(), "matmul_tn");
  Matrix out(a.cols(), b.cols());
  for (size_t k = 0; k < a.rows(); ++k) {
    const double* a_row = a.row(k);
    const double* b_row = b.row(k);
    for (size_t i = 0; i < a.cols(); ++i) {
      const double av = a_row[i];
      double* out_row = out.row(i);
      for (size_t j = 0; j < b.cols(); ++j) out_row[j] += av * b_row[j];
    }
  }
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  require_inner(a, b, a.cols(), b.cols(), "matmul_nt");
  Matrix out(a.rows(), b.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    const double* a_row = a.row(i);
    double* out_row = out.row(i);
    for (size_t j = 0; j < b.rows(); ++j) {
      const double* b_row = b.row(j);
      double acc = 0.0;
      for (size_t k = 0; k < a.cols(); ++k) acc += a_row[k] * b_row[k];
      out_row[j] = acc;
    }
  }
  return out;
}

Matrix relu(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  const auto& in = x.data();
  auto& dst = out.data();
  for (size_t i = 0; i < in.size(); ++i) dst[i] = in[i] > 0.0 ? in[i] : 0.0;
  return out;
}

Matrix relu_backward(const Matrix& x, const Matrix& dy) {
  if (!x.same_shape(dy)) {
    throw ShapeError("relu_backward: " + shape_str(x.rows(), x.cols()) +
                     " vs " + shape_str(dy.rows(), dy.cols()));
  }
  Matrix dx(x.rows(), x.cols());
  const auto& xs = x.data();
  const auto& dys = dy.data();
  auto& dxs = dx.data();
  for (size_t i = 0; i < xs.size(); ++i) dxs[i] = xs[i] > 0.0 ? dys[i] : 0.0;
  return dx;
}

Matrix softmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (size_t i = 0; i < logits.rows(); ++i) {
    const double* z = logits.row(i);
    double* p = out.row(i);
    double zmax = z[0];
    for (size_t j = 1; j < logits.cols(); ++j) zmax = std::max(zmax, z[j]);
    double sum = 0.0;
    for (size_t j = 0; j < logits.cols(); ++j) {
      p[j] = std::exp(z[j] - zmax);
      sum += p[j];
    }
    const double inv = 1.0 / sum;
    for (size_t j = 0; j < logits.cols(); ++j) p[j] *= inv;
  }
  return out;
}

CrossEntropyResult cross_entropy(const Matrix& probs, const Matrix& onehot) {
  if (!probs.same_shape(onehot)) {
    throw ShapeError("cross_entropy: " + shape_str(probs.rows(), probs.cols()) +
                     " vs " + shape_str(onehot.rows(), onehot.cols()));
  }
  const size_t batch = probs.rows();
  const double inv_b = 1.0 / static_cast<double>(batch);
  CrossEntropyResult res{0.0, Matrix(probs.rows(), probs.cols())};
  for (size_t i = 0; i < batch; ++i) {
    const double* p = probs.row(i);
    const double* y = onehot.row(i);
    double* d = res.dlogits.row(i);
    for (size_t j = 0; j < probs.cols(); ++j) {
      if (y[j] == 1.0) res.loss -= std::log(std::max(p[j], 1e-12));
      d[j] = (p[j] - y[j]) * inv_b;
    }
  }
  res.loss *= inv_b;
  return res;
}

Matrix init_params(size_t rows, size_t cols, InitScheme scheme, Rng& rng) {
  Matrix out(rows, cols);
  switch (scheme) {
    case InitScheme::kZeros:
      break;
    case InitScheme::kOnes:
      out.fill(1.0);
      break;
    case InitScheme::kUniformEmbed:
      for (auto& v : out.data()) v = rng.uniform(-0.05, 0.05);
      break;
    case InitScheme::kGlorotUniform: {
      const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
      for (auto& v : out.data()) v = rng.uniform(-a, a);
      break;
    }
  }
  return out;
}

std::vector<double> finite_diff_grad(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> params, double h) {
  std::vector<double> theta(params.begin(), params.end());
  std::vector<double> grad(theta.size());
  for (size_t i = 0; i < theta.size(); ++i) {
    const double saved = theta[i];
    theta[i] = saved + h;
    const double fp = f(theta);
    theta[i] = saved - h;
    const double fm = f(theta);
    theta[i] = saved;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

double grad_rel_error(double analytic, double numeric) {
  const double denom =
      std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
  return std::fabs(analytic - numeric) / denom;
}

}  // namespace fpnn
