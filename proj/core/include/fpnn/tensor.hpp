#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fpnn/rng.hpp"

namespace fpnn {

// Dense row-major matrix of 64-bit floats. 64-bit throughout: finite
// difference checks at 1e-4 relative tolerance are not reliable in float32.
class Matrix {
public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }

  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  double* row(size_t r) { return data_.data() + r * cols_; }
  const double* row(size_t r) const { return data_.data() + r * cols_; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void fill(double v) { data_.assign(data_.size(), v); }

  bool same_shape(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

// out[i,j] = sum_k x[i,k] W[k,j] + b[j]
Matrix affine(const Matrix& x, const Matrix& w, std::span<const double> b);

// acc += delta, elementwise. Shapes must match.
void add_into(Matrix& acc, const Matrix& delta);

// Plain matrix products used by the backward passes.
Matrix matmul(const Matrix& a, const Matrix& b);     // A · B
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // Aᵀ · B
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // A · Bᵀ

Matrix relu(const Matrix& x);
// dx = dy where x > 0, else 0. Subgradient at exactly 0 is 0.
Matrix relu_backward(const Matrix& x, const Matrix& dy);

// Row-wise softmax with max subtraction; rows sum to 1 within 1e-12.
Matrix softmax(const Matrix& logits);

struct CrossEntropyResult {
  double loss;     // mean over rows of −log p[y]
  Matrix dlogits;  // (probs − onehot) / B, gradient w.r.t. pre-softmax logits
};

CrossEntropyResult cross_entropy(const Matrix& probs, const Matrix& onehot);

enum class InitScheme {
  kGlorotUniform,   // U(−√(6/(fan_in+fan_out)), +√(6/(fan_in+fan_out)))
  kUniformEmbed,    // U(−0.05, 0.05)
  kZeros,
  kOnes,
};

Matrix init_params(size_t rows, size_t cols, InitScheme scheme, Rng& rng);

// Central difference (f(θ+h·eᵢ) − f(θ−h·eᵢ)) / 2h per coordinate.
std::vector<double> finite_diff_grad(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> params, double h = 1e-5);

// |a−n| / max(|a|,|n|,1e-8), the relative error used by every gradient check.
double grad_rel_error(double analytic, double numeric);

}  // namespace fpnn
