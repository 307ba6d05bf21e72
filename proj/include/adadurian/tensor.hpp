// Copyright (c) 2026 The adadurian Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADADURIAN_TENSOR_HPP_
#define ADADURIAN_TENSOR_HPP_

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "adadurian/rng.hpp"

namespace adadurian {

// Dense row-major matrix. All model parameters and activations use this or
// std::vector<R>; there is no view type, slices are passed as pointer+size.
template <typename R>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<R> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, R(0)) {}

  R* row(std::size_t i) { return data.data() + i * cols; }
  const R* row(std::size_t i) const { return data.data() + i * cols; }
  R& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  R at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::size_t size() const { return data.size(); }
  void fill(R v) { data.assign(data.size(), v); }
  void zero() { fill(R(0)); }

  bool same_shape(const Matrix& o) const {
    return rows == o.rows && cols == o.cols;
  }
};

template <typename R>
using Vector = std::vector<R>;

// ---- raw kernels ----------------------------------------------------------

template <typename R>
inline R dot(const R* a, const R* b, std::size_t n) {
  R s = R(0);
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <typename R>
inline void axpy(R alpha, const R* x, R* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// y = W x + b   (W: out x in, row-major)
template <typename R>
inline void gemv(const Matrix<R>& w, const R* x, const R* b, R* y) {
  for (std::size_t o = 0; o < w.rows; ++o)
    y[o] = (b ? b[o] : R(0)) + dot(w.row(o), x, w.cols);
}

// y += W^T g   (scatter of output gradient back to input)
template <typename R>
inline void gemv_transposed_add(const Matrix<R>& w, const R* g, R* y) {
  for (std::size_t o = 0; o < w.rows; ++o) axpy(g[o], w.row(o), y, w.cols);
}

// Wg += g x^T  (accumulate weight gradient of y = W x)
template <typename R>
inline void outer_add(Matrix<R>& wg, const R* g, const R* x) {
  for (std::size_t o = 0; o < wg.rows; ++o) axpy(g[o], x, wg.row(o), wg.cols);
}

// ---- elementwise activations ----------------------------------------------

template <typename R>
inline R sigmoid(R x) {
  return R(1) / (R(1) + std::exp(-x));
}

template <typename R>
inline R relu(R x) {
  return x > R(0) ? x : R(0);
}

template <typename R>
inline R softplus(R x) {
  // log(1 + e^x), stable for large |x|.
  if (x > R(20)) return x;
  if (x < R(-20)) return std::exp(x);
  return std::log1p(std::exp(x));
}

// ---- initialization --------------------------------------------------------

// Fan-in scaled uniform for weight matrices: U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
template <typename R>
inline void init_fan_in(Matrix<R>& w, std::size_t fan_in, Rng& rng) {
  double a = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (auto& v : w.data) v = static_cast<R>(rng.uniform(-a, a));
}

// normal(0, 0.1) for embedding tables.
template <typename R>
inline void init_embedding(Matrix<R>& w, Rng& rng) {
  for (auto& v : w.data) v = static_cast<R>(rng.normal(0.0, 0.1));
}

}  // namespace adadurian

#endif  // ADADURIAN_TENSOR_HPP_
