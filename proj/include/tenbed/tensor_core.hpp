/* Copyright 2026 The tenbed Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

// Dense vector/matrix storage and the flattened tensor-product primitives
// every embedding layer is assembled from.
//
// Tensor products are always flattened: for a of length g and b of length h,
// (a ⊗ b)[j*h + k] = a[j] * b[k]. A chain v1 ⊗ ... ⊗ vn is the left fold of
// that rule, so output index (i1, ..., in) is read as a mixed-radix number
// with i1 most significant.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <ranges>
#include <span>
#include <string>
#include <vector>

#include "tenbed/errors.hpp"

namespace tenbed {

using Scalar = double;

class DenseVec {
 public:
  DenseVec() = default;
  explicit DenseVec(std::size_t len, Scalar fill = 0.0) : data_(len, fill) {}
  DenseVec(std::initializer_list<Scalar> init) : data_(init) {}
  explicit DenseVec(std::vector<Scalar> data) : data_(std::move(data)) {}
  explicit DenseVec(std::span<const Scalar> data) : data_(data.begin(), data.end()) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Scalar& operator[](std::size_t i) { return data_[i]; }
  Scalar operator[](std::size_t i) const { return data_[i]; }

  Scalar* data() noexcept { return data_.data(); }
  const Scalar* data() const noexcept { return data_.data(); }
  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<Scalar> span() noexcept { return data_; }
  std::span<const Scalar> span() const noexcept { return data_; }
  operator std::span<const Scalar>() const noexcept { return data_; }

  const std::vector<Scalar>& values() const noexcept { return data_; }

  bool all_finite() const {
    return std::ranges::all_of(data_, [](Scalar x) { return std::isfinite(x); });
  }

  friend bool operator==(const DenseVec&, const DenseVec&) = default;

 private:
  std::vector<Scalar> data_;
};

// Row-major matrix. The layout is part of the checkpoint format.
class DenseMat {
 public:
  DenseMat() = default;
  DenseMat(std::size_t rows, std::size_t cols, Scalar fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMat(std::size_t rows, std::size_t cols, std::vector<Scalar> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw InvalidArgument("DenseMat: data length " + std::to_string(data_.size()) +
                            " != rows*cols " + std::to_string(rows_ * cols_));
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Scalar operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Scalar> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Scalar> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<Scalar> flat() noexcept { return data_; }
  std::span<const Scalar> flat() const noexcept { return data_; }

  void fill(Scalar value) { std::ranges::fill(data_, value); }

  bool all_finite() const {
    return std::ranges::all_of(data_, [](Scalar x) { return std::isfinite(x); });
  }

  friend bool operator==(const DenseMat&, const DenseMat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

namespace detail {

template <class T>
std::span<const Scalar> as_span(const T& v) {
  return std::span<const Scalar>(v);
}

inline std::size_t checked_product(std::span<const std::size_t> dims) {
  std::size_t total = 1;
  for (std::size_t dim : dims) total *= dim;
  return total;
}

}  // namespace detail

// Anything that can be viewed as a contiguous run of scalars.
template <class T>
concept ScalarRange = std::convertible_to<const T&, std::span<const Scalar>>;

inline DenseVec tensor_product(std::span<const Scalar> a, std::span<const Scalar> b) {
  if (a.empty() || b.empty()) {
    throw InvalidArgument("tensor_product: empty operand");
  }
  DenseVec out(a.size() * b.size());
  std::size_t k = 0;
  for (Scalar x : a) {
    for (Scalar y : b) out[k++] = x * y;
  }
  return out;
}

// Left fold of tensor_product over factors of arbitrary (possibly unequal)
// lengths. Used directly by layers whose modes differ in size.
template <std::ranges::input_range R>
  requires ScalarRange<std::ranges::range_value_t<R>>
DenseVec tensor_product_chain(const R& factors) {
  auto it = std::ranges::begin(factors);
  if (it == std::ranges::end(factors)) {
    throw InvalidArgument("tensor product chain needs at least one factor");
  }
  std::span<const Scalar> first = detail::as_span(*it);
  if (first.empty()) throw InvalidArgument("tensor product chain: empty factor");
  DenseVec acc(first);
  for (++it; it != std::ranges::end(factors); ++it) {
    acc = tensor_product(acc.span(), detail::as_span(*it));
  }
  return acc;
}

// v1 ⊗ v2 ⊗ ... ⊗ vn with every factor of the same length q.
template <std::ranges::input_range R>
  requires ScalarRange<std::ranges::range_value_t<R>>
DenseVec cumulative_tensor_product(const R& vs) {
  std::size_t q = 0;
  bool first = true;
  for (const auto& v : vs) {
    std::size_t len = detail::as_span(v).size();
    if (first) {
      q = len;
      first = false;
    } else if (len != q) {
      throw InvalidArgument("cumulative_tensor_product: factor lengths differ (" +
                            std::to_string(q) + " vs " + std::to_string(len) + ")");
    }
  }
  return tensor_product_chain(vs);
}

inline DenseVec cumulative_tensor_product(std::initializer_list<DenseVec> vs) {
  return cumulative_tensor_product(std::vector<DenseVec>(vs));
}

// Sum over r groups of the cumulative product of each group (an entangled
// tensor of rank r). All groups must have the same order and factor length.
template <std::ranges::input_range Groups>
DenseVec entangled_sum(const Groups& groups) {
  DenseVec out;
  std::size_t order = 0;
  bool first = true;
  for (const auto& group : groups) {
    std::size_t group_order = std::ranges::distance(group);
    DenseVec term = cumulative_tensor_product(group);
    if (first) {
      order = group_order;
      out = std::move(term);
      first = false;
      continue;
    }
    if (group_order != order || term.size() != out.size()) {
      throw InvalidArgument("entangled_sum: ragged groups");
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += term[i];
  }
  if (first) throw InvalidArgument("entangled_sum: rank must be >= 1");
  return out;
}

// Keeps the leading d coordinates; the trailing excess is dropped.
inline DenseVec truncate_to(std::span<const Scalar> v, std::size_t d) {
  if (d == 0) throw InvalidArgument("truncate_to: d must be positive");
  if (v.size() < d) {
    throw ConfigError("truncate_to: vector of length " + std::to_string(v.size()) +
                      " is shorter than target dimension " + std::to_string(d));
  }
  return DenseVec(v.first(d));
}

// Vector-Jacobian product of the flattened chain f1 ⊗ ... ⊗ fn with respect to
// factor `k`: grad[a] = sum over all output indices whose k-th digit is a of
// upstream[idx] * prod_{j != k} f_j[digit_j]. `upstream` must have length
// prod_j |f_j| (zero-pad it first when the forward map truncated).
template <std::ranges::random_access_range R>
  requires ScalarRange<std::ranges::range_value_t<R>>
DenseVec tensor_product_vjp(std::span<const Scalar> upstream, const R& factors, std::size_t k) {
  const std::size_t n = std::ranges::size(factors);
  if (k >= n) throw InvalidArgument("tensor_product_vjp: factor index out of range");

  std::vector<std::span<const Scalar>> views;
  views.reserve(n);
  for (const auto& f : factors) views.push_back(detail::as_span(f));

  std::size_t total = 1;
  for (const auto& v : views) total *= v.size();
  if (upstream.size() != total) {
    throw InvalidArgument("tensor_product_vjp: upstream length " + std::to_string(upstream.size()) +
                          " != product of factor lengths " + std::to_string(total));
  }

  // Upstream viewed as a (left, mid, right) block with the k-th mode in the middle.
  DenseVec left{1.0};
  for (std::size_t j = 0; j < k; ++j) left = tensor_product(left.span(), views[j]);
  DenseVec right{1.0};
  for (std::size_t j = k + 1; j < n; ++j) right = tensor_product(right.span(), views[j]);

  const std::size_t mid = views[k].size();
  const std::size_t rs = right.size();
  DenseVec grad(mid);
  for (std::size_t p = 0; p < left.size(); ++p) {
    const Scalar lp = left[p];
    if (lp == 0.0) continue;
    for (std::size_t a = 0; a < mid; ++a) {
      const Scalar* u = upstream.data() + (p * mid + a) * rs;
      Scalar acc = 0.0;
      for (std::size_t s = 0; s < rs; ++s) acc += u[s] * right[s];
      grad[a] += lp * acc;
    }
  }
  return grad;
}

// Decomposes `value` into digits over `radices`, most significant first.
inline std::vector<std::size_t> mixed_radix_digits(std::size_t value,
                                                   std::span<const std::size_t> radices) {
  std::vector<std::size_t> digits(radices.size());
  for (std::size_t i = radices.size(); i-- > 0;) {
    digits[i] = value % radices[i];
    value /= radices[i];
  }
  if (value != 0) throw InvalidArgument("mixed_radix_digits: value exceeds radix capacity");
  return digits;
}

inline Scalar dot(std::span<const Scalar> a, std::span<const Scalar> b) {
  if (a.size() != b.size()) throw InvalidArgument("dot: length mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), Scalar{0});
}

inline Scalar l2_norm(std::span<const Scalar> a) { return std::sqrt(dot(a, a)); }

// y += alpha * x
inline void axpy(Scalar alpha, std::span<const Scalar> x, std::span<Scalar> y) {
  if (x.size() != y.size()) throw InvalidArgument("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace tenbed
