// Copyright 2026 The survdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Orthonormal DCT-II and its inverse (DCT-III), evaluated directly:
//
//   y_k = c_k * sum_n x_n cos(pi k (2n + 1) / 2N),
//   c_0 = sqrt(1/N), c_k = sqrt(2/N) for k > 0.
//
// O(N^2) per transform with a single cosine table of 4N entries, since
// k (2n + 1) only matters modulo 4N.

#ifndef SURVDP_SPECTRAL_H_
#define SURVDP_SPECTRAL_H_

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace survdp {

template <typename Scalar>
using SpectralVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace internal {

template <typename Scalar>
std::vector<Scalar> dct_cosine_table(Eigen::Index n) {
  const Eigen::Index period = 4 * n;
  std::vector<Scalar> table(static_cast<std::size_t>(period));
  for (Eigen::Index m = 0; m < period; ++m) {
    table[m] =
        static_cast<Scalar>(std::cos(std::numbers::pi * static_cast<double>(m) /
                                     (2.0 * static_cast<double>(n))));
  }
  return table;
}

template <typename Scalar>
Scalar dct_scale(Eigen::Index k, Eigen::Index n) {
  using std::sqrt;
  return k == 0 ? sqrt(Scalar(1) / Scalar(n)) : sqrt(Scalar(2) / Scalar(n));
}

}  // namespace internal

template <typename Derived>
SpectralVector<typename Derived::Scalar> dct_forward(
    const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = x.size();
  if (n == 0) throw std::invalid_argument("dct_forward: empty vector");
  const auto table = internal::dct_cosine_table<Scalar>(n);
  const Eigen::Index period = 4 * n;
  SpectralVector<Scalar> y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Scalar acc(0);
    Eigen::Index phase = k % period;  // k (2i + 1) mod 4N, advanced by 2k
    const Eigen::Index step = (2 * k) % period;
    for (Eigen::Index i = 0; i < n; ++i) {
      acc += x[i] * table[phase];
      phase += step;
      if (phase >= period) phase -= period;
    }
    y[k] = internal::dct_scale<Scalar>(k, n) * acc;
  }
  return y;
}

template <typename Derived>
SpectralVector<typename Derived::Scalar> dct_inverse(
    const Eigen::MatrixBase<Derived>& y) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = y.size();
  if (n == 0) throw std::invalid_argument("dct_inverse: empty vector");
  const auto table = internal::dct_cosine_table<Scalar>(n);
  const Eigen::Index period = 4 * n;
  SpectralVector<Scalar> x = SpectralVector<Scalar>::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (y[k] == Scalar(0)) continue;  // truncated spectra are mostly zeros
    const Scalar weight = internal::dct_scale<Scalar>(k, n) * y[k];
    Eigen::Index phase = k % period;
    const Eigen::Index step = (2 * k) % period;
    for (Eigen::Index i = 0; i < n; ++i) {
      x[i] += weight * table[phase];
      phase += step;
      if (phase >= period) phase -= period;
    }
  }
  return x;
}

// Keeps the first `keep` coefficients and zeroes the rest.
template <typename Derived>
SpectralVector<typename Derived::Scalar> truncate(
    const Eigen::MatrixBase<Derived>& y, Eigen::Index keep) {
  if (keep < 1 || keep > y.size()) {
    throw std::invalid_argument("truncate: coefficient count out of range");
  }
  SpectralVector<typename Derived::Scalar> out = y;
  out.tail(y.size() - keep).setZero();
  return out;
}

}  // namespace survdp

#endif  // SURVDP_SPECTRAL_H_
