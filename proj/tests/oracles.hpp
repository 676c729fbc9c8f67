// Copyright 2026 The twinfringe Authors
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


#pragma once

// Brute-force reference implementations used only by the tests. These avoid
// the library's Eigen kernels on purpose: plain arrays, explicit loops, and
// closed-form 2x2 eigenvalues.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using C = std::complex<double>;
using Vec4 = std::array<C, 4>;
using Mat2 = std::array<std::array<C, 2>, 2>;
using Mat4 = std::array<std::array<C, 4>, 4>;

inline constexpr double pi = std::numbers::pi;

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

/// Symmetric splitter conjugated by the shifter P(phi) = diag(1, e^{i phi}):
/// P(-phi) B P(phi).
inline Mat2 analyzer(double phi) {
  const double s = 1.0 / std::sqrt(2.0);
  const Mat2 b{{{C(s), C(s)}, {C(-s), C(s)}}};
  const Mat2 p{{{C(1), C(0)}, {C(0), std::exp(C(0, phi))}}};
  const Mat2 pinv{{{C(1), C(0)}, {C(0), std::exp(C(0, -phi))}}};
  return mul(pinv, mul(b, p));
}

/// Output amplitudes after the two analyzers, summed index by index.
inline Vec4 evolve(const Vec4& g, double phi1, double phi2) {
  const Mat2 u1 = analyzer(phi1), u2 = analyzer(phi2);
  Vec4 out{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          out[2 * a + b] += u1[a][c] * u2[b][d] * g[2 * c + d];
  return out;
}

struct Probabilities {
  std::array<double, 4> joint{};
  double up1 = 0, up2 = 0;
  double pbar_uu = 0;
};

inline Probabilities probabilities(const Vec4& g, double phi1, double phi2) {
  const Vec4 out = evolve(g, phi1, phi2);
  Probabilities p;
  for (int k = 0; k < 4; ++k) p.joint[k] = std::norm(out[k]);
  p.up1 = p.joint[0] + p.joint[1];
  p.up2 = p.joint[0] + p.joint[2];
  p.pbar_uu = p.joint[0] - p.up1 * p.up2 + 0.25;
  return p;
}

inline Mat4 outer(const Vec4& g) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = g[i] * std::conj(g[j]);
  return r;
}

/// keep = 0 for particle 1, 1 for particle 2.
inline Mat2 reduce(const Mat4& r, int keep) {
  Mat2 out{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int t = 0; t < 2; ++t)
        out[a][b] += keep == 0 ? r[2 * a + t][2 * b + t] : r[2 * t + a][2 * t + b];
  return out;
}

/// Eigenvalues of a 2x2 Hermitian matrix from the characteristic quadratic.
inline std::array<double, 2> eigenvalues(const Mat2& m) {
  const double a = m[0][0].real(), d = m[1][1].real();
  const double disc = std::sqrt((a - d) * (a - d) / 4.0 + std::norm(m[0][1]));
  const double mid = (a + d) / 2.0;
  return {mid - disc, mid + disc};
}

inline double entropy(const Mat2& m) {
  double h = 0.0;
  for (double l : eigenvalues(m)) {
    if (l > 1e-300) h -= l * std::log2(l);
  }
  return h;
}

inline double contrast(double hi, double lo) { return (hi - lo) / (hi + lo); }

/// Single-particle visibility of particle 1 from a dense phi1 sweep.
inline double visibility1_dense(const Vec4& g, double phi2, int points) {
  double hi = -1, lo = 2;
  for (int k = 0; k < points; ++k) {
    const double v = probabilities(g, 2 * pi * k / points, phi2).up1;
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return contrast(hi, lo);
}

/// Corrected-joint contrast of a phi1 sweep at fixed phi2.
inline double joint_contrast_dense(const Vec4& g, double phi2, int points) {
  double hi = -1, lo = 2;
  for (int k = 0; k < points; ++k) {
    const double v = probabilities(g, 2 * pi * k / points, phi2).pbar_uu;
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return contrast(hi, lo);
}

/// Largest corrected-joint fringe contrast over every fixed partner phase.
inline double joint_visibility_2d(const Vec4& g, int points) {
  double best = 0.0;
  for (int j = 0; j < points; ++j) {
    best = std::max(best, joint_contrast_dense(g, 2 * pi * j / points, points));
  }
  return best;
}

inline double concurrence(const Vec4& g) {
  return 2.0 * std::abs(g[0] * g[3] - g[1] * g[2]);
}

}  // namespace oracle
