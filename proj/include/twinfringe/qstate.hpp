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

// Two-qubit pure states, density matrices, channels and entropy.
//
// Every vector and matrix in this library uses the computational basis
// ordering (|uu>, |ud>, |du>, |dd>), where the first letter is particle 1
// and spin up is the column vector (1, 0). Index k of a 4-vector therefore
// encodes spin(particle1) = k / 2 and spin(particle2) = k % 2.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "twinfringe/error.hpp"

namespace twinfringe {

using Complex = std::complex<double>;
using Amplitudes = Eigen::Vector4cd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class QubitId { particle1, particle2 };
enum class Spin { up = 0, down = 1 };

inline constexpr int basis_index(Spin first, Spin second) {
  return 2 * static_cast<int>(first) + static_cast<int>(second);
}

inline QubitId other(QubitId q) {
  return q == QubitId::particle1 ? QubitId::particle2 : QubitId::particle1;
}

namespace tolerance {
// Normalization deviation above which make_source reports renormalization.
inline constexpr double kRenormalizeFlag = 1e-9;
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kPsd = 1e-10;
// Looser bound accepted by the entropy routine.
inline constexpr double kEntropyPsd = 1e-8;
// Imaginary part magnitude treated as zero by the closed-form routes.
inline constexpr double kRealAmplitude = 1e-14;
}  // namespace tolerance

/// A normalized pure two-particle source state.
class SourceState {
 public:
  const Amplitudes& amplitudes() const noexcept { return gamma_; }
  Complex operator[](int k) const { return gamma_(k); }

  /// True when the input handed to make_source was off-norm by more than
  /// 1e-9 and had to be rescaled.
  bool was_renormalized() const noexcept { return renormalized_; }

  bool is_real(double tol = tolerance::kRealAmplitude) const {
    return gamma_.imag().cwiseAbs().maxCoeff() <= tol;
  }

  /// Real parts of the amplitudes. Only meaningful when is_real().
  std::array<double, 4> real_amplitudes() const {
    return {gamma_(0).real(), gamma_(1).real(), gamma_(2).real(),
            gamma_(3).real()};
  }

  /// Multiplies amplitude k by exp(i * phases[k]).
  SourceState with_phases(const std::array<double, 4>& phases) const {
    Amplitudes g = gamma_;
    for (int k = 0; k < 4; ++k) g(k) *= std::polar(1.0, phases[k]);
    return SourceState(g, false);
  }

  friend SourceState make_source(const Amplitudes& gamma);

 private:
  SourceState(Amplitudes gamma, bool renormalized)
      : gamma_(std::move(gamma)), renormalized_(renormalized) {}

  Amplitudes gamma_;
  bool renormalized_ = false;
};

inline SourceState make_source(const Amplitudes& gamma) {
  if (!gamma.allFinite()) {
    throw Error(ErrorCode::invalid_state, "amplitudes must be finite");
  }
  const double norm = gamma.norm();
  if (norm == 0.0) {
    throw Error(ErrorCode::invalid_state, "all-zero amplitude vector");
  }
  const bool flagged =
      std::abs(gamma.squaredNorm() - 1.0) > tolerance::kRenormalizeFlag;
  return SourceState(gamma / norm, flagged);
}

inline SourceState make_source(Complex g1, Complex g2, Complex g3,
                               Complex g4) {
  Amplitudes gamma;
  gamma << g1, g2, g3, g4;
  return make_source(gamma);
}

inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) = a(i, k) * b(j, l);
  return out;
}

/// Lifts a single-qubit operator onto `qubit`, identity on the partner.
inline Matrix4c embed(const Matrix2c& op, QubitId qubit) {
  return qubit == QubitId::particle1 ? kron(op, Matrix2c::Identity())
                                     : kron(Matrix2c::Identity(), op);
}

/// A validated 4x4 density operator: Hermitian, unit trace, PSD.
class DensityMatrix {
 public:
  /// Validates `rho` and throws invalid-density if any bound is violated.
  static DensityMatrix from_matrix(const Matrix4c& rho) {
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (!rho.allFinite() || herm > tolerance::kHermitian) {
      throw Error(ErrorCode::invalid_density,
                  "matrix is not Hermitian (deviation " + std::to_string(herm) +
                      ")");
    }
    const Complex tr = rho.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > tolerance::kTrace) {
      throw Error(ErrorCode::invalid_density,
                  "trace deviates from 1 by " +
                      std::to_string(std::abs(tr - 1.0)));
    }
    const Matrix4c herm_part = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(herm_part,
                                                   Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tolerance::kPsd) {
      throw Error(ErrorCode::invalid_density,
                  "negative eigenvalue " +
                      std::to_string(solver.eigenvalues().minCoeff()));
    }
    return DensityMatrix(herm_part);
  }

  const Matrix4c& matrix() const noexcept { return rho_; }
  Complex operator()(int i, int j) const { return rho_(i, j); }

  double purity() const { return (rho_ * rho_).trace().real(); }

  /// Computational-basis populations, clamped at zero.
  Eigen::Vector4d populations() const {
    Eigen::Vector4d p;
    for (int k = 0; k < 4; ++k) p(k) = std::max(0.0, rho_(k, k).real());
    return p;
  }

  /// Returns U rho U^dagger.
  DensityMatrix evolve(const Matrix4c& unitary) const {
    return from_matrix(unitary * rho_ * unitary.adjoint());
  }

  Eigen::Vector4d eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(rho_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }

 private:
  explicit DensityMatrix(Matrix4c rho) : rho_(std::move(rho)) {}

  Matrix4c rho_;
};

inline DensityMatrix to_density(const SourceState& state) {
  const Amplitudes& g = state.amplitudes();
  return DensityMatrix::from_matrix(g * g.adjoint());
}

/// Contracts the discarded qubit's index and returns the 2x2 marginal of
/// `keep`.
inline Matrix2c partial_trace(const DensityMatrix& rho, QubitId keep) {
  Matrix2c reduced = Matrix2c::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int traced = 0; traced < 2; ++traced) {
        if (keep == QubitId::particle1) {
          reduced(a, b) += rho(2 * a + traced, 2 * b + traced);
        } else {
          reduced(a, b) += rho(2 * traced + a, 2 * traced + b);
        }
      }
    }
  }
  return reduced;
}

/// Von Neumann entropy in bits, with 0 log 0 taken as 0.
inline double von_neumann_entropy(const Matrix2c& reduced) {
  const double herm = (reduced - reduced.adjoint()).cwiseAbs().maxCoeff();
  if (!reduced.allFinite() || herm > tolerance::kEntropyPsd) {
    throw Error(ErrorCode::invalid_density, "reduced matrix is not Hermitian");
  }
  if (std::abs(reduced.trace() - Complex(1.0, 0.0)) > tolerance::kEntropyPsd) {
    throw Error(ErrorCode::invalid_density, "reduced matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix2c> solver(
      0.5 * (reduced + reduced.adjoint()), Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double lambda = solver.eigenvalues()(k);
    if (lambda < -tolerance::kEntropyPsd) {
      throw Error(ErrorCode::invalid_density,
                  "negative eigenvalue " + std::to_string(lambda));
    }
    if (lambda > 0.0) entropy -= lambda * std::log2(lambda);
  }
  return std::clamp(entropy, 0.0, 1.0);
}

/// (1 - lambda) rho + lambda I/4.
inline DensityMatrix depolarize(const DensityMatrix& rho, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::parameter,
                "depolarizing strength must lie in [0, 1], got " +
                    std::to_string(lambda));
  }
  return DensityMatrix::from_matrix((1.0 - lambda) * rho.matrix() +
                                    (lambda / 4.0) * Matrix4c::Identity());
}

/// |<a|b>|^2, insensitive to global phase.
inline double state_fidelity(const SourceState& a, const SourceState& b) {
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

/// <target| rho |target>.
inline double state_fidelity(const DensityMatrix& rho,
                             const SourceState& target) {
  const Amplitudes& t = target.amplitudes();
  return std::clamp((t.adjoint() * rho.matrix() * t)(0, 0).real(), 0.0, 1.0);
}

}  // namespace twinfringe
