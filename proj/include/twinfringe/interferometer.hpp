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

// Phase shifter + symmetric beam splitter analyzers and detection
// probabilities. Two independent routes are provided: matrix evolution
// (detect) and the real-amplitude closed forms. The matrix route is the
// authority for general input.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "twinfringe/qstate.hpp"

namespace twinfringe {

struct PhasePair {
  double phi1 = 0.0;
  double phi2 = 0.0;

  PhasePair canonical() const;
  friend bool operator==(const PhasePair&, const PhasePair&) = default;
};

/// Maps a phase into [0, 2pi).
inline double canonical_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

inline PhasePair PhasePair::canonical() const {
  return {canonical_phase(phi1), canonical_phase(phi2)};
}

/// (1/sqrt2) [[1, e^{i phi}], [-e^{-i phi}, 1]].
inline Matrix2c analyzer_unitary(double phi) {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix2c u;
  u << Complex(s, 0.0), s * std::polar(1.0, phi),
      -s * std::polar(1.0, -phi), Complex(s, 0.0);
  return u;
}

inline Matrix4c joint_unitary(const PhasePair& phases) {
  return kron(analyzer_unitary(phases.phi1), analyzer_unitary(phases.phi2));
}

/// Single, joint and corrected-joint detection probabilities at one phase
/// setting. Singles are ordered (up1, down1, up2, down2); joint and
/// corrected follow the basis ordering (uu, ud, du, dd).
struct ProbabilityTable {
  std::array<double, 4> single{};
  std::array<double, 4> joint{};
  std::array<double, 4> corrected{};

  double p_single(QubitId q, Spin s) const {
    return single[(q == QubitId::particle1 ? 0 : 2) + static_cast<int>(s)];
  }
  double p_joint(Spin x, Spin y) const { return joint[basis_index(x, y)]; }
  double p_corrected(Spin x, Spin y) const {
    return corrected[basis_index(x, y)];
  }

  /// Builds the table from the four joint probabilities: marginals and
  /// p(xy) - p(x)p(y) + 1/4 for every outcome pair.
  static ProbabilityTable from_joint(const std::array<double, 4>& joint) {
    ProbabilityTable t;
    t.joint = joint;
    t.single[0] = joint[0] + joint[1];
    t.single[1] = joint[2] + joint[3];
    t.single[2] = joint[0] + joint[2];
    t.single[3] = joint[1] + joint[3];
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        const int k = 2 * x + y;
        t.corrected[k] = joint[k] - t.single[x] * t.single[2 + y] + 0.25;
      }
    }
    return t;
  }
};

inline ProbabilityTable detect(const SourceState& state,
                               const PhasePair& phases) {
  const Amplitudes out = joint_unitary(phases) * state.amplitudes();
  std::array<double, 4> joint{};
  for (int k = 0; k < 4; ++k) joint[k] = std::norm(out(k));
  return ProbabilityTable::from_joint(joint);
}

inline ProbabilityTable detect(const DensityMatrix& rho,
                               const PhasePair& phases) {
  const Matrix4c u = joint_unitary(phases);
  const Matrix4c out = u * rho.matrix() * u.adjoint();
  std::array<double, 4> joint{};
  for (int k = 0; k < 4; ++k) joint[k] = std::max(0.0, out(k, k).real());
  return ProbabilityTable::from_joint(joint);
}

namespace detail {
inline std::array<double, 4> require_real(const SourceState& state,
                                          const char* op) {
  if (!state.is_real()) {
    throw Error(ErrorCode::unsupported_closed_form,
                std::string(op) +
                    " assumes real amplitudes; use the matrix route");
  }
  return state.real_amplitudes();
}
}  // namespace detail

/// Real-amplitude single-detection probabilities, (up1, down1, up2, down2).
inline std::array<double, 4> closed_form_singles(const SourceState& state,
                                                 const PhasePair& phases) {
  const auto g = detail::require_real(state, "closed_form_singles");
  const double a1 = 2.0 * (g[0] * g[2] + g[1] * g[3]);
  const double a2 = 2.0 * (g[0] * g[1] + g[2] * g[3]);
  const double c1 = a1 * std::cos(phases.phi1);
  const double c2 = a2 * std::cos(phases.phi2);
  return {0.5 * (1.0 + c1), 0.5 * (1.0 - c1), 0.5 * (1.0 + c2),
          0.5 * (1.0 - c2)};
}

/// Cosine-cosine (M) and sine-sine (N) modulation amplitudes of the
/// corrected joint probability. |N| >= |M| for every normalized state.
struct InterferenceCoefficients {
  double M = 0.0;
  double N = 0.0;
};

inline InterferenceCoefficients interference_coefficients(
    const SourceState& state) {
  const auto g = detail::require_real(state, "interference_coefficients");
  InterferenceCoefficients c;
  c.N = 2.0 * (g[0] * g[3] - g[1] * g[2]);
  c.M = 2.0 * (g[0] * g[3] + g[1] * g[2]) -
        4.0 * (g[0] * g[2] + g[1] * g[3]) * (g[0] * g[1] + g[2] * g[3]);
  return c;
}

/// Real-amplitude corrected joint probability for the (up, up) outcome.
inline double closed_form_corrected_joint(const SourceState& state,
                                          const PhasePair& phases) {
  const auto [m, n] = interference_coefficients(state);
  return 0.25 * (1.0 + m * std::cos(phases.phi1) * std::cos(phases.phi2) -
                 n * std::sin(phases.phi1) * std::sin(phases.phi2));
}

struct CorrectedExtrema {
  double max_value = 0.0;
  double min_value = 0.0;
  std::vector<PhasePair> argmax;
  std::vector<PhasePair> argmin;
};

/// Evaluates p-bar(uu) by matrix evolution on an n x n grid over
/// [0, 2pi)^2 and returns every grid point within `tol` of the extreme
/// values. Degenerate states (e.g. N = 0) yield large sets.
inline CorrectedExtrema corrected_joint_extrema(const SourceState& state,
                                                int grid_points,
                                                double tol = 1e-12) {
  if (grid_points < 4) {
    throw Error(ErrorCode::parameter, "extremum grid needs >= 4 points");
  }
  const double step = kTwoPi / grid_points;
  std::vector<double> values(static_cast<std::size_t>(grid_points) *
                             grid_points);
  CorrectedExtrema ex;
  ex.max_value = -1.0;
  ex.min_value = 2.0;
  for (int i = 0; i < grid_points; ++i) {
    for (int j = 0; j < grid_points; ++j) {
      const double v = detect(state, {i * step, j * step}).corrected[0];
      values[static_cast<std::size_t>(i) * grid_points + j] = v;
      ex.max_value = std::max(ex.max_value, v);
      ex.min_value = std::min(ex.min_value, v);
    }
  }
  for (int i = 0; i < grid_points; ++i) {
    for (int j = 0; j < grid_points; ++j) {
      const double v = values[static_cast<std::size_t>(i) * grid_points + j];
      if (v >= ex.max_value - tol) ex.argmax.push_back({i * step, j * step});
      if (v <= ex.min_value + tol) ex.argmin.push_back({i * step, j * step});
    }
  }
  return ex;
}

/// True when both phases sit on n*pi + pi/2 within `tol`.
inline bool on_half_pi_lattice(const PhasePair& phases, double tol = 1e-9) {
  auto on = [tol](double phi) {
    const double r = std::remainder(phi - kPi / 2.0, kPi);
    return std::abs(r) <= tol;
  };
  return on(phases.phi1) && on(phases.phi2);
}

}  // namespace twinfringe
