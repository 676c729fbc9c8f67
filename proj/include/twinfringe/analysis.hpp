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

// Visibilities, predictability, distinguishability and entanglement, plus
// the complementarity report that ties them together.
//
// Three routes compute the visibilities:
//   * closed form: real amplitudes only, direct amplitude polynomials;
//   * matrix: exact fringe contrast from the density matrix. The single
//     fringe p(up_i) = 1/2 (1 + n(phi) . r_i) traces the xy-plane, so
//     V_i = |r_i,xy| = 2 |rho_i(0,1)|. The corrected joint probability is
//     1/4 (1 + n1^T K n2) with K the connected correlation tensor
//     <s_j s_k> - <s_j><s_k>, so V12 is the largest singular value of its
//     xy block;
//   * scan: sampled fringes and (max - min) / (max + min).

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "twinfringe/interferometer.hpp"
#include "twinfringe/qstate.hpp"

namespace twinfringe {

enum class ScanAxis { phi1, phi2, both_locked };

inline const char* to_string(ScanAxis axis) {
  switch (axis) {
    case ScanAxis::phi1: return "phi1";
    case ScanAxis::phi2: return "phi2";
    case ScanAxis::both_locked: return "both";
  }
  return "?";
}

struct ScanSample {
  double phase = 0.0;
  ProbabilityTable table;
};

/// An ordered fringe sweep: at least 8 samples, strictly increasing phases
/// spanning at least one period minus a grid step.
class FringeScan {
 public:
  FringeScan(ScanAxis axis, double fixed_phase, std::vector<ScanSample> samples)
      : axis_(axis), fixed_phase_(fixed_phase), samples_(std::move(samples)) {
    if (samples_.size() < 8) {
      throw Error(ErrorCode::invalid_scan, "a fringe scan needs >= 8 samples");
    }
    double max_step = 0.0;
    for (std::size_t k = 1; k < samples_.size(); ++k) {
      const double d = samples_[k].phase - samples_[k - 1].phase;
      if (!(d > 0.0)) {
        throw Error(ErrorCode::invalid_scan,
                    "scan phases must be strictly increasing");
      }
      max_step = std::max(max_step, d);
    }
    const double span = samples_.back().phase - samples_.front().phase;
    if (span < kTwoPi - max_step - 1e-12) {
      throw Error(ErrorCode::invalid_scan,
                  "scan must span a full period minus one grid step");
    }
  }

  ScanAxis axis() const noexcept { return axis_; }
  double fixed_phase() const noexcept { return fixed_phase_; }
  const std::vector<ScanSample>& samples() const noexcept { return samples_; }

  PhasePair phases_at(std::size_t k) const {
    return phases_for(axis_, samples_[k].phase, fixed_phase_);
  }

  static PhasePair phases_for(ScanAxis axis, double phase, double fixed) {
    switch (axis) {
      case ScanAxis::phi1: return {phase, fixed};
      case ScanAxis::phi2: return {fixed, phase};
      case ScanAxis::both_locked: return {phase, phase};
    }
    return {};
  }

 private:
  ScanAxis axis_;
  double fixed_phase_;
  std::vector<ScanSample> samples_;
};

/// Sweeps the chosen phase over [0, 2pi] inclusive with `points` samples.
inline FringeScan scan_fringe(const DensityMatrix& rho, ScanAxis axis,
                              double fixed_phase, int points) {
  if (points < 8) {
    throw Error(ErrorCode::invalid_scan, "a fringe scan needs >= 8 points");
  }
  const double step = kTwoPi / (points - 1);
  std::vector<ScanSample> samples;
  samples.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double phase = (k == points - 1) ? kTwoPi : k * step;
    samples.push_back(
        {phase, detect(rho, FringeScan::phases_for(axis, phase, fixed_phase))});
  }
  return FringeScan(axis, fixed_phase, std::move(samples));
}

inline FringeScan scan_fringe(const SourceState& state, ScanAxis axis,
                              double fixed_phase, int points) {
  return scan_fringe(to_density(state), axis, fixed_phase, points);
}

/// Which probability a visibility is read from.
struct Channel {
  enum class Kind { single, corrected_joint };
  Kind kind = Kind::single;
  QubitId particle = QubitId::particle1;
  Spin first = Spin::up;
  Spin second = Spin::up;

  static Channel single(QubitId q) {
    return {Kind::single, q, Spin::up, Spin::up};
  }
  static Channel corrected_joint(Spin x = Spin::up, Spin y = Spin::up) {
    return {Kind::corrected_joint, QubitId::particle1, x, y};
  }
};

/// (max - min) / (max + min).
inline double fringe_contrast(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::undefined_visibility, "no samples");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double sum = *hi + *lo;
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::undefined_visibility,
                "max + min vanishes for this channel");
  }
  return (*hi - *lo) / sum;
}

inline double visibility_from_scan(const FringeScan& scan, Channel channel) {
  if (channel.kind == Channel::Kind::corrected_joint &&
      scan.axis() == ScanAxis::both_locked) {
    throw Error(ErrorCode::invalid_scan,
                "corrected-joint visibility needs one phase swept and the "
                "other held fixed");
  }
  std::vector<double> values;
  values.reserve(scan.samples().size());
  for (const auto& s : scan.samples()) {
    values.push_back(channel.kind == Channel::Kind::single
                         ? s.table.p_single(channel.particle, Spin::up)
                         : s.table.p_corrected(channel.first, channel.second));
  }
  return fringe_contrast(values);
}

// --- closed forms (real amplitudes) -------------------------------------

inline double visibility_single_analytic(const SourceState& state,
                                         QubitId particle) {
  const auto g = detail::require_real(state, "visibility_single_analytic");
  return particle == QubitId::particle1
             ? std::abs(2.0 * (g[0] * g[2] + g[1] * g[3]))
             : std::abs(2.0 * (g[0] * g[1] + g[2] * g[3]));
}

inline double visibility_joint_analytic(const SourceState& state) {
  const auto g = detail::require_real(state, "visibility_joint_analytic");
  return std::abs(2.0 * (g[0] * g[3] - g[1] * g[2]));
}

// --- matrix route ---------------------------------------------------------

namespace detail {
inline const std::array<Matrix2c, 3>& pauli() {
  static const std::array<Matrix2c, 3> p = [] {
    Matrix2c x, y, z;
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;
    return std::array<Matrix2c, 3>{x, y, z};
  }();
  return p;
}

inline double expectation(const DensityMatrix& rho, const Matrix4c& op) {
  return (rho.matrix() * op).trace().real();
}
}  // namespace detail

inline double visibility_single_matrix(const DensityMatrix& rho,
                                       QubitId particle) {
  return 2.0 * std::abs(partial_trace(rho, particle)(0, 1));
}

/// xy block of <s_j (x) s_k> - <s_j><s_k>.
inline Eigen::Matrix2d connected_correlation_xy(const DensityMatrix& rho) {
  const auto& p = detail::pauli();
  const Matrix2c id = Matrix2c::Identity();
  Eigen::Matrix2d k;
  for (int j = 0; j < 2; ++j) {
    const double r1 = detail::expectation(rho, kron(p[j], id));
    for (int l = 0; l < 2; ++l) {
      const double r2 = detail::expectation(rho, kron(id, p[l]));
      k(j, l) = detail::expectation(rho, kron(p[j], p[l])) - r1 * r2;
    }
  }
  return k;
}

inline double visibility_joint_matrix(const DensityMatrix& rho) {
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(connected_correlation_xy(rho));
  return svd.singularValues()(0);
}

// --- which-way quantities -------------------------------------------------

inline double predictability(const DensityMatrix& rho, QubitId particle) {
  const Matrix2c r = partial_trace(rho, particle);
  return std::abs(r(0, 0).real() - r(1, 1).real());
}

/// |w_up - w_down| from the path weights |gamma_k|^2.
inline double predictability(const SourceState& state, QubitId particle) {
  const auto& g = state.amplitudes();
  const double w = particle == QubitId::particle1
                       ? std::norm(g(0)) + std::norm(g(1)) - std::norm(g(2)) -
                             std::norm(g(3))
                       : std::norm(g(0)) + std::norm(g(2)) - std::norm(g(1)) -
                             std::norm(g(3));
  return std::abs(w);
}

inline double distinguishability(const SourceState& state, QubitId particle) {
  const double v = visibility_single_analytic(state, particle);
  return std::sqrt(std::max(0.0, 1.0 - v * v));
}

inline double entanglement_closed_form(double v12) {
  constexpr double slack = 1e-9;
  if (!(v12 >= -slack && v12 <= 1.0 + slack)) {
    throw Error(ErrorCode::parameter,
                "two-particle visibility must lie in [0, 1], got " +
                    std::to_string(v12));
  }
  const double v = std::clamp(v12, 0.0, 1.0);
  const double root = std::sqrt(std::max(0.0, 1.0 - v * v));
  double e = 0.0;
  for (double lambda : {(1.0 - root) / 2.0, (1.0 + root) / 2.0}) {
    if (lambda > 0.0) e -= lambda * std::log2(lambda);
  }
  return std::clamp(e, 0.0, 1.0);
}

/// Entropy of particle 1's marginal (the entanglement for pure states).
inline double entanglement_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(partial_trace(rho, QubitId::particle1));
}

// --- report ---------------------------------------------------------------

enum class ReportRoute { closed_form, matrix };

struct ComplementarityReport {
  double V1 = 0, V2 = 0, V12 = 0;
  double P1 = 0, P2 = 0;
  double D1 = 0, D2 = 0;
  double E = 0;
  double residual_triality_1 = 0, residual_triality_2 = 0;
  double residual_duality_1 = 0, residual_duality_2 = 0;
  ReportRoute route = ReportRoute::closed_form;
  double purity = 1.0;
  // False for mixed input, where the pure-state identities are not claimed.
  bool pure_identities_applicable = true;

  double V(QubitId q) const { return q == QubitId::particle1 ? V1 : V2; }
  double P(QubitId q) const { return q == QubitId::particle1 ? P1 : P2; }
  double D(QubitId q) const { return q == QubitId::particle1 ? D1 : D2; }

  void fill_residuals() {
    residual_triality_1 = V1 * V1 + V12 * V12 + P1 * P1 - 1.0;
    residual_triality_2 = V2 * V2 + V12 * V12 + P2 * P2 - 1.0;
    residual_duality_1 = V1 * V1 + D1 * D1 - 1.0;
    residual_duality_2 = V2 * V2 + D2 * D2 - 1.0;
  }
};

/// Matrix route; valid for any density matrix.
inline ComplementarityReport complementarity_report(const DensityMatrix& rho) {
  ComplementarityReport r;
  r.route = ReportRoute::matrix;
  r.V1 = visibility_single_matrix(rho, QubitId::particle1);
  r.V2 = visibility_single_matrix(rho, QubitId::particle2);
  r.V12 = visibility_joint_matrix(rho);
  r.P1 = predictability(rho, QubitId::particle1);
  r.P2 = predictability(rho, QubitId::particle2);
  r.D1 = std::sqrt(std::max(0.0, 1.0 - r.V1 * r.V1));
  r.D2 = std::sqrt(std::max(0.0, 1.0 - r.V2 * r.V2));
  r.E = entanglement_entropy(rho);
  r.purity = rho.purity();
  r.pure_identities_applicable = r.purity >= 1.0 - 1e-9;
  r.fill_residuals();
  return r;
}

/// Closed form for real amplitudes, matrix route otherwise.
inline ComplementarityReport complementarity_report(const SourceState& state) {
  if (!state.is_real()) return complementarity_report(to_density(state));
  ComplementarityReport r;
  r.route = ReportRoute::closed_form;
  r.V1 = visibility_single_analytic(state, QubitId::particle1);
  r.V2 = visibility_single_analytic(state, QubitId::particle2);
  r.V12 = visibility_joint_analytic(state);
  r.P1 = predictability(state, QubitId::particle1);
  r.P2 = predictability(state, QubitId::particle2);
  r.D1 = distinguishability(state, QubitId::particle1);
  r.D2 = distinguishability(state, QubitId::particle2);
  r.E = entanglement_closed_form(r.V12);
  r.fill_residuals();
  return r;
}

/// Scan-extracted visibilities using the fixed-phase protocol: sweep phi1
/// with phi2 held at `fixed_phase` (V1 and V12), then the interchanged
/// sweep (V2 and a second V12 estimate).
struct ScanVisibilities {
  double V1 = 0, V2 = 0, V12 = 0;
  double V12_interchanged = 0;
};

inline ScanVisibilities scan_visibilities(const DensityMatrix& rho, int points,
                                          double fixed_phase = kPi / 2.0) {
  const FringeScan first = scan_fringe(rho, ScanAxis::phi1, fixed_phase, points);
  const FringeScan second =
      scan_fringe(rho, ScanAxis::phi2, fixed_phase, points);
  ScanVisibilities v;
  v.V1 = visibility_from_scan(first, Channel::single(QubitId::particle1));
  v.V12 = visibility_from_scan(first, Channel::corrected_joint());
  v.V2 = visibility_from_scan(second, Channel::single(QubitId::particle2));
  v.V12_interchanged = visibility_from_scan(second, Channel::corrected_joint());
  return v;
}

// --- named states ---------------------------------------------------------

/// (|uu> + |dd>) / sqrt2.
inline SourceState psi_state() {
  const double s = 1.0 / std::sqrt(2.0);
  return make_source(s, 0.0, 0.0, s);
}

/// Product of (|u> + |d>)/sqrt2 on both particles.
inline SourceState phi_state() { return make_source(0.5, 0.5, 0.5, 0.5); }

inline SourceState upup_state() { return make_source(1.0, 0.0, 0.0, 0.0); }

/// (cos a, sin a, sin a, cos a) / sqrt2.
inline SourceState family_psi_alpha(double alpha) {
  const double s = 1.0 / std::sqrt(2.0);
  const double c = std::cos(alpha) * s;
  const double n = std::sin(alpha) * s;
  return make_source(c, n, n, c);
}

/// (cos a, sin a, cos b, sin b) / sqrt2.
inline SourceState family_asymmetric(double alpha, double beta) {
  const double s = 1.0 / std::sqrt(2.0);
  return make_source(std::cos(alpha) * s, std::sin(alpha) * s,
                     std::cos(beta) * s, std::sin(beta) * s);
}

}  // namespace twinfringe
