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


#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace {

using namespace twinfringe;
using tf_test::to_vec;

constexpr double kH064 = 0.9426831892554922;

double grid_tol(int points) {
  const double step = kTwoPi / (points - 1);
  return 2.0 * step * step;
}

TEST(FringeScan, RejectsBadInput) {
  const ProbabilityTable t = detect(psi_state(), {0, 0});
  std::vector<ScanSample> few(7, {0.0, t});
  EXPECT_THROW(FringeScan(ScanAxis::phi1, 0.0, few), Error);

  std::vector<ScanSample> flat;
  for (int k = 0; k < 10; ++k) flat.push_back({k < 5 ? 0.1 * k : 0.4, t});
  EXPECT_THROW(FringeScan(ScanAxis::phi1, 0.0, flat), Error);

  std::vector<ScanSample> narrow;
  for (int k = 0; k < 10; ++k) narrow.push_back({0.1 * k, t});
  try {
    FringeScan(ScanAxis::phi1, 0.0, narrow);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_scan);
  }
  EXPECT_THROW(scan_fringe(psi_state(), ScanAxis::phi1, 0.0, 7), Error);
}

TEST(FringeScan, OpenPeriodGridIsAccepted) {
  std::vector<ScanSample> s;
  for (int k = 0; k < 16; ++k) {
    const double phi = kTwoPi * k / 16;
    s.push_back({phi, detect(phi_state(), {phi, 0.0})});
  }
  EXPECT_NO_THROW(FringeScan(ScanAxis::phi1, 0.0, s));
}

TEST(FringeContrast, Errors) {
  const std::vector<double> zeros(8, 0.0);
  try {
    fringe_contrast(zeros);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::undefined_visibility);
  }
  EXPECT_THROW(fringe_contrast(std::vector<double>{}), Error);
  EXPECT_NEAR(fringe_contrast(std::vector<double>{0.25, 0.75}), 0.5, 1e-15);
}

TEST(VisibilityFromScan, NamedStates) {
  const FringeScan phi = scan_fringe(phi_state(), ScanAxis::phi1, kPi / 2, 33);
  EXPECT_NEAR(visibility_from_scan(phi, Channel::single(QubitId::particle1)), 1.0, 1.0 / 33);

  const FringeScan psi = scan_fringe(psi_state(), ScanAxis::phi1, kPi / 2, 33);
  EXPECT_NEAR(visibility_from_scan(psi, Channel::single(QubitId::particle1)), 0.0, 1e-10);
  EXPECT_NEAR(visibility_from_scan(psi, Channel::corrected_joint()), 1.0, grid_tol(33));
  // The other three corrected channels carry the same contrast.
  for (Spin x : {Spin::up, Spin::down})
    for (Spin y : {Spin::up, Spin::down})
      EXPECT_NEAR(visibility_from_scan(psi, Channel::corrected_joint(x, y)), 1.0,
                  grid_tol(33));
}

TEST(VisibilityFromScan, LockedScanRefusesCorrectedJoint) {
  const FringeScan locked = scan_fringe(psi_state(), ScanAxis::both_locked, 0.0, 33);
  EXPECT_THROW(visibility_from_scan(locked, Channel::corrected_joint()), Error);
  EXPECT_NO_THROW(visibility_from_scan(locked, Channel::single(QubitId::particle2)));
}

TEST(Analytic, Visibilities) {
  EXPECT_NEAR(visibility_single_analytic(psi_state(), QubitId::particle1), 0.0, 1e-15);
  EXPECT_NEAR(visibility_single_analytic(psi_state(), QubitId::particle2), 0.0, 1e-15);
  EXPECT_NEAR(visibility_single_analytic(phi_state(), QubitId::particle1), 1.0, 1e-15);
  EXPECT_NEAR(visibility_single_analytic(phi_state(), QubitId::particle2), 1.0, 1e-15);
  EXPECT_NEAR(visibility_single_analytic(family_psi_alpha(kPi / 3), QubitId::particle1),
              std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(visibility_joint_analytic(psi_state()), 1.0, 1e-15);
  EXPECT_NEAR(visibility_joint_analytic(phi_state()), 0.0, 1e-15);
  EXPECT_NEAR(visibility_joint_analytic(make_source(0.8, 0, 0, 0.6)), 0.96, 1e-15);
  EXPECT_NEAR(visibility_joint_analytic(family_psi_alpha(kPi / 3)), 0.5, 1e-15);
}

TEST(Predictability, Examples) {
  EXPECT_NEAR(predictability(psi_state(), QubitId::particle1), 0.0, 1e-15);
  EXPECT_NEAR(predictability(psi_state(), QubitId::particle2), 0.0, 1e-15);
  const SourceState s = make_source(0.8, 0, 0, 0.6);
  EXPECT_NEAR(predictability(s, QubitId::particle1), 0.28, 1e-15);
  EXPECT_NEAR(predictability(s, QubitId::particle2), 0.28, 1e-15);
  for (double a : {0.2, 1.0, 2.2}) {
    for (double b : {-0.4, 0.9}) {
      const SourceState f = family_asymmetric(a, b);
      EXPECT_NEAR(predictability(f, QubitId::particle1), 0.0, 1e-15);
      EXPECT_NEAR(predictability(f, QubitId::particle2),
                  std::abs(std::cos(a + b) * std::cos(a - b)), 1e-15);
      EXPECT_NEAR(predictability(to_density(f), QubitId::particle2),
                  predictability(f, QubitId::particle2), 1e-15);
    }
  }
}

TEST(Distinguishability, Examples) {
  EXPECT_NEAR(distinguishability(phi_state(), QubitId::particle1), 0.0, 1e-7);
  EXPECT_NEAR(distinguishability(psi_state(), QubitId::particle1), 1.0, 1e-15);
  const SourceState s = make_source(0.8, 0, 0, 0.6);
  EXPECT_NEAR(distinguishability(s, QubitId::particle1), 1.0, 1e-15);
  EXPECT_NEAR(std::hypot(0.28, 0.96), 1.0, 1e-15);
}

TEST(Entanglement, ClosedForm) {
  EXPECT_EQ(entanglement_closed_form(0.0), 0.0);
  EXPECT_NEAR(entanglement_closed_form(1.0), 1.0, 1e-15);
  EXPECT_NEAR(entanglement_closed_form(0.96), kH064, 1e-12);
  EXPECT_NEAR(entanglement_closed_form(0.96), 0.94268, 1e-5);
  const SourceState s = make_source(0.8, 0, 0, 0.6);
  EXPECT_NEAR(entanglement_closed_form(0.96), entanglement_entropy(to_density(s)), 1e-12);
  EXPECT_NO_THROW(entanglement_closed_form(1.0 + 5e-10));
  EXPECT_THROW(entanglement_closed_form(1.0 + 1e-8), Error);
  EXPECT_THROW(entanglement_closed_form(-1e-8), Error);
}

TEST(EntanglementProperty, StrictlyIncreasing) {
  double prev = entanglement_closed_form(0.0);
  for (int k = 1; k <= 1000; ++k) {
    const double e = entanglement_closed_form(k / 1000.0);
    ASSERT_GT(e, prev) << k;
    prev = e;
  }
}

TEST(EntanglementProperty, MatchesEntropyOracleOnRealStates) {
  StateSampler sampler(41, true);
  for (int i = 0; i < 10000; ++i) {
    const SourceState s = sampler.next_state();
    const double want = oracle::entropy(oracle::reduce(oracle::outer(to_vec(s)), 0));
    ASSERT_NEAR(entanglement_closed_form(visibility_joint_analytic(s)), want, 1e-9);
  }
}

TEST(Report, Bell) {
  const ComplementarityReport r = complementarity_report(psi_state());
  EXPECT_EQ(r.route, ReportRoute::closed_form);
  EXPECT_NEAR(r.V1, 0, 1e-15);
  EXPECT_NEAR(r.V2, 0, 1e-15);
  EXPECT_NEAR(r.V12, 1, 1e-15);
  EXPECT_NEAR(r.P1, 0, 1e-15);
  EXPECT_NEAR(r.P2, 0, 1e-15);
  EXPECT_NEAR(r.E, 1, 1e-15);
  EXPECT_NEAR(r.residual_triality_1, 0, 1e-15);
  EXPECT_NEAR(r.residual_duality_2, 0, 1e-15);
}

TEST(Report, PartiallyEntangled) {
  const ComplementarityReport r = complementarity_report(make_source(0.8, 0, 0, 0.6));
  EXPECT_NEAR(r.V1, 0, 1e-15);
  EXPECT_NEAR(r.V2, 0, 1e-15);
  EXPECT_NEAR(r.V12, 0.96, 1e-15);
  EXPECT_NEAR(r.P1, 0.28, 1e-15);
  EXPECT_NEAR(r.P2, 0.28, 1e-15);
  EXPECT_NEAR(r.E, 0.94268, 1e-5);
  EXPECT_NEAR(r.residual_triality_1, 0, 1e-10);
  EXPECT_NEAR(r.residual_triality_2, 0, 1e-10);
}

TEST(Report, AsymmetricFamily) {
  const ComplementarityReport r =
      complementarity_report(family_asymmetric(kPi / 3, kPi / 6));
  EXPECT_NEAR(r.V1, std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(r.V2, std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(r.V12, 0.5, 1e-15);
  EXPECT_NEAR(r.P2, 0.0, 1e-15);
  EXPECT_NEAR(r.residual_triality_1, 0, 1e-10);
  EXPECT_NEAR(r.residual_triality_2, 0, 1e-10);
}

TEST(Family, Shapes) {
  EXPECT_NEAR(state_fidelity(family_psi_alpha(0.0), psi_state()), 1.0, 1e-15);
  const SourceState q = family_psi_alpha(kPi / 4);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(q[k].real(), 0.5, 1e-15);
  const SourceState a = family_asymmetric(0.0, 0.0);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(a[0].real(), s, 1e-15);
  EXPECT_NEAR(a[2].real(), s, 1e-15);
  EXPECT_NEAR(visibility_single_analytic(a, QubitId::particle1), 1.0, 1e-15);
  EXPECT_NEAR(visibility_joint_analytic(a), 0.0, 1e-15);
  // a - b = pi/2 reproduces the symmetric family up to relabeling.
  for (double alpha : {0.3, 1.2}) {
    const ComplementarityReport x = complementarity_report(family_asymmetric(alpha + kPi / 2, alpha));
    EXPECT_NEAR(x.V1, 0.0, 1e-15);
    EXPECT_NEAR(x.P2, 0.0, 1e-15);
  }
}

TEST(ReportProperty, RealStatesSatisfyIdentities) {
  StateSampler sampler(43, true);
  for (int i = 0; i < 100000; ++i) {
    const SourceState s = sampler.next_state();
    const ComplementarityReport r = complementarity_report(s);
    ASSERT_NEAR(r.residual_triality_1, 0.0, 1e-10);
    ASSERT_NEAR(r.residual_triality_2, 0.0, 1e-10);
    ASSERT_NEAR(r.residual_duality_1, 0.0, 1e-10);
    ASSERT_NEAR(r.D1 * r.D1, r.P1 * r.P1 + r.V12 * r.V12, 1e-10);
    ASSERT_NEAR(r.D2 * r.D2, r.P2 * r.P2 + r.V12 * r.V12, 1e-10);
    ASSERT_LE(r.V1 * r.V1 + r.V12 * r.V12, 1.0 + 1e-12);
    ASSERT_LE(r.P1, r.D1 + 1e-12);
    ASSERT_LE(r.P2, r.D2 + 1e-12);
  }
}

TEST(ReportProperty, ClosedFormAndMatrixRoutesAgreeOnRealStates) {
  StateSampler sampler(47, true);
  for (int i = 0; i < 5000; ++i) {
    const SourceState s = sampler.next_state();
    const ComplementarityReport c = complementarity_report(s);
    const ComplementarityReport m = complementarity_report(to_density(s));
    ASSERT_EQ(m.route, ReportRoute::matrix);
    ASSERT_NEAR(c.V1, m.V1, 1e-12);
    ASSERT_NEAR(c.V2, m.V2, 1e-12);
    ASSERT_NEAR(c.V12, m.V12, 1e-12);
    ASSERT_NEAR(c.E, m.E, 1e-9);
  }
}

// The exact joint visibility is the best corrected-joint contrast over all
// partner phases; check it against a brute-force 2-D sweep.
TEST(MatrixRouteProperty, JointVisibilityIsBestFringeContrast) {
  StateSampler sampler(53, false);
  for (int i = 0; i < 40; ++i) {
    const SourceState s = sampler.next_state();
    const double dense = oracle::joint_visibility_2d(to_vec(s), 256);
    EXPECT_NEAR(visibility_joint_matrix(to_density(s)), dense, 2e-3);
    EXPECT_LE(dense, visibility_joint_matrix(to_density(s)) + 1e-12);
    EXPECT_NEAR(visibility_single_matrix(to_density(s), QubitId::particle1),
                oracle::visibility1_dense(to_vec(s), 0.0, 1024), 1e-4);
  }
}

// Pure-state Bloch-length identity: V_i^2 + P_i^2 = 1 - C^2 with the
// concurrence C = 2|g1 g4 - g2 g3|. It holds for every state; the fringe
// visibility V12 coincides with C only for real amplitudes.
TEST(MatrixRouteProperty, BlochLengthIdentityForComplexStates) {
  StateSampler sampler(59, false);
  double worst_gap = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const SourceState s = sampler.next_state();
    const ComplementarityReport r = complementarity_report(to_density(s));
    const double c = oracle::concurrence(to_vec(s));
    ASSERT_NEAR(r.V1 * r.V1 + r.P1 * r.P1 + c * c, 1.0, 1e-10);
    ASSERT_NEAR(r.V2 * r.V2 + r.P2 * r.P2 + c * c, 1.0, 1e-10);
    ASSERT_LE(r.V12, c + 1e-12);
    worst_gap = std::max(worst_gap, c - r.V12);
  }
  EXPECT_GT(worst_gap, 0.1);
}

// Local phase patterns (0, a, b, a + b) are local z-rotations and leave every
// visibility unchanged. A generic phase pattern does not.
TEST(PhaseProperty, LocalPhasePatternsPreserveVisibilities) {
  StateSampler sampler(61, false);
  for (int i = 0; i < 200; ++i) {
    const SourceState s = sampler.next_state();
    const double a = sampler.uniform(0, kTwoPi), b = sampler.uniform(0, kTwoPi);
    const SourceState t = s.with_phases({0.0, b, a, a + b});
    const ScanVisibilities vs = scan_visibilities(to_density(s), 257);
    const ScanVisibilities vt = scan_visibilities(to_density(t), 257);
    const ComplementarityReport rs = complementarity_report(to_density(s));
    const ComplementarityReport rt = complementarity_report(to_density(t));
    ASSERT_NEAR(rs.V1, rt.V1, 1e-12);
    ASSERT_NEAR(rs.V2, rt.V2, 1e-12);
    ASSERT_NEAR(rs.V12, rt.V12, 1e-12);
    ASSERT_NEAR(vs.V1, vt.V1, grid_tol(257));
    ASSERT_NEAR(vs.V2, vt.V2, grid_tol(257));
  }
}

TEST(PhaseProperty, GenericPhasePatternChangesVisibilities) {
  const SourceState real = make_source(0.5, 0.5, 0.5, 0.5);
  const SourceState twisted = real.with_phases({0.0, 0.0, 0.0, kPi / 2});
  const ComplementarityReport a = complementarity_report(to_density(real));
  const ComplementarityReport b = complementarity_report(to_density(twisted));
  EXPECT_NEAR(a.V1, 1.0, 1e-15);
  EXPECT_NEAR(b.V1, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(b.V2, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(oracle::concurrence(tf_test::to_vec(twisted)), std::sqrt(0.5), 1e-15);
}

TEST(ScanVisibilities, MatchAnalyticWithinGridTolerance) {
  StateSampler sampler(67, true);
  for (int i = 0; i < 200; ++i) {
    const SourceState s = sampler.next_state();
    const ScanVisibilities v = scan_visibilities(to_density(s), 129);
    ASSERT_NEAR(v.V1, visibility_single_analytic(s, QubitId::particle1), grid_tol(129));
    ASSERT_NEAR(v.V2, visibility_single_analytic(s, QubitId::particle2), grid_tol(129));
    ASSERT_NEAR(v.V12, visibility_joint_analytic(s), grid_tol(129));
    ASSERT_NEAR(v.V12_interchanged, visibility_joint_analytic(s), grid_tol(129));
  }
}

TEST(MixedInput, DepolarizedBellReport) {
  const DensityMatrix rho = depolarize(to_density(psi_state()), 0.2);
  const ComplementarityReport r = complementarity_report(rho);
  EXPECT_FALSE(r.pure_identities_applicable);
  EXPECT_EQ(r.route, ReportRoute::matrix);
  EXPECT_NEAR(r.V12, 0.8, 1e-12);
  EXPECT_NEAR(r.V1, 0.0, 1e-15);
  EXPECT_NEAR(r.E, 1.0, 1e-12);
  EXPECT_TRUE(complementarity_report(to_density(psi_state())).pure_identities_applicable);
}

TEST(ReportProperty, ComplexStatesUseMatrixRoute) {
  const SourceState c = make_source(0.5, Complex(0, 0.5), 0.5, 0.5);
  EXPECT_EQ(complementarity_report(c).route, ReportRoute::matrix);
  EXPECT_THROW(visibility_single_analytic(c, QubitId::particle1), Error);
  EXPECT_THROW(distinguishability(c, QubitId::particle1), Error);
}

}  // namespace
