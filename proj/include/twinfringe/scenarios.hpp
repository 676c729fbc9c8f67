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

// Scenario runners behind the command-line tool. Each returns the CSV text
// (possibly empty), a human-readable summary and the metrics it was built
// from. Output depends only on the config, so equal configs give equal
// bytes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "twinfringe/analysis.hpp"
#include "twinfringe/interferometer.hpp"
#include "twinfringe/pulsedsl.hpp"
#include "twinfringe/qstate.hpp"
#include "twinfringe/sampling.hpp"

namespace twinfringe {

enum class Scenario {
  extreme_entangled,
  extreme_product,
  alpha_scan,
  fringe,
  verify,
  pulse_check,
  entanglement_curve,
};

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::extreme_entangled: return "extreme-entangled";
    case Scenario::extreme_product: return "extreme-product";
    case Scenario::alpha_scan: return "alpha-scan";
    case Scenario::fringe: return "fringe";
    case Scenario::verify: return "verify";
    case Scenario::pulse_check: return "pulse-check";
    case Scenario::entanglement_curve: return "entanglement-curve";
  }
  return "?";
}

inline int default_grid_points(Scenario s) {
  switch (s) {
    case Scenario::alpha_scan: return 256;
    case Scenario::entanglement_curve: return 101;
    default: return 33;  // pi/16 increments over [0, 2pi]
  }
}

struct ScenarioConfig {
  Scenario scenario = Scenario::extreme_entangled;
  int grid_points = 33;
  double alpha_start = kPi / 4.0;
  double alpha_stop = 21.0 * kPi / 16.0;
  double alpha_step = kPi / 16.0;
  double fixed_phase = kPi / 2.0;
  double noise_lambda = 0.0;
  std::uint64_t seed = 2004;
  std::string output_path;
  bool via_pulses = false;
  bool real_only = false;
  long samples = 100000;
  ScanAxis axis = ScanAxis::phi1;

  void validate() const {
    const int min_points = scenario == Scenario::entanglement_curve ? 2 : 8;
    if (grid_points < min_points) {
      throw Error(ErrorCode::parameter,
                  "grid_points must be >= " + std::to_string(min_points));
    }
    if (!(noise_lambda >= 0.0 && noise_lambda <= 1.0)) {
      throw Error(ErrorCode::parameter, "noise must lie in [0, 1]");
    }
    if (!std::isfinite(fixed_phase)) {
      throw Error(ErrorCode::parameter, "fixed phase must be finite");
    }
    if (scenario == Scenario::alpha_scan) {
      if (!(alpha_step > 0.0)) {
        throw Error(ErrorCode::parameter, "alpha step must be positive");
      }
      if (!(alpha_stop >= alpha_start)) {
        throw Error(ErrorCode::parameter, "alpha stop must be >= alpha start");
      }
    }
    if (scenario == Scenario::verify && samples < 1) {
      throw Error(ErrorCode::parameter, "verify needs at least one sample");
    }
  }
};

struct ScenarioOutput {
  std::string csv;
  std::string summary;
  std::vector<std::pair<std::string, double>> metrics;
  bool violation = false;
  std::size_t rows = 0;

  std::optional<double> metric(std::string_view key) const {
    for (const auto& [k, v] : metrics) {
      if (k == key) return v;
    }
    return std::nullopt;
  }
};

// --- formatting -------------------------------------------------------------

/// 12 significant digits; negative zero prints as 0.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

namespace detail {

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<const char*> header)
      : columns_(header.size()) {
    bool first = true;
    for (const char* h : header) {
      if (!first) out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }

  /// Empty optionals become empty cells.
  void row(const std::vector<std::optional<double>>& cells) {
    if (cells.size() != columns_) {
      throw Error(ErrorCode::parameter, "CSV row has the wrong column count");
    }
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out_ << ',';
      if (cells[k]) {
        if (!std::isfinite(*cells[k])) {
          throw Error(ErrorCode::parameter, "non-finite CSV value");
        }
        out_ << format_number(*cells[k]);
      }
    }
    out_ << '\n';
    ++rows_;
  }

  std::string str() const { return out_.str(); }
  std::size_t rows() const noexcept { return rows_; }

 private:
  std::ostringstream out_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

class SummaryBuilder {
 public:
  explicit SummaryBuilder(ScenarioOutput& out) : out_(out) {}

  void text(const std::string& key, const std::string& value) {
    lines_ << key << " = " << value << '\n';
  }
  void number(const std::string& key, double value) {
    out_.metrics.emplace_back(key, value);
    lines_ << key << " = " << format_number(value) << '\n';
  }
  void raw(const std::string& line) { lines_ << line << '\n'; }

  void finish() { out_.summary = lines_.str(); }

 private:
  ScenarioOutput& out_;
  std::ostringstream lines_;
};

inline CsvWriter fringe_writer() {
  return CsvWriter({"phi1", "phi2", "p_up1", "p_dn1", "p_up2", "p_dn2", "p_uu",
                    "p_ud", "p_du", "p_dd", "pbar_uu", "pbar_ud", "pbar_du",
                    "pbar_dd"});
}

inline void write_scan(CsvWriter& csv, const FringeScan& scan) {
  for (std::size_t k = 0; k < scan.samples().size(); ++k) {
    const PhasePair ph = scan.phases_at(k);
    const ProbabilityTable& t = scan.samples()[k].table;
    std::vector<std::optional<double>> cells{ph.phi1, ph.phi2};
    for (double v : t.single) cells.emplace_back(v);
    for (double v : t.joint) cells.emplace_back(v);
    for (double v : t.corrected) cells.emplace_back(v);
    csv.row(cells);
  }
}

inline DensityMatrix with_noise(const DensityMatrix& rho, double lambda) {
  return lambda > 0.0 ? depolarize(rho, lambda) : rho;
}

inline std::string describe_state(const SourceState& s) {
  std::string out = "(";
  for (int k = 0; k < 4; ++k) {
    if (k) out += ", ";
    out += format_number(s[k].real());
    if (s[k].imag() != 0.0) {
      out += (s[k].imag() < 0 ? "-" : "+") +
             format_number(std::abs(s[k].imag())) + "i";
    }
  }
  return out + ")";
}

}  // namespace detail

// --- named states -----------------------------------------------------------

/// Accepts psi, phi, upup, psi_alpha(<angle>), asym(<angle>,<angle>) and
/// gamma(<g1>,<g2>,<g3>,<g4>) with real expressions as arguments.
inline SourceState parse_named_state(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && detail::is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && detail::is_space(s.back())) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "psi") return psi_state();
  if (text == "phi") return phi_state();
  if (text == "upup") return upup_state();
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw Error(ErrorCode::parameter, "unknown state '" + std::string(text) + "'");
  }
  const std::string_view name = trim(text.substr(0, open));
  const std::string_view inner = text.substr(open + 1, text.size() - open - 2);
  std::vector<double> args;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= inner.size(); ++k) {
    if (k == inner.size() || (inner[k] == ',' && depth == 0)) {
      args.push_back(evaluate_angle(inner.substr(start, k - start)));
      start = k + 1;
    } else if (inner[k] == '(') {
      ++depth;
    } else if (inner[k] == ')') {
      --depth;
    }
  }
  if (name == "psi_alpha" && args.size() == 1) return family_psi_alpha(args[0]);
  if (name == "asym" && args.size() == 2) {
    return family_asymmetric(args[0], args[1]);
  }
  if (name == "gamma" && args.size() == 4) {
    return make_source(args[0], args[1], args[2], args[3]);
  }
  throw Error(ErrorCode::parameter, "unknown state '" + std::string(text) + "'");
}

/// Depolarizing strength that brings the exact two-particle visibility of
/// `rho` down to `target`, by bisection.
inline double noise_for_joint_visibility(const DensityMatrix& rho,
                                         double target) {
  const double v0 = visibility_joint_matrix(rho);
  if (!(target >= 0.0 && target <= v0 + 1e-12)) {
    throw Error(ErrorCode::parameter,
                "target visibility outside the reachable range");
  }
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (visibility_joint_matrix(depolarize(rho, mid)) > target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// --- scenarios --------------------------------------------------------------

enum class ExtremeCase { entangled, product };

/// Both phases swept together over [0, 2pi] (fringe data); summary
/// visibilities: singles from that sweep, V12 from the fixed-phase protocol.
inline ScenarioOutput run_extreme(ExtremeCase which, const ScenarioConfig& cfg) {
  cfg.validate();
  const SourceState state =
      which == ExtremeCase::entangled ? psi_state() : phi_state();
  const DensityMatrix rho = detail::with_noise(to_density(state), cfg.noise_lambda);
  const FringeScan locked =
      scan_fringe(rho, ScanAxis::both_locked, 0.0, cfg.grid_points);
  const ScanVisibilities fixed =
      scan_visibilities(rho, cfg.grid_points, cfg.fixed_phase);

  ScenarioOutput out;
  auto csv = detail::fringe_writer();
  detail::write_scan(csv, locked);
  out.csv = csv.str();
  out.rows = csv.rows();

  detail::SummaryBuilder s(out);
  s.text("scenario", which == ExtremeCase::entangled ? "extreme-entangled"
                                                     : "extreme-product");
  s.text("mode", cfg.noise_lambda > 0.0 ? "emulated" : "theory");
  s.number("points", cfg.grid_points);
  s.number("phase_step", kTwoPi / (cfg.grid_points - 1));
  s.number("noise", cfg.noise_lambda);
  s.number("V1", visibility_from_scan(locked, Channel::single(QubitId::particle1)));
  s.number("V2", visibility_from_scan(locked, Channel::single(QubitId::particle2)));
  s.number("V12", fixed.V12);
  s.number("V12_interchanged", fixed.V12_interchanged);
  {
    std::vector<double> pbar;
    for (const auto& smp : locked.samples()) pbar.push_back(smp.table.corrected[0]);
    s.number("V12_locked", fringe_contrast(pbar));
  }
  s.number("fixed_phase", cfg.fixed_phase);
  if (which == ExtremeCase::entangled) {
    s.text("theory", "V1=0 V2=0 V12=1");
  } else {
    s.text("theory", "V1=1 V2=1 V12=0");
  }
  s.finish();
  return out;
}

/// One phase swept (or both locked) for an arbitrary source state.
inline ScenarioOutput run_fringe(const SourceState& state,
                                 const ScenarioConfig& cfg) {
  cfg.validate();
  const DensityMatrix rho = detail::with_noise(to_density(state), cfg.noise_lambda);
  const FringeScan scan = scan_fringe(rho, cfg.axis, cfg.fixed_phase, cfg.grid_points);
  ScenarioOutput out;
  auto csv = detail::fringe_writer();
  detail::write_scan(csv, scan);
  out.csv = csv.str();
  out.rows = csv.rows();

  detail::SummaryBuilder s(out);
  s.text("scenario", "fringe");
  s.text("mode", cfg.noise_lambda > 0.0 ? "emulated" : "theory");
  s.text("state", detail::describe_state(state));
  s.text("axis", to_string(cfg.axis));
  s.number("points", cfg.grid_points);
  s.number("fixed_phase", cfg.fixed_phase);
  s.number("V1", visibility_from_scan(scan, Channel::single(QubitId::particle1)));
  s.number("V2", visibility_from_scan(scan, Channel::single(QubitId::particle2)));
  if (cfg.axis != ScanAxis::both_locked) {
    s.number("V12", visibility_from_scan(scan, Channel::corrected_joint()));
  }
  s.finish();
  return out;
}

inline std::vector<double> alpha_grid(const ScenarioConfig& cfg) {
  const auto n = static_cast<long>(
      std::floor((cfg.alpha_stop - cfg.alpha_start) / cfg.alpha_step + 1e-9));
  std::vector<double> alphas;
  for (long k = 0; k <= n; ++k) alphas.push_back(cfg.alpha_start + k * cfg.alpha_step);
  return alphas;
}

/// Picks the convention for compiled psi_alpha preparations: the calibrated
/// one if it reaches every target at visibility level, otherwise the
/// convention with the smallest worst-case residual over the scan.
inline std::pair<Convention, bool> psi_alpha_convention(
    const std::vector<double>& alphas) {
  std::vector<Convention> candidates{calibrated_convention()};
  for (const auto& c : convention_space()) candidates.push_back(c);
  Convention best = candidates.front();
  double best_worst = 2.0;
  for (const Convention& c : candidates) {
    double worst = 0.0;
    for (double a : alphas) {
      worst = std::max(
          worst, evaluate_preparation(parse(preparation_text("psi_alpha", a)),
                                      family_psi_alpha(a), c)
                     .visibility_residual);
    }
    if (worst < best_worst - 1e-15) {
      best_worst = worst;
      best = c;
    }
    if (&c == &candidates.front() && worst < 1e-9) return {c, true};
  }
  return {best, false};
}

inline ScenarioOutput run_alpha_scan(const ScenarioConfig& cfg) {
  cfg.validate();
  const std::vector<double> alphas = alpha_grid(cfg);
  Convention conv = calibrated_convention();
  bool conv_is_calibrated = true;
  if (cfg.via_pulses) std::tie(conv, conv_is_calibrated) = psi_alpha_convention(alphas);

  ScenarioOutput out;
  detail::CsvWriter csv({"alpha", "V1", "V2", "V12", "P1", "P2", "E", "sum1", "sum2"});
  double worst_sum = 0.0, worst_theory_vi = 0.0, worst_theory_v12 = 0.0;
  for (double a : alphas) {
    DensityMatrix rho = to_density(family_psi_alpha(a));
    if (cfg.via_pulses) {
      rho = compile(parse(preparation_text("psi_alpha", a)), conv)
                .apply(to_density(upup_state()));
    }
    rho = detail::with_noise(rho, cfg.noise_lambda);
    const ScanVisibilities v = scan_visibilities(rho, cfg.grid_points, cfg.fixed_phase);
    const double sum1 = v.V1 * v.V1 + v.V12 * v.V12;
    const double sum2 = v.V2 * v.V2 + v.V12 * v.V12;
    csv.row({a, v.V1, v.V2, v.V12, predictability(rho, QubitId::particle1),
             predictability(rho, QubitId::particle2), entanglement_entropy(rho),
             sum1, sum2});
    worst_sum = std::max({worst_sum, std::abs(sum1 - 1.0), std::abs(sum2 - 1.0)});
    const double vi = std::abs(std::sin(2.0 * a));
    const double v12 = std::abs(std::cos(2.0 * a));
    worst_theory_vi = std::max(
        {worst_theory_vi, std::abs(v.V1 - vi), std::abs(v.V2 - vi)});
    worst_theory_v12 = std::max(worst_theory_v12, std::abs(v.V12 - v12));
  }
  out.csv = csv.str();
  out.rows = csv.rows();

  detail::SummaryBuilder s(out);
  s.text("scenario", "alpha-scan");
  s.text("mode", cfg.noise_lambda > 0.0 ? "emulated" : "theory");
  s.text("source", cfg.via_pulses ? "pulses" : "analytic");
  if (cfg.via_pulses) {
    s.text("pulse_convention", conv.describe());
    s.text("pulse_convention_source",
           conv_is_calibrated ? "calibrated" : "best-achieving");
  }
  s.number("rows", static_cast<double>(csv.rows()));
  s.number("points", cfg.grid_points);
  s.number("max_sum_deviation", worst_sum);
  s.number("max_Vi_theory_deviation", worst_theory_vi);
  s.number("max_V12_theory_deviation", worst_theory_v12);
  s.finish();
  return out;
}

/// Random-state invariant suite. Matrix-route checks run in both modes; the
/// closed-form checks need real amplitudes and run only with real_only.
inline ScenarioOutput run_verify(const ScenarioConfig& cfg) {
  cfg.validate();
  struct Check {
    std::string name;
    double tolerance;
    double worst = 0.0;
    long violations = 0;
    std::optional<SourceState> offender;

    Check(std::string n, double tol) : name(std::move(n)), tolerance(tol) {}

    void record(double residual, const SourceState& state) {
      residual = std::abs(residual);
      if (residual > worst) worst = residual;
      if (residual > tolerance) {
        if (!offender) offender = state;
        ++violations;
      }
    }
  };
  std::vector<Check> checks{
      {"triality_1", 1e-10},          {"triality_2", 1e-10},
      {"distinguishability_split_1", 1e-10},
      {"distinguishability_split_2", 1e-10},
      {"entanglement_oracle", 1e-9},
  };
  if (cfg.real_only) {
    checks.push_back({"closed_vs_matrix_probabilities", 1e-10});
    checks.push_back({"closed_vs_matrix_visibilities", 1e-10});
    checks.push_back({"coefficient_bound", 1e-12});
    checks.push_back({"closed_form_triality", 1e-10});
  }
  auto find = [&checks](std::string_view n) -> Check& {
    for (auto& c : checks) {
      if (c.name == n) return c;
    }
    throw Error(ErrorCode::parameter, "unknown check");
  };

  StateSampler sampler(cfg.seed, cfg.real_only);
  for (long i = 0; i < cfg.samples; ++i) {
    const SourceState state = sampler.next_state();
    const DensityMatrix rho = to_density(state);
    const ComplementarityReport m = complementarity_report(rho);
    find("triality_1").record(m.residual_triality_1, state);
    find("triality_2").record(m.residual_triality_2, state);
    find("distinguishability_split_1")
        .record(m.D1 * m.D1 - m.P1 * m.P1 - m.V12 * m.V12, state);
    find("distinguishability_split_2")
        .record(m.D2 * m.D2 - m.P2 * m.P2 - m.V12 * m.V12, state);
    find("entanglement_oracle")
        .record(entanglement_closed_form(std::min(1.0, m.V12)) - m.E, state);
    if (!cfg.real_only) continue;

    const PhasePair ph = sampler.next_phases();
    const ProbabilityTable t = detect(state, ph);
    const auto singles = closed_form_singles(state, ph);
    double dp = std::abs(closed_form_corrected_joint(state, ph) - t.corrected[0]);
    for (int k = 0; k < 4; ++k) dp = std::max(dp, std::abs(singles[k] - t.single[k]));
    find("closed_vs_matrix_probabilities").record(dp, state);

    const ComplementarityReport c = complementarity_report(state);
    const double dv = std::max({std::abs(c.V1 - m.V1), std::abs(c.V2 - m.V2),
                                std::abs(c.V12 - m.V12)});
    find("closed_vs_matrix_visibilities").record(dv, state);
    const auto [mm, nn] = interference_coefficients(state);
    find("coefficient_bound").record(std::max(0.0, std::abs(mm) - std::abs(nn)), state);
    find("closed_form_triality")
        .record(std::max(std::abs(c.residual_triality_1),
                         std::abs(c.residual_triality_2)),
                state);
  }

  ScenarioOutput out;
  detail::SummaryBuilder s(out);
  s.text("scenario", "verify");
  s.text("sampling", cfg.real_only ? "real-gaussian" : "haar-complex");
  s.number("samples", static_cast<double>(cfg.samples));
  s.number("seed", static_cast<double>(cfg.seed));
  for (const auto& c : checks) {
    out.metrics.emplace_back("max_" + c.name, c.worst);
    out.metrics.emplace_back("violations_" + c.name, static_cast<double>(c.violations));
    s.raw("check " + c.name + " max=" + format_scientific(c.worst) +
          " tol=" + format_scientific(c.tolerance) +
          " violations=" + std::to_string(c.violations) +
          " status=" + (c.violations ? "FAIL" : "PASS"));
    if (c.offender) {
      s.raw("  first offending state " + detail::describe_state(*c.offender));
    }
    if (c.violations) out.violation = true;
  }
  s.text("result", out.violation ? "VIOLATION" : "OK");
  s.finish();
  return out;
}

/// E(V12) plus the V_i and D_i curves at a priori predictability 0 and 0.4.
inline ScenarioOutput run_entanglement_curve(const ScenarioConfig& cfg) {
  cfg.validate();
  detail::CsvWriter csv({"V12", "E", "Vi_P0", "Di_P0", "Vi_P04", "Di_P04"});
  auto curve = [](double p, double v12)
      -> std::pair<std::optional<double>, std::optional<double>> {
    const double rest = 1.0 - p * p - v12 * v12;
    if (rest < -1e-12) return {std::nullopt, std::nullopt};
    return {std::sqrt(std::max(0.0, rest)), std::sqrt(p * p + v12 * v12)};
  };
  for (int k = 0; k < cfg.grid_points; ++k) {
    const double v12 =
        k == cfg.grid_points - 1 ? 1.0 : static_cast<double>(k) / (cfg.grid_points - 1);
    const auto [v0, d0] = curve(0.0, v12);
    const auto [v4, d4] = curve(0.4, v12);
    csv.row({v12, entanglement_closed_form(v12), v0, d0, v4, d4});
  }
  ScenarioOutput out;
  out.csv = csv.str();
  out.rows = csv.rows();
  detail::SummaryBuilder s(out);
  s.text("scenario", "entanglement-curve");
  s.number("points", cfg.grid_points);
  s.number("P04_cutoff_V12", std::sqrt(1.0 - 0.16));
  s.finish();
  return out;
}

/// Compiles `seq` on |uu> under the calibrated convention and compares the
/// result with `target`. Flags a violation when the calibrated convention
/// does not reach the target at visibility level.
inline ScenarioOutput run_pulse_check(const PulseSequence& seq,
                                      const SourceState& target,
                                      const std::string& target_name,
                                      const ScenarioConfig& cfg) {
  cfg.validate();
  const CalibrationResult& cal = calibrated();
  const PreparationCheck check = check_preparation(seq, target, cal.convention);
  ScenarioOutput out;
  detail::SummaryBuilder s(out);
  s.text("scenario", "pulse-check");
  s.text("sequence", render(seq));
  s.text("target", target_name);
  s.text("calibrated_convention", cal.convention.describe());
  s.text("calibration", cal.success ? "success" : "FAILED");
  s.number("fidelity", check.calibrated.fidelity);
  s.number("infidelity", 1.0 - check.calibrated.fidelity);
  s.number("visibility_residual", check.calibrated.visibility_residual);
  s.text("equivalent", check.equivalent_under_calibrated ? "yes" : "no");
  if (!check.equivalent_under_calibrated) {
    s.text("best_convention", check.best.convention.describe());
    s.number("best_fidelity", check.best.fidelity);
    s.number("best_visibility_residual", check.best.visibility_residual);
    s.text("best_equivalent", check.equivalent_under_some ? "yes" : "no");
  }
  out.violation = !check.equivalent_under_calibrated;
  s.finish();
  return out;
}

}  // namespace twinfringe
