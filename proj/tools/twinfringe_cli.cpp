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


// Command-line front end: one subcommand per scenario.
//
// CSV goes to --out (or stdout); the summary goes to stdout when --out is
// given and to stderr otherwise. Exit codes: 0 ok, 1 invariant violation,
// 2 usage or parse error, 3 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "twinfringe/twinfringe.hpp"

namespace {

namespace tf = twinfringe;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

// Angle flags are kept as text so "pi/2" and friends are accepted.
struct RawFlags {
  int points = 0;
  std::string alpha_start = "pi/4";
  std::string alpha_stop = "21*pi/16";
  std::string alpha_step = "pi/16";
  std::string fixed_phase = "pi/2";
  double noise = 0.0;
  std::uint64_t seed = 2004;
  std::string out;
  bool via_pulses = false;
  bool real_only = false;
  long samples = 100000;
  std::string axis = "phi1";
  std::string state = "psi";
  std::string extreme_case;
  std::string sequence_file;
  std::string target = "psi";
};

tf::ScenarioConfig make_config(const RawFlags& f, tf::Scenario scenario) {
  tf::ScenarioConfig cfg;
  cfg.scenario = scenario;
  cfg.grid_points = f.points > 0 ? f.points : tf::default_grid_points(scenario);
  cfg.alpha_start = tf::evaluate_angle(f.alpha_start);
  cfg.alpha_stop = tf::evaluate_angle(f.alpha_stop);
  cfg.alpha_step = tf::evaluate_angle(f.alpha_step);
  cfg.fixed_phase = tf::evaluate_angle(f.fixed_phase);
  cfg.noise_lambda = f.noise;
  cfg.seed = f.seed;
  cfg.output_path = f.out;
  cfg.via_pulses = f.via_pulses;
  cfg.real_only = f.real_only;
  cfg.samples = f.samples;
  if (f.axis == "phi1") cfg.axis = tf::ScanAxis::phi1;
  else if (f.axis == "phi2") cfg.axis = tf::ScanAxis::phi2;
  else if (f.axis == "locked") cfg.axis = tf::ScanAxis::both_locked;
  else throw tf::Error(tf::ErrorCode::parameter, "unknown axis '" + f.axis + "'");
  cfg.validate();
  return cfg;
}

int emit(const tf::ScenarioOutput& out, const std::string& path) {
  if (!path.empty()) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
      throw tf::Error(tf::ErrorCode::io, "cannot open '" + path + "' for writing");
    }
    file << out.csv;
    file.flush();
    if (!file) throw tf::Error(tf::ErrorCode::io, "write to '" + path + "' failed");
    std::cout << out.summary;
  } else if (!out.csv.empty()) {
    std::cout << out.csv;
    std::cerr << out.summary;
  } else {
    std::cout << out.summary;
  }
  std::cout.flush();
  if (!std::cout) throw tf::Error(tf::ErrorCode::io, "stdout write failed");
  return out.violation ? kExitViolation : kExitOk;
}

void add_common(CLI::App* sub, RawFlags& f) {
  sub->add_option("--points", f.points, "grid points per sweep (0 = scenario default)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--fixed-phase", f.fixed_phase, "fixed partner phase, e.g. pi/2");
  sub->add_option("--noise", f.noise, "global depolarizing strength in [0, 1]");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--out", f.out, "CSV output path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-particle interferometry: visibilities, entanglement, pulses"};
  app.require_subcommand(1);
  RawFlags f;

  auto* extreme = app.add_subcommand("extreme", "locked-phase sweep of |Psi> or |Phi>");
  extreme->add_option("case", f.extreme_case, "entangled | product")
      ->required()
      ->check(CLI::IsMember({"entangled", "product"}));
  add_common(extreme, f);

  auto* alpha = app.add_subcommand("alpha-scan", "visibilities across the psi_alpha family");
  add_common(alpha, f);
  alpha->add_option("--alpha-start", f.alpha_start);
  alpha->add_option("--alpha-stop", f.alpha_stop);
  alpha->add_option("--alpha-step", f.alpha_step);
  alpha->add_flag("--via-pulses", f.via_pulses, "prepare each state from its pulse sequence");

  auto* fringe = app.add_subcommand("fringe", "single-axis sweep of a named state");
  add_common(fringe, f);
  fringe->add_option("--state", f.state,
                     "psi | phi | upup | psi_alpha(a) | asym(a,b) | gamma(g1,g2,g3,g4)");
  fringe->add_option("--axis", f.axis, "phi1 | phi2 | locked");

  auto* verify = app.add_subcommand("verify", "random-state invariant suite");
  add_common(verify, f);
  verify->add_option("--samples", f.samples, "number of random states");
  verify->add_flag("--real-only", f.real_only, "sample real amplitudes only");

  auto* pulse = app.add_subcommand("pulse-check", "compile a sequence file and compare to a target");
  add_common(pulse, f);
  pulse->add_option("file", f.sequence_file, "sequence file")->required();
  pulse->add_option("--target", f.target, "named target state");

  auto* curve = app.add_subcommand("entanglement-curve", "E, V_i and D_i versus V12");
  add_common(curve, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (extreme->parsed()) {
      const bool ent = f.extreme_case == "entangled";
      const auto cfg = make_config(
          f, ent ? tf::Scenario::extreme_entangled : tf::Scenario::extreme_product);
      return emit(tf::run_extreme(ent ? tf::ExtremeCase::entangled
                                      : tf::ExtremeCase::product, cfg),
                  cfg.output_path);
    }
    if (alpha->parsed()) {
      const auto cfg = make_config(f, tf::Scenario::alpha_scan);
      return emit(tf::run_alpha_scan(cfg), cfg.output_path);
    }
    if (fringe->parsed()) {
      const auto cfg = make_config(f, tf::Scenario::fringe);
      return emit(tf::run_fringe(tf::parse_named_state(f.state), cfg), cfg.output_path);
    }
    if (verify->parsed()) {
      const auto cfg = make_config(f, tf::Scenario::verify);
      return emit(tf::run_verify(cfg), cfg.output_path);
    }
    if (pulse->parsed()) {
      const auto cfg = make_config(f, tf::Scenario::pulse_check);
      const tf::PulseSequence seq = tf::load_sequence_file(f.sequence_file);
      return emit(tf::run_pulse_check(seq, tf::parse_named_state(f.target), f.target, cfg),
                  cfg.output_path);
    }
    if (curve->parsed()) {
      const auto cfg = make_config(f, tf::Scenario::entanglement_curve);
      return emit(tf::run_entanglement_curve(cfg), cfg.output_path);
    }
  } catch (const tf::Error& e) {
    std::cerr << "twinfringe: " << e.what() << '\n';
    return e.code() == tf::ErrorCode::io ? kExitIo : kExitUsage;
  }
  return kExitUsage;
}
