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

#include <cstdint>
#include <random>

#include "twinfringe/interferometer.hpp"
#include "twinfringe/qstate.hpp"

namespace twinfringe {

/// Seeded source of random pure states. Complex mode draws i.i.d. complex
/// Gaussians and normalizes, which is Haar-uniform on the 4-amplitude
/// sphere; real mode does the same with real Gaussians.
class StateSampler {
 public:
  StateSampler(std::uint64_t seed, bool real_only)
      : rng_(seed), real_only_(real_only) {}

  SourceState next_state() {
    Amplitudes g;
    for (int k = 0; k < 4; ++k) {
      const double re = normal_(rng_);
      const double im = real_only_ ? 0.0 : normal_(rng_);
      g(k) = Complex(re, im);
    }
    // A zero draw has probability zero; resample if it ever happens.
    if (g.norm() == 0.0) return next_state();
    return make_source(g);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  PhasePair next_phases() { return {uniform(0.0, kTwoPi), uniform(0.0, kTwoPi)}; }

  bool real_only() const noexcept { return real_only_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  bool real_only_;
};

}  // namespace twinfringe
