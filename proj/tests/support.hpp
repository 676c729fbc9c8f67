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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "twinfringe/twinfringe.hpp"

namespace tf_test {

inline oracle::Vec4 to_vec(const twinfringe::SourceState& s) {
  return {s[0], s[1], s[2], s[3]};
}

inline double max_abs_diff(const twinfringe::Matrix4c& a,
                           const twinfringe::Matrix4c& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double unitarity_defect(const twinfringe::Matrix4c& u) {
  return (u.adjoint() * u - twinfringe::Matrix4c::Identity()).cwiseAbs().maxCoeff();
}

inline double unitarity_defect(const twinfringe::Matrix2c& u) {
  return (u.adjoint() * u - twinfringe::Matrix2c::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace tf_test
