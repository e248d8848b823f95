// Copyright 2026 The su2est Authors
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

// Self-check battery run by `su2est verify`: saturation and sharpness of the
// Fisher-matrix constraints, attainment of the closed-form bounds by the
// constructed strategies, the mixed-to-pure reduction and the achieving
// measurement.

#pragma once

#include <string>
#include <vector>

namespace su2est {

struct VerifyCheck {
  std::string name;
  int n = 0;
  bool passed = false;
  double error = 0;
};

struct VerifyOptions {
  int nmax = 5;
  /// Added to every computed quantity before comparison; a nonzero value
  /// must make the battery fail.
  double perturb = 0;
  double tol = 1e-6;
};

std::vector<VerifyCheck> run_verify(const VerifyOptions& opt);

}  // namespace su2est
