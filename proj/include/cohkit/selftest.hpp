// Copyright 2026 The cohkit Authors
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

// Reduced-sample invariant suite behind `cohkit selftest`.

#ifndef COHKIT_SELFTEST_HPP_
#define COHKIT_SELFTEST_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cohkit/qstate.hpp"

namespace cohkit {

/// Entry points the suite measures through. Replacing one lets a caller
/// check that the suite notices a broken implementation.
struct SelftestHooks {
  std::function<double(const DensityMatrix&)> von_neumann_entropy;
  std::function<double(const DensityMatrix&)> relative_entropy_of_coherence;
  std::function<double(const PureState&)> entropy_of_coherence;

  /// The library implementations.
  static SelftestHooks library();
};

struct SelftestCheck {
  std::string module;
  std::string name;
  bool passed = false;
  std::uint64_t seed = 0;
  int samples = 0;
  double worst = 0.0;  // largest violation or error seen
  std::string detail;
};

struct SelftestReport {
  std::uint64_t seed = 0;
  std::vector<SelftestCheck> checks;
  bool passed() const;
};

SelftestReport run_selftest(std::uint64_t seed = 0, const SelftestHooks& hooks = SelftestHooks::library());

/// One line per check, then a summary line; no timings, so reruns with the
/// same seed are byte-identical.
std::string format_selftest(const SelftestReport& report);

}  // namespace cohkit

#endif  // COHKIT_SELFTEST_HPP_
