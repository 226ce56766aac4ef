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

// `cohkit` command-line front end.
//
// Exit codes:
//   0   success
//   1   malformed input (JSON syntax or shape), with its location
//   2   invariant violation or failed selftest; the diagnostic names the invariant
//   3   transformation impossible; the majorization witness is printed
//   64  usage error

#ifndef COHKIT_CLI_HPP_
#define COHKIT_CLI_HPP_

#include <ostream>

namespace cohkit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMalformed = 1;
inline constexpr int kExitInvariant = 2;
inline constexpr int kExitImpossible = 3;
inline constexpr int kExitUsage = 64;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cohkit

#endif  // COHKIT_CLI_HPP_
