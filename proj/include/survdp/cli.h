// Copyright 2026 The survdp Authors
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

#ifndef SURVDP_CLI_H_
#define SURVDP_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace survdp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Output directory used when no --output-dir is given.
inline constexpr char kOutputDirEnv[] = "SURVDP_OUTPUT_DIR";

// Runs one subcommand (km, dp, surrogate, collab, experiment, report). `args`
// excludes the program name. Result tables go to `out` and to files in the
// output directory; diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace survdp

#endif  // SURVDP_CLI_H_
