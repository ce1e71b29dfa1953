// SPDX-License-Identifier: Apache-2.0
//
// beamtrace: location-aware mmWave beam alignment toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <iosfwd>

namespace beamtrace {

/// Process exit codes used by the command-line front end.
enum ExitCode : int
{
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitMissingFile = 3,
    kExitSyntax = 4,
    kExitSchema = 5,
    kExitConstraint = 6,
    kExitBadData = 7,
};

/// Entry point for the `beamtrace` binary. Diagnostics go to `err` as a
/// single line; usage text goes to `out`.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace beamtrace
