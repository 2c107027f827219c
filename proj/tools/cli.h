// tools/cli.h

// Copyright 2026  The spkfuse Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPKFUSE_TOOLS_CLI_H_
#define SPKFUSE_TOOLS_CLI_H_

#include <iosfwd>

namespace spkfuse::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumerical = 3,
};

/// Runs the spkfuse command line. Data goes to files or `out`; diagnostics
/// go to `err` only.
int run(int argc, const char *const *argv, std::ostream &out,
        std::ostream &err);

}  // namespace spkfuse::cli

#endif  // SPKFUSE_TOOLS_CLI_H_
