// Copyright 2026 The eegvit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef EEGVIT_CLI_H_
#define EEGVIT_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace eegvit {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

// Environment variable consulted for relative --data paths.
inline constexpr const char* kDataDirEnv = "EEGVIT_DATA_DIR";

// Runs one invocation; args excludes the program name. Never throws.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eegvit

#endif  // EEGVIT_CLI_H_
