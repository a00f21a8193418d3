// Copyright 2026 The pseudoev Authors.
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

// Command line front end.
//
//   pseudoev <command> [--config FILE] [key=value | --key value ...]
//
// Exit status: 0 ok, 1 usage, 2 data, 3 runtime failure.

#ifndef PSEUDOEV_CLI_H_
#define PSEUDOEV_CLI_H_

#include <string>
#include <vector>

namespace pseudoev {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitRuntime = 3;

int RunCli(int argc, const char* const* argv);
// argv[0] is not included.
int RunCli(const std::vector<std::string>& args);

}  // namespace pseudoev

#endif  // PSEUDOEV_CLI_H_
