// Copyright 2026 The Origami Crawler Authors
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

#include <iosfwd>
#include <string>
#include <vector>

namespace crawler::cli {

enum ExitCode : int { kOk = 0, kDesignError = 2, kIoError = 3, kPlotInput = 4 };

/// Runs the command line; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Help text of the top-level command or of one subcommand.
std::string help_text(const std::string& subcommand = "");

}  // namespace crawler::cli
