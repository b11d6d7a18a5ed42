/*
   Copyright 2026 The treeorder Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace treeorder::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

struct FitOptions {
    std::string input;
    std::string format = "text";  // text | json
    std::string output;           // empty: write to `out`
};

struct SimulateOptions {
    std::string config;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::size_t> bins;
};

struct OracleOptions {
    std::size_t trials = 1000;
    std::size_t max_s = 12;
    std::uint64_t seed = 1;
};

struct ReportOptions {
    std::string records;
    std::string out_dir;
    std::optional<std::size_t> s;
    std::optional<std::size_t> bins;
};

/// Each command returns an exit code (0 ok, 1 validation failure, 2 I/O or
/// parse error) and reports errors on `err`.
int cmd_fit(const FitOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int cmd_oracle_check(const OracleOptions& options, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err);

/// TREEORDER_WORKERS, when set to a positive integer.
std::optional<std::size_t> workers_from_env();

std::string version();

}  // namespace treeorder::cli
