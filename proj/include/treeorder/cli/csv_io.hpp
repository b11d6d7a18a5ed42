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

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "treeorder/model.hpp"
#include "treeorder/montecarlo.hpp"

namespace treeorder::cli {

inline constexpr std::array<std::string_view, 14> kRecordColumns = {
    "s", "replication", "N", "n0", "n", "sigma2_hat", "xi", "mu0_hat",
    "control_gap", "mu0_error", "I1", "I2", "I3", "I4"};

/// 17 significant digits; parses back to the identical double.
std::string format_exact(double value);
/// Shortest representation that round-trips.
std::string format_short(double value);

/// Headered CSV with columns population_id (0 = control) and value.
Dataset read_dataset_csv(std::istream& in);

/// Lines starting with '#' before the header are provenance comments.
struct RecordsFile {
    std::vector<std::string> comments;
    std::vector<ReplicationRecord> records;
};

void write_records_header(std::ostream& out);
void write_record(std::ostream& out, const ReplicationRecord& record);
/// Throws IoError on a header mismatch, a malformed or truncated row.
RecordsFile read_records_csv(std::istream& in);

}  // namespace treeorder::cli
