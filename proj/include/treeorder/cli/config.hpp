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
#include <string>

#include <json.hpp>

#include "treeorder/montecarlo.hpp"

namespace treeorder::cli {

/// Everything that determines the data files of one simulate run. Worker
/// count is not part of it: it never changes the output.
struct ExperimentConfig {
    ExperimentPlan plan;
    std::size_t bins = 50;
};

/// Strict schema: unknown keys and wrong types are ValidationErrors.
///
///   {
///     "regime": {"kind": "neyman_scott", "m": 5},
///     "mean_model": {"kind": "all_zero"},
///     "sigma2": 1.0, "B": 1.0, "seed": 1,
///     "s_grid": [10, 50, 100], "replications": 2500,
///     "bins": 50, "max_records": 50000000
///   }
///
/// regime kinds: two_population{m, mprime}, fast_total{control, treatment}
/// (each a list of {coef, s_power, log_power} factors), control_heavy{exponent, m},
/// neyman_scott{m}, log_squared{}, linear_control{c, m}.
/// mean_model kinds: all_zero{}, constant_gap{mu0, gap}, explicit{mu0, mu}.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);

/// Fully resolved config, defaults included. Parsing it gives back the same
/// config.
nlohmann::json to_json(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical resolved config, as 16 hex digits.
std::string config_digest(const ExperimentConfig& config);

}  // namespace treeorder::cli
