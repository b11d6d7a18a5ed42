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

#include "treeorder/montecarlo.hpp"

namespace treeorder {

// Reference path for the OpenMP engine: same records, plain nested loops.
std::vector<ReplicationRecord> run_experiment_serial(const ExperimentPlan& plan)
{
    validate(plan);
    std::vector<ReplicationRecord> out;
    out.reserve(plan.replications * plan.s_grid.size());
    for (const std::size_t s : plan.s_grid) {
        for (std::size_t r = 0; r < plan.replications; ++r) {
            out.push_back(run_replication(plan.scenario, s, r));
        }
    }
    return out;
}

}  // namespace treeorder
