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
#include <functional>
#include <string>
#include <vector>

#include "treeorder/model.hpp"

namespace treeorder::cli {

using Mu0Estimator = std::function<double(const SampleSummary&)>;

struct OracleCheckReport {
    std::size_t trials = 0;
    std::size_t failures = 0;
    double max_mu0_discrepancy = 0.0;
    std::vector<std::string> messages;  // first few failures

    bool passed() const noexcept { return failures == 0; }
};

/// Randomized self-check of a control-mean estimator. Each trial draws a
/// raw dataset (s uniform in [1, max_s], sizes in [1, 10], population
/// centres in [-5, 5]) and checks:
///   - agreement with the 2^s enumeration to 1e-12 max(1, |xbar0|),
///   - lower <= mu0_hat <= xbar0 on an equal-size companion instance,
///   - the variance decomposition against the raw-data formula,
///   - the tree order of the fitted means,
///   - the least-squares bound against random tree-ordered true means.
OracleCheckReport oracle_check(std::size_t trials, std::size_t max_s, std::uint64_t seed,
                               const Mu0Estimator& estimator);

/// Same, with the library estimator.
OracleCheckReport oracle_check(std::size_t trials, std::size_t max_s, std::uint64_t seed);

}  // namespace treeorder::cli
