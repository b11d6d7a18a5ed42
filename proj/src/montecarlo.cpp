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

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#include "treeorder/error.hpp"

namespace treeorder {

void validate(const ExperimentPlan& plan)
{
    validate(plan.scenario);
    require(plan.replications >= 1, "replications must be >= 1");
    require(!plan.s_grid.empty(), "s_grid must not be empty");
    require(plan.s_grid.front() >= 1, "s_grid values must be >= 1");
    for (std::size_t i = 1; i < plan.s_grid.size(); ++i) {
        require(plan.s_grid[i - 1] < plan.s_grid[i], "s_grid must be strictly increasing");
    }
    require(plan.replications <= plan.max_records / plan.s_grid.size(),
            "experiment exceeds max_records = " + std::to_string(plan.max_records));
}

ReplicationRecord run_replication(const ScenarioConfig& scenario, std::size_t s, std::size_t replication)
{
    auto stream = derive_stream(scenario.seed, replication, s);
    const auto summary = draw_summary(scenario, s, stream);
    const auto fit = mle_variance(summary);
    const auto params = mean_params(scenario, summary.treatments());

    ReplicationRecord rec;
    rec.s = s;
    rec.replication = replication;
    rec.total_size = summary.total();
    rec.control_size = summary.size(0);
    rec.treatment_size = summary.size(1);
    rec.sigma2_hat = fit.sigma2_hat;
    rec.xi = fit.xi;
    rec.mu0_hat = fit.mu0_hat;
    rec.control_gap = summary.mean()[0] - fit.mu0_hat;
    rec.mu0_error = fit.mu0_hat - params.mu0();
    rec.terms = fit.terms;
    return rec;
}

std::size_t resolve_workers(std::size_t hint)
{
    if (hint == 0) return static_cast<std::size_t>(std::max(1, omp_get_max_threads()));
    return hint;
}

void run_experiment_chunked(const ExperimentPlan& plan, const RecordSink& sink, std::size_t chunk)
{
    validate(plan);
    require(chunk >= 1, "chunk must be >= 1");
    const int workers = static_cast<int>(resolve_workers(plan.worker_hint));

    std::vector<ReplicationRecord> buffer;
    for (const std::size_t s : plan.s_grid) {
        for (std::size_t first = 0; first < plan.replications; first += chunk) {
            const std::size_t count = std::min(chunk, plan.replications - first);
            buffer.assign(count, ReplicationRecord{});

            std::exception_ptr failure;
            std::mutex failure_mutex;
            // Each slot is written by exactly one iteration; results land in
            // replication order regardless of scheduling.
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
            for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) {
                try {
                    buffer[k] = run_replication(plan.scenario, s, first + static_cast<std::size_t>(k));
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
            if (failure) std::rethrow_exception(failure);
            sink(buffer);
        }
    }
}

std::vector<ReplicationRecord> run_experiment(const ExperimentPlan& plan)
{
    std::vector<ReplicationRecord> out;
    validate(plan);
    out.reserve(plan.replications * plan.s_grid.size());
    run_experiment_chunked(plan, [&](std::span<const ReplicationRecord> block) {
        out.insert(out.end(), block.begin(), block.end());
    });
    return out;
}

std::vector<std::string> check_record(const ReplicationRecord& r)
{
    std::vector<std::string> problems;
    const auto& t = r.terms;
    const double sum = t.sum();
    if (std::abs(r.sigma2_hat - sum) > 1e-10 * std::max(std::abs(sum), 1e-300)) {
        problems.push_back("sigma2_hat != I1+I2+I3+I4");
    }
    for (double term : {t.within_control, t.control_adjustment, t.within_treatments, t.treatment_adjustment}) {
        if (!(term >= -1e-15)) problems.push_back("negative decomposition term");
    }
    const double xi = std::sqrt(static_cast<double>(r.total_size)) * t.penalty();
    if (std::abs(r.xi - xi) > 1e-10 * std::max(std::abs(xi), 1e-300)) {
        problems.push_back("xi != sqrt(N)(I2+I4)");
    }
    if (!(r.control_gap >= 0.0)) problems.push_back("mu0_hat exceeds the control sample mean");
    return problems;
}

}  // namespace treeorder
