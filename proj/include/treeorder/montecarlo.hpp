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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "treeorder/estimator.hpp"
#include "treeorder/simulate.hpp"

namespace treeorder {

inline constexpr std::size_t kDefaultMaxRecords = 50'000'000;

struct ExperimentPlan {
    ScenarioConfig scenario;
    std::vector<std::size_t> s_grid;
    std::size_t replications = 1;
    std::size_t worker_hint = 1;
    std::size_t max_records = kDefaultMaxRecords;
};

struct ReplicationRecord {
    std::size_t s = 0;
    std::size_t replication = 0;
    std::size_t total_size = 0;     // N
    std::size_t control_size = 0;   // n0
    std::size_t treatment_size = 0; // n
    double sigma2_hat = 0.0;
    double xi = 0.0;
    double mu0_hat = 0.0;
    double control_gap = 0.0;  // xbar0 - mu0_hat
    double mu0_error = 0.0;    // mu0_hat - mu0
    Decomposition terms;

    friend bool operator==(const ReplicationRecord&, const ReplicationRecord&) = default;
};

/// Throws ValidationError unless replications >= 1, the grid is nonempty and
/// strictly increasing, the record count fits max_records and the scenario
/// is valid.
void validate(const ExperimentPlan& plan);

/// One replication: stream from derive_stream(seed, replication, s), draw,
/// fit, record.
ReplicationRecord run_replication(const ScenarioConfig& scenario, std::size_t s, std::size_t replication);

/// Records ordered by (s, replication). Replications run on up to
/// plan.worker_hint OpenMP threads; the output does not depend on it.
std::vector<ReplicationRecord> run_experiment(const ExperimentPlan& plan);

/// Single-threaded reference of run_experiment.
std::vector<ReplicationRecord> run_experiment_serial(const ExperimentPlan& plan);

using RecordSink = std::function<void(std::span<const ReplicationRecord>)>;

/// Streams records in (s, replication) order, at most `chunk` at a time and
/// never mixing two values of s in one call.
void run_experiment_chunked(const ExperimentPlan& plan, const RecordSink& sink, std::size_t chunk = 4096);

/// Estimator invariants a record must satisfy; empty when all hold.
std::vector<std::string> check_record(const ReplicationRecord& record);

/// Resolves a worker hint of 0 to the OpenMP default thread count.
std::size_t resolve_workers(std::size_t hint);

}  // namespace treeorder
