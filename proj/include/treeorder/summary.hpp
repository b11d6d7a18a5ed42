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
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "treeorder/montecarlo.hpp"

namespace treeorder {

/// Five-number summary for box-and-whisker plots. Quartiles use linear
/// interpolation at position 1 + (n-1)p (type 7). Whiskers are the most
/// extreme observations within 1.5 IQR of the nearer quartile.
struct BoxSummary {
    std::size_t count = 0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::size_t n_outliers = 0;
};

struct Histogram {
    std::vector<double> bin_edges;     // bins + 1 edges
    std::vector<std::size_t> counts;   // bins entries
};

struct MomentDiagnostics {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;         // divisor n - 1
    double skewness = 0.0;         // m3 / m2^1.5, NaN when m2 = 0
    double excess_kurtosis = 0.0;  // m4 / m2^2 - 3, NaN when m2 = 0
    double target_variance = 0.0;
    double mean_z = 0.0;           // mean / sqrt(target / n)
    double variance_z = 0.0;       // (variance - target) / (target sqrt(2 / (n - 1)))
};

struct DistributionSummary {
    double mean = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

struct ConsistencyRow {
    std::size_t s = 0;
    std::size_t count = 0;
    DistributionSummary sigma2_error;                      // |sigma2_hat - sigma2|
    std::optional<DistributionSummary> neyman_scott_error; // |sigma2_hat - (m-1)/m sigma2|
    DistributionSummary mu0_error;                         // |mu0_hat - mu0|
    DistributionSummary control_gap;                       // xbar0 - mu0_hat
    DistributionSummary xi;
    DistributionSummary penalty;                           // I2 + I4
};

enum class Trend { StrictlyDecreasing, NonIncreasing, Constant, NonDecreasing, StrictlyIncreasing, Mixed };

std::string_view to_string(Trend trend) noexcept;
Trend classify_trend(std::span<const double> values);
/// StrictlyDecreasing, NonIncreasing or Constant.
bool is_non_increasing(Trend trend) noexcept;

/// Trends are computed on the per-s medians.
struct ConsistencyTable {
    std::vector<ConsistencyRow> rows;
    Trend sigma2_error = Trend::Constant;
    std::optional<Trend> neyman_scott_error;
    Trend mu0_error = Trend::Constant;
    Trend control_gap = Trend::Constant;
    Trend xi = Trend::Constant;
    Trend penalty = Trend::Constant;
};

struct ConsistencyOptions {
    double sigma2 = 1.0;
    std::optional<std::size_t> neyman_scott_m;
};

double quantile(std::span<const double> sorted, double p);

BoxSummary box_summary(std::span<const double> values);

/// Equal-width bins over `range` (default: data min..max, widened by 0.5 on
/// each side when degenerate). Bins are right-open except the last.
/// Values outside the range and NaNs are not counted.
Histogram histogram(std::span<const double> values, std::size_t bins = 50,
                    std::optional<std::pair<double, double>> range = std::nullopt);

MomentDiagnostics moment_diagnostics(std::span<const double> values, double target_variance);

/// Moments of sqrt(N)(sigma2_hat - sigma2) against N(0, 2 sigma^4). All
/// records must share one s.
MomentDiagnostics clt_diagnostics(std::span<const ReplicationRecord> records, double sigma2);

DistributionSummary describe(std::span<const double> values);

/// Error summaries for one group of records sharing s.
ConsistencyRow consistency_row(std::span<const ReplicationRecord> group, const ConsistencyOptions& options);

/// Trend flags over rows ordered by increasing s. Needs >= 2 rows.
ConsistencyTable consistency_table(std::vector<ConsistencyRow> rows);

/// Per-s error summaries and monotone-trend flags. Needs >= 2 distinct s.
ConsistencyTable consistency_diagnostics(std::span<const ReplicationRecord> records,
                                         const ConsistencyOptions& options);

/// Splits records into runs of equal s, preserving order.
std::vector<std::span<const ReplicationRecord>> group_by_s(std::span<const ReplicationRecord> records);

}  // namespace treeorder
