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

#include "treeorder/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treeorder/error.hpp"

namespace treeorder {

namespace {

std::vector<double> sorted_finite(std::span<const double> values)
{
    std::vector<double> v;
    v.reserve(values.size());
    for (double x : values) {
        if (!std::isnan(x)) v.push_back(x);
    }
    std::sort(v.begin(), v.end());
    return v;
}

template <class F>
DistributionSummary describe_by(std::span<const ReplicationRecord> records, F&& f)
{
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& r : records) v.push_back(f(r));
    return describe(v);
}

}  // namespace

double quantile(std::span<const double> sorted, double p)
{
    require(!sorted.empty(), "quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxSummary box_summary(std::span<const double> values)
{
    const auto v = sorted_finite(values);
    require(!v.empty(), "box summary of an empty sample");

    BoxSummary b;
    b.count = v.size();
    b.q1 = quantile(v, 0.25);
    b.median = quantile(v, 0.5);
    b.q3 = quantile(v, 0.75);
    const double reach = 1.5 * (b.q3 - b.q1);
    const double low_fence = b.q1 - reach;
    const double high_fence = b.q3 + reach;

    b.whisker_low = *std::lower_bound(v.begin(), v.end(), low_fence);
    b.whisker_high = *std::prev(std::upper_bound(v.begin(), v.end(), high_fence));
    for (double x : v) {
        if (x < low_fence || x > high_fence) ++b.n_outliers;
    }
    return b;
}

Histogram histogram(std::span<const double> values, std::size_t bins,
                    std::optional<std::pair<double, double>> range)
{
    require(bins >= 1, "histogram needs bins >= 1");
    double lo = 0.0, hi = 0.0;
    if (range) {
        std::tie(lo, hi) = *range;
        require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "histogram range must satisfy lo < hi");
    } else {
        const auto v = sorted_finite(values);
        require(!v.empty(), "histogram of an empty sample needs an explicit range");
        lo = v.front();
        hi = v.back();
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
    }

    Histogram h;
    h.bin_edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) h.bin_edges[i] = lo + width * static_cast<double>(i);
    h.bin_edges.back() = hi;
    h.counts.assign(bins, 0);

    for (double x : values) {
        if (std::isnan(x) || x < lo || x > hi) continue;
        auto bin = static_cast<std::size_t>((x - lo) / width);
        bin = std::min(bin, bins - 1);
        // Guard against round-off in the division near an edge.
        while (bin > 0 && x < h.bin_edges[bin]) --bin;
        while (bin + 1 < bins && x >= h.bin_edges[bin + 1]) ++bin;
        ++h.counts[bin];
    }
    return h;
}

MomentDiagnostics moment_diagnostics(std::span<const double> values, double target_variance)
{
    require(values.size() >= 2, "moment diagnostics need n >= 2");
    MomentDiagnostics d;
    d.n = values.size();
    const double n = static_cast<double>(d.n);

    double sum = 0.0;
    for (double x : values) sum += x;
    d.mean = sum / n;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : values) {
        const double e = x - d.mean;
        const double e2 = e * e;
        m2 += e2;
        m3 += e2 * e;
        m4 += e2 * e2;
    }
    d.variance = m2 / (n - 1.0);
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0) {
        d.skewness = m3 / std::pow(m2, 1.5);
        d.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    } else {
        d.skewness = std::numeric_limits<double>::quiet_NaN();
        d.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
    }
    d.target_variance = target_variance;
    d.mean_z = d.mean / std::sqrt(target_variance / n);
    d.variance_z = (d.variance - target_variance) / (target_variance * std::sqrt(2.0 / (n - 1.0)));
    return d;
}

MomentDiagnostics clt_diagnostics(std::span<const ReplicationRecord> records, double sigma2)
{
    require(records.size() >= 2, "CLT diagnostics need n >= 2");
    require(sigma2 > 0.0, "sigma2 must be positive");
    std::vector<double> z;
    z.reserve(records.size());
    for (const auto& r : records) {
        require(r.s == records.front().s, "CLT diagnostics need records from a single s");
        z.push_back(std::sqrt(static_cast<double>(r.total_size)) * (r.sigma2_hat - sigma2));
    }
    return moment_diagnostics(z, 2.0 * sigma2 * sigma2);
}

DistributionSummary describe(std::span<const double> values)
{
    const auto v = sorted_finite(values);
    require(!v.empty(), "summary of an empty sample");
    DistributionSummary d;
    double sum = 0.0;
    for (double x : v) sum += x;
    d.mean = sum / static_cast<double>(v.size());
    d.q1 = quantile(v, 0.25);
    d.median = quantile(v, 0.5);
    d.q3 = quantile(v, 0.75);
    return d;
}

std::string_view to_string(Trend trend) noexcept
{
    switch (trend) {
    case Trend::StrictlyDecreasing: return "strictly_decreasing";
    case Trend::NonIncreasing: return "non_increasing";
    case Trend::Constant: return "constant";
    case Trend::NonDecreasing: return "non_decreasing";
    case Trend::StrictlyIncreasing: return "strictly_increasing";
    case Trend::Mixed: return "mixed";
    }
    return "mixed";
}

Trend classify_trend(std::span<const double> values)
{
    bool any_up = false, any_down = false, any_flat = false;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[i - 1]) any_down = true;
        else if (values[i] > values[i - 1]) any_up = true;
        else any_flat = true;
    }
    if (any_up && any_down) return Trend::Mixed;
    if (any_down) return any_flat ? Trend::NonIncreasing : Trend::StrictlyDecreasing;
    if (any_up) return any_flat ? Trend::NonDecreasing : Trend::StrictlyIncreasing;
    return Trend::Constant;
}

bool is_non_increasing(Trend trend) noexcept
{
    return trend == Trend::StrictlyDecreasing || trend == Trend::NonIncreasing || trend == Trend::Constant;
}

std::vector<std::span<const ReplicationRecord>> group_by_s(std::span<const ReplicationRecord> records)
{
    std::vector<std::span<const ReplicationRecord>> groups;
    std::size_t first = 0;
    for (std::size_t i = 1; i <= records.size(); ++i) {
        if (i == records.size() || records[i].s != records[first].s) {
            if (i < records.size()) require(records[i].s > records[first].s, "records must be ordered by s");
            groups.push_back(records.subspan(first, i - first));
            first = i;
        }
    }
    return groups;
}

ConsistencyRow consistency_row(std::span<const ReplicationRecord> group, const ConsistencyOptions& options)
{
    require(!group.empty(), "consistency row of an empty group");
    const double sigma2 = options.sigma2;
    ConsistencyRow row;
    row.s = group.front().s;
    row.count = group.size();
    row.sigma2_error = describe_by(group, [&](const auto& r) { return std::abs(r.sigma2_hat - sigma2); });
    if (options.neyman_scott_m) {
        const double m = static_cast<double>(*options.neyman_scott_m);
        const double limit = (m - 1.0) / m * sigma2;
        row.neyman_scott_error = describe_by(group, [&](const auto& r) { return std::abs(r.sigma2_hat - limit); });
    }
    row.mu0_error = describe_by(group, [](const auto& r) { return std::abs(r.mu0_error); });
    row.control_gap = describe_by(group, [](const auto& r) { return r.control_gap; });
    row.xi = describe_by(group, [](const auto& r) { return r.xi; });
    row.penalty = describe_by(group, [](const auto& r) { return r.terms.penalty(); });
    return row;
}

ConsistencyTable consistency_table(std::vector<ConsistencyRow> rows)
{
    require(rows.size() >= 2, "consistency diagnostics need >= 2 grid points");
    const auto medians = [&](auto&& pick) {
        std::vector<double> v;
        for (const auto& r : rows) v.push_back(pick(r).median);
        return classify_trend(v);
    };
    ConsistencyTable table;
    table.sigma2_error = medians([](const ConsistencyRow& r) { return r.sigma2_error; });
    if (std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.neyman_scott_error.has_value(); })) {
        table.neyman_scott_error = medians([](const ConsistencyRow& r) { return *r.neyman_scott_error; });
    }
    table.mu0_error = medians([](const ConsistencyRow& r) { return r.mu0_error; });
    table.control_gap = medians([](const ConsistencyRow& r) { return r.control_gap; });
    table.xi = medians([](const ConsistencyRow& r) { return r.xi; });
    table.penalty = medians([](const ConsistencyRow& r) { return r.penalty; });
    table.rows = std::move(rows);
    return table;
}

ConsistencyTable consistency_diagnostics(std::span<const ReplicationRecord> records,
                                         const ConsistencyOptions& options)
{
    std::vector<ReplicationRecord> sorted(records.begin(), records.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ReplicationRecord& a, const ReplicationRecord& b) { return a.s < b.s; });
    std::vector<ConsistencyRow> rows;
    for (const auto& group : group_by_s(sorted)) rows.push_back(consistency_row(group, options));
    return consistency_table(std::move(rows));
}

}  // namespace treeorder
