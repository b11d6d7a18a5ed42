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

#include "treeorder/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "treeorder/error.hpp"

namespace treeorder {

double mle_mu0(const SampleSummary& summary)
{
    const auto mean = summary.mean();
    const std::size_t s = summary.treatments();
    const double xbar0 = mean[0];

    // Only treatments below xbar0 can lower the pooled mean. Ordered by
    // (mean, index), i.e. a stable sort on the treatment index.
    std::vector<std::pair<double, std::size_t>> below;
    below.reserve(s);
    for (std::size_t i = 1; i <= s; ++i) {
        if (mean[i] < xbar0) below.emplace_back(mean[i], i);
    }
    std::sort(below.begin(), below.end());

    // Work in offsets from xbar0 so the empty subset is exactly 0.
    double weight = static_cast<double>(summary.size(0));
    double weighted_offset = 0.0;
    double best = 0.0;
    for (const auto& [value, index] : below) {
        const double offset = value - xbar0;
        // Ascending order: once a mean no longer lies below the running
        // pooled mean, no longer prefix can lower it.
        if (offset >= best) break;
        const double n = static_cast<double>(summary.size(index));
        weighted_offset += n * offset;
        weight += n;
        best = std::min(best, weighted_offset / weight);
    }
    return xbar0 + best;
}

double mle_mu0_bruteforce(const SampleSummary& summary, std::size_t max_treatments)
{
    const std::size_t s = summary.treatments();
    require(s <= max_treatments, "brute force limited to s <= " + std::to_string(max_treatments));
    require(s < 63, "brute force subset mask overflow");

    const auto mean = summary.mean();
    const double n0 = static_cast<double>(summary.size(0));
    double best = mean[0];
    const std::uint64_t subsets = std::uint64_t{1} << s;
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
        double numerator = n0 * mean[0];
        double denominator = n0;
        for (std::size_t i = 0; i < s; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                const double n = static_cast<double>(summary.size(i + 1));
                numerator += n * mean[i + 1];
                denominator += n;
            }
        }
        best = std::min(best, numerator / denominator);
    }
    return best;
}

MeanEstimates mle_means(const SampleSummary& summary)
{
    MeanEstimates est;
    est.mu0 = mle_mu0(summary);
    const auto mean = summary.mean();
    est.mu.resize(summary.treatments());
    for (std::size_t i = 0; i < est.mu.size(); ++i) est.mu[i] = std::max(est.mu0, mean[i + 1]);
    return est;
}

Decomposition decompose(const SampleSummary& summary, double mu0_hat, std::span<const double> mu_hat)
{
    require(mu_hat.size() == summary.treatments(), "mu_hat must have s entries");
    const auto mean = summary.mean();
    const auto ssw = summary.ssw();
    const double total = static_cast<double>(summary.total());

    double within = 0.0;
    double adjustment = 0.0;
    for (std::size_t i = 1; i <= mu_hat.size(); ++i) {
        const double gap = mean[i] - mu_hat[i - 1];
        within += ssw[i];
        adjustment += static_cast<double>(summary.size(i)) * gap * gap;
    }
    const double gap0 = mean[0] - mu0_hat;

    Decomposition d;
    d.within_control = ssw[0] / total;
    d.control_adjustment = static_cast<double>(summary.size(0)) * gap0 * gap0 / total;
    d.within_treatments = within / total;
    d.treatment_adjustment = adjustment / total;
    return d;
}

double xi_statistic(const SampleSummary& summary, double mu0_hat, std::span<const double> mu_hat)
{
    const auto d = decompose(summary, mu0_hat, mu_hat);
    return std::sqrt(static_cast<double>(summary.total())) * d.penalty();
}

MleFit mle_variance(const SampleSummary& summary)
{
    require(summary.total() >= 2, "variance estimate needs N >= 2");
    auto est = mle_means(summary);

    MleFit fit;
    fit.mu0_hat = est.mu0;
    fit.mu_hat = std::move(est.mu);
    fit.terms = decompose(summary, fit.mu0_hat, fit.mu_hat);
    fit.sigma2_hat = fit.terms.sum();
    fit.total_size = summary.total();
    fit.xi = std::sqrt(static_cast<double>(fit.total_size)) * fit.terms.penalty();
    return fit;
}

BoundsReport mu0_bounds(const SampleSummary& summary)
{
    const auto& layout = summary.layout();
    require(layout.equal_treatment_sizes(), "mu0 bounds require equal treatment sample sizes");
    const auto mean = summary.mean();
    const double s = static_cast<double>(summary.treatments());
    const double n = static_cast<double>(layout.treatment_sizes().front());
    const double n0 = static_cast<double>(layout.control_size());

    BoundsReport r;
    r.rho = s * n / n0;
    r.lambda = *std::min_element(mean.begin() + 1, mean.end()) - mean[0];
    r.upper = mean[0];
    r.lower = r.lambda < 0.0 ? mean[0] + r.rho / (1.0 + r.rho) * r.lambda : mean[0];
    return r;
}

double two_population_residual(const SampleSummary& summary)
{
    require(summary.treatments() == 1, "closed-form residual needs exactly one treatment");
    const auto mean = summary.mean();
    const double diff = mean[1] - mean[0];
    if (diff > 0.0) return 0.0;
    return static_cast<double>(summary.size(0)) / static_cast<double>(summary.total()) * diff;
}

LeastSquaresBound unconstrained_bound_check(const SampleSummary& summary, const MeanParams& params,
                                            const MleFit& fit)
{
    require(params.mu().size() == summary.treatments(), "true means must have s entries");
    const auto mean = summary.mean();
    const auto ssw = summary.ssw();

    double rss = 0.0;
    for (std::size_t i = 0; i < summary.layout().populations(); ++i) {
        const double gap = mean[i] - params.mean(i);
        rss += ssw[i] + static_cast<double>(summary.size(i)) * gap * gap;
    }

    LeastSquaresBound b;
    b.sigma2_hat = fit.sigma2_hat;
    b.true_mean_value = rss / static_cast<double>(summary.total());
    b.slack = b.true_mean_value - b.sigma2_hat;
    b.holds = b.slack >= -1e-10 * std::max(b.true_mean_value, b.sigma2_hat);
    return b;
}

}  // namespace treeorder
