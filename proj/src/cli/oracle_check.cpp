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

#include "treeorder/cli/oracle_check.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "treeorder/error.hpp"
#include "treeorder/estimator.hpp"
#include "treeorder/random_stream.hpp"

namespace treeorder::cli {

namespace {

constexpr std::size_t kMaxMessages = 10;

Dataset random_dataset(RandomStream& rng, std::size_t s, bool equal_sizes)
{
    std::uniform_int_distribution<std::size_t> size_dist(1, 10);
    std::uniform_real_distribution<double> centre_dist(-5.0, 5.0);
    const std::size_t shared = size_dist(rng);

    std::vector<std::vector<double>> pops(s + 1);
    for (std::size_t i = 0; i <= s; ++i) {
        const std::size_t n = (equal_sizes && i > 0) ? shared : size_dist(rng);
        const double centre = centre_dist(rng);
        pops[i].resize(n);
        for (auto& x : pops[i]) x = centre + rng.normal();
    }
    return Dataset(std::move(pops));
}

}  // namespace

OracleCheckReport oracle_check(std::size_t trials, std::size_t max_s, std::uint64_t seed,
                               const Mu0Estimator& estimator)
{
    require(max_s >= 1 && max_s <= kBruteForceMaxTreatments, "max_s must lie in [1, 20]");
    OracleCheckReport report;
    report.trials = trials;

    for (std::size_t t = 0; t < trials; ++t) {
        auto rng = derive_stream(seed, t, 0);
        std::uniform_int_distribution<std::size_t> s_dist(1, max_s);
        const std::size_t s = s_dist(rng);

        std::vector<std::string> problems;
        const Dataset data = random_dataset(rng, s, false);
        const SampleSummary summary = summarize(data);
        const double xbar0 = summary.mean()[0];

        const double mu0_hat = estimator(summary);
        const double exact = mle_mu0_bruteforce(summary);
        const double discrepancy = std::abs(mu0_hat - exact);
        report.max_mu0_discrepancy = std::max(report.max_mu0_discrepancy, discrepancy);
        if (!(discrepancy <= 1e-12 * std::max(1.0, std::abs(xbar0)))) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "estimate " << mu0_hat << " differs from enumeration " << exact;
            problems.push_back(msg.str());
        }

        std::vector<double> mu_hat(s);
        for (std::size_t i = 0; i < s; ++i) mu_hat[i] = std::max(mu0_hat, summary.mean()[i + 1]);
        if (mu0_hat > xbar0 + 1e-12 * std::max(1.0, std::abs(xbar0))) problems.push_back("mu0_hat exceeds xbar0");

        // Raw-data residual sum of squares about the fitted means.
        double rss = 0.0;
        for (std::size_t i = 0; i <= s; ++i) {
            const double centre = i == 0 ? mu0_hat : mu_hat[i - 1];
            for (double x : data.population(i)) rss += (x - centre) * (x - centre);
        }
        const double direct = rss / static_cast<double>(summary.total());
        const Decomposition terms = decompose(summary, mu0_hat, mu_hat);
        if (std::abs(terms.sum() - direct) > 1e-10 * std::max(direct, 1e-300)) {
            problems.push_back("decomposition does not match the raw-data variance");
        }

        const SampleSummary equal = summarize(random_dataset(rng, s, true));
        const double eq_hat = estimator(equal);
        const auto bounds = mu0_bounds(equal);
        const double tol = 1e-12 * std::max(1.0, std::abs(bounds.upper));
        if (eq_hat < bounds.lower - tol || eq_hat > bounds.upper + tol) {
            problems.push_back("mu0_hat outside [lower, xbar0] on an equal-size instance");
        }

        if (summary.total() >= 2) {
            std::uniform_real_distribution<double> centre_dist(-5.0, 5.0);
            std::uniform_real_distribution<double> gap_dist(0.0, 2.0);
            const double mu0 = centre_dist(rng);
            std::vector<double> mu(s);
            for (auto& m : mu) m = mu0 + gap_dist(rng);
            const MeanParams params(mu0, mu, 1.0, mu0 + 2.0);
            MleFit fit;
            fit.mu0_hat = mu0_hat;
            fit.mu_hat = mu_hat;
            fit.terms = terms;
            fit.sigma2_hat = terms.sum();
            if (!unconstrained_bound_check(summary, params, fit).holds) {
                problems.push_back("sigma2_hat exceeds the least-squares bound");
            }
        }

        if (!problems.empty()) {
            ++report.failures;
            for (const auto& p : problems) {
                if (report.messages.size() < kMaxMessages) {
                    report.messages.push_back("trial " + std::to_string(t) + " (s=" + std::to_string(s) + "): " + p);
                }
            }
        }
    }
    return report;
}

OracleCheckReport oracle_check(std::size_t trials, std::size_t max_s, std::uint64_t seed)
{
    return oracle_check(trials, max_s, seed, [](const SampleSummary& s) { return mle_mu0(s); });
}

}  // namespace treeorder::cli
