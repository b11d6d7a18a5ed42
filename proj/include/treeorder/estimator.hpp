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
#include <span>
#include <vector>

#include "treeorder/model.hpp"

namespace treeorder {

/// Terms of the variance MLE split into within-group scatter and the
/// adjustment caused by the order restriction. Each term is already divided
/// by the total sample size N.
struct Decomposition {
    double within_control = 0.0;        // I1 = ssw[0] / N
    double control_adjustment = 0.0;    // I2 = n0 (xbar0 - mu0_hat)^2 / N
    double within_treatments = 0.0;     // I3 = sum_i ssw[i] / N
    double treatment_adjustment = 0.0;  // I4 = sum_i n_i (xbar_i - mu_hat_i)^2 / N

    double sum() const noexcept
    {
        return within_control + control_adjustment + within_treatments + treatment_adjustment;
    }
    double penalty() const noexcept { return control_adjustment + treatment_adjustment; }

    friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

struct MeanEstimates {
    double mu0 = 0.0;
    std::vector<double> mu;  // s entries, treatment 1..s
};

struct MleFit {
    double mu0_hat = 0.0;
    std::vector<double> mu_hat;
    double sigma2_hat = 0.0;
    Decomposition terms;
    double xi = 0.0;
    std::size_t total_size = 0;
};

struct BoundsReport {
    double rho = 0.0;     // s n / n0
    double lambda = 0.0;  // min_i (xbar_i - xbar0)
    double lower = 0.0;
    double upper = 0.0;   // xbar0
};

struct LeastSquaresBound {
    double sigma2_hat = 0.0;
    double true_mean_value = 0.0;  // (1/N) sum_ij (X_ij - mu_i)^2 from sufficient statistics
    double slack = 0.0;            // true_mean_value - sigma2_hat
    bool holds = false;
};

inline constexpr std::size_t kBruteForceMaxTreatments = 20;

/// Constrained MLE of the control mean: the minimum, over all subsets of
/// treatments, of the size-weighted pooled mean of the control and the
/// subset. Solved by a prefix scan over treatments sorted by sample mean.
double mle_mu0(const SampleSummary& summary);

/// Literal 2^s enumeration of the same minimum. Reference only.
double mle_mu0_bruteforce(const SampleSummary& summary,
                          std::size_t max_treatments = kBruteForceMaxTreatments);

MeanEstimates mle_means(const SampleSummary& summary);

Decomposition decompose(const SampleSummary& summary, double mu0_hat, std::span<const double> mu_hat);

/// sqrt(N) (I2 + I4).
double xi_statistic(const SampleSummary& summary, double mu0_hat, std::span<const double> mu_hat);

/// Full fit: means, variance MLE, its decomposition and the xi statistic.
/// Requires N >= 2.
MleFit mle_variance(const SampleSummary& summary);

/// Lower/upper bounds on mu0_hat. Requires equal treatment sample sizes.
BoundsReport mu0_bounds(const SampleSummary& summary);

/// xbar1 - mu1_hat for a single treatment, in closed form.
double two_population_residual(const SampleSummary& summary);

/// Checks sigma2_hat against the residual sum of squares about the true
/// (tree-ordered) means, which the least-squares fit can never exceed.
LeastSquaresBound unconstrained_bound_check(const SampleSummary& summary, const MeanParams& params,
                                            const MleFit& fit);

}  // namespace treeorder
