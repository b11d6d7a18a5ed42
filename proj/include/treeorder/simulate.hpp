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
#include <string>
#include <variant>
#include <vector>

#include "treeorder/model.hpp"
#include "treeorder/random_stream.hpp"

namespace treeorder {

/// One factor ceil(coef * s^s_power * (log s)^log_power), floored at 1.
struct SizeTerm {
    double coef = 1.0;
    double s_power = 0.0;
    double log_power = 0.0;

    friend bool operator==(const SizeTerm&, const SizeTerm&) = default;
};

/// Sample size as a product of independently rounded terms. An empty
/// schedule is the constant 1.
struct SizeSchedule {
    std::vector<SizeTerm> terms;

    std::size_t at(std::size_t s) const;
    /// Asymptotic order s^a (log s)^b of the schedule.
    double s_order() const noexcept;
    double log_order() const noexcept;

    friend bool operator==(const SizeSchedule&, const SizeSchedule&) = default;
};

namespace regime {

/// Single treatment: n0 = m, n1 = mprime * s.
struct TwoPopulation {
    std::size_t m = 1;
    std::size_t mprime = 1;
};

/// Arbitrary schedules with s / N -> 0.
struct FastTotal {
    SizeSchedule control;
    SizeSchedule treatment;
};

/// n0 = ceil(s^exponent), n = m, exponent > 1.
struct ControlHeavy {
    double exponent = 2.0;
    std::size_t m = 1;
};

/// n0 = n = m.
struct NeymanScott {
    std::size_t m = 2;
};

/// n0 = n = ceil((log s)^2).
struct LogSquared {};

/// n0 = ceil(c s), n = m.
struct LinearControl {
    double c = 1.0;
    std::size_t m = 100;
};

}  // namespace regime

using RegimeSpec = std::variant<regime::TwoPopulation, regime::FastTotal, regime::ControlHeavy,
                                regime::NeymanScott, regime::LogSquared, regime::LinearControl>;

std::string regime_name(const RegimeSpec& regime);

namespace mean_model {

/// Every mean 0.
struct AllZero {};

/// mu0 for the control, mu0 + gap for every treatment.
struct ConstantGap {
    double mu0 = 0.0;
    double gap = 0.0;
};

/// Fixed vector; the number of treatments must match at draw time.
struct Explicit {
    double mu0 = 0.0;
    std::vector<double> mu;
};

}  // namespace mean_model

using MeanModel = std::variant<mean_model::AllZero, mean_model::ConstantGap, mean_model::Explicit>;

struct ScenarioConfig {
    RegimeSpec regime = regime::NeymanScott{};
    MeanModel means = mean_model::AllZero{};
    double sigma2 = 1.0;
    double bound = 1.0;
    std::uint64_t seed = 0;
};

struct SampleSizes {
    std::size_t control = 0;
    std::size_t per_treatment = 0;
    std::size_t treatments = 0;  // 1 for TwoPopulation, s otherwise
};

/// Throws ValidationError on m < 1, exponent <= 1, c <= 0 or a schedule
/// whose total does not outgrow s.
void validate(const RegimeSpec& regime);
/// Validates the regime, sigma2 > 0 and the mean model against the tree
/// order and the bound.
void validate(const ScenarioConfig& config);

SampleSizes sample_sizes(const RegimeSpec& regime, std::size_t s);
PopulationLayout layout_for(const RegimeSpec& regime, std::size_t s);

MeanParams mean_params(const ScenarioConfig& config, std::size_t treatments);

/// Draws (xbar_i, ssw_i) from their exact joint law: xbar_i ~ N(mu_i, sigma2/n_i)
/// and ssw_i ~ sigma2 chi2(n_i - 1), independently.
SampleSummary draw_summary(const ScenarioConfig& config, std::size_t s, RandomStream& stream);

inline constexpr std::size_t kDefaultDatasetCap = 10'000'000;

/// Raw observations X_ij ~ N(mu_i, sigma2). Throws when N exceeds `cap`.
Dataset draw_dataset(const ScenarioConfig& config, std::size_t s, RandomStream& stream,
                     std::size_t cap = kDefaultDatasetCap);

}  // namespace treeorder
