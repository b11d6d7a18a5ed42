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

#include "treeorder/simulate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "treeorder/error.hpp"

namespace treeorder {

namespace {

// Ceiling that ignores relative round-off above an exact integer, so that
// pow(10, 2) = 100.00000000000001 still maps to 100.
std::size_t ceil_size(double x)
{
    require(std::isfinite(x) && x < 9.0e15, "sample size overflow");
    const double below = std::floor(x);
    const double rounded = (x - below <= 1e-12 * std::max(1.0, x)) ? below : std::ceil(x);
    return static_cast<std::size_t>(std::max(1.0, rounded));
}

void validate_term(const SizeTerm& t)
{
    require(std::isfinite(t.coef) && t.coef > 0.0, "schedule coefficient must be positive");
    require(std::isfinite(t.s_power) && t.s_power >= 0.0, "schedule s_power must be >= 0");
    require(std::isfinite(t.log_power) && t.log_power >= 0.0, "schedule log_power must be >= 0");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::size_t SizeSchedule::at(std::size_t s) const
{
    const double sd = static_cast<double>(s);
    const double log_s = std::log(sd);
    std::size_t n = 1;
    for (const auto& t : terms) {
        const double value = t.coef * std::pow(sd, t.s_power) * std::pow(log_s, t.log_power);
        const std::size_t factor = ceil_size(value);
        require(n <= std::numeric_limits<std::size_t>::max() / factor, "sample size overflow");
        n *= factor;
    }
    return n;
}

double SizeSchedule::s_order() const noexcept
{
    double a = 0.0;
    for (const auto& t : terms) a += t.s_power;
    return a;
}

double SizeSchedule::log_order() const noexcept
{
    double b = 0.0;
    for (const auto& t : terms) b += t.log_power;
    return b;
}

std::string regime_name(const RegimeSpec& regime)
{
    return std::visit(overloaded{
                          [](const regime::TwoPopulation&) { return std::string("two_population"); },
                          [](const regime::FastTotal&) { return std::string("fast_total"); },
                          [](const regime::ControlHeavy&) { return std::string("control_heavy"); },
                          [](const regime::NeymanScott&) { return std::string("neyman_scott"); },
                          [](const regime::LogSquared&) { return std::string("log_squared"); },
                          [](const regime::LinearControl&) { return std::string("linear_control"); },
                      },
                      regime);
}

void validate(const RegimeSpec& regime)
{
    std::visit(overloaded{
                   [](const regime::TwoPopulation& r) {
                       require(r.m >= 1 && r.mprime >= 1, "two_population needs m >= 1 and mprime >= 1");
                   },
                   [](const regime::FastTotal& r) {
                       for (const auto& t : r.control.terms) validate_term(t);
                       for (const auto& t : r.treatment.terms) validate_term(t);
                       // s/N -> 0 iff n -> infinity or n0/s -> infinity.
                       const bool treatment_grows = r.treatment.s_order() > 0.0 || r.treatment.log_order() > 0.0;
                       const double a = r.control.s_order();
                       const bool control_outgrows_s = a > 1.0 || (a == 1.0 && r.control.log_order() > 0.0);
                       require(treatment_grows || control_outgrows_s,
                               "fast_total schedules must satisfy s/N -> 0");
                   },
                   [](const regime::ControlHeavy& r) {
                       require(std::isfinite(r.exponent) && r.exponent > 1.0, "control_heavy needs exponent a > 1");
                       require(r.m >= 1, "control_heavy needs m >= 1");
                   },
                   [](const regime::NeymanScott& r) { require(r.m >= 1, "neyman_scott needs m >= 1"); },
                   [](const regime::LogSquared&) {},
                   [](const regime::LinearControl& r) {
                       require(std::isfinite(r.c) && r.c > 0.0, "linear_control needs c > 0");
                       require(r.m >= 1, "linear_control needs m >= 1");
                   },
               },
               regime);
}

SampleSizes sample_sizes(const RegimeSpec& regime, std::size_t s)
{
    require(s >= 1, "s must be >= 1");
    validate(regime);
    const double sd = static_cast<double>(s);
    return std::visit(
        overloaded{
            [&](const regime::TwoPopulation& r) { return SampleSizes{r.m, r.mprime * s, 1}; },
            [&](const regime::FastTotal& r) { return SampleSizes{r.control.at(s), r.treatment.at(s), s}; },
            [&](const regime::ControlHeavy& r) {
                return SampleSizes{ceil_size(std::pow(sd, r.exponent)), r.m, s};
            },
            [&](const regime::NeymanScott& r) { return SampleSizes{r.m, r.m, s}; },
            [&](const regime::LogSquared&) {
                const double l = std::log(sd);
                const std::size_t n = ceil_size(l * l);
                return SampleSizes{n, n, s};
            },
            [&](const regime::LinearControl& r) { return SampleSizes{ceil_size(r.c * sd), r.m, s}; },
        },
        regime);
}

PopulationLayout layout_for(const RegimeSpec& regime, std::size_t s)
{
    const auto sizes = sample_sizes(regime, s);
    return PopulationLayout(sizes.control, std::vector<std::size_t>(sizes.treatments, sizes.per_treatment));
}

MeanParams mean_params(const ScenarioConfig& config, std::size_t treatments)
{
    return std::visit(
        overloaded{
            [&](const mean_model::AllZero&) {
                return MeanParams(0.0, std::vector<double>(treatments, 0.0), config.sigma2, config.bound);
            },
            [&](const mean_model::ConstantGap& m) {
                return MeanParams(m.mu0, std::vector<double>(treatments, m.mu0 + m.gap), config.sigma2,
                                  config.bound);
            },
            [&](const mean_model::Explicit& m) {
                require(m.mu.size() == treatments, "explicit mean vector has " + std::to_string(m.mu.size()) +
                                                       " treatment means, layout needs " +
                                                       std::to_string(treatments));
                return MeanParams(m.mu0, m.mu, config.sigma2, config.bound);
            },
        },
        config.means);
}

void validate(const ScenarioConfig& config)
{
    validate(config.regime);
    require(std::isfinite(config.sigma2) && config.sigma2 > 0.0, "sigma2 must be positive");
    require(std::isfinite(config.bound) && config.bound > 0.0, "bound B must be positive");
    if (const auto* gap = std::get_if<mean_model::ConstantGap>(&config.means)) {
        require(gap->gap >= 0.0, "constant_gap needs gap >= 0");
    }
    // Checks A1-A2 for the pattern at one treatment; explicit vectors are
    // checked against their own length.
    if (const auto* ex = std::get_if<mean_model::Explicit>(&config.means)) {
        mean_params(config, ex->mu.size());
    } else {
        mean_params(config, 1);
    }
}

SampleSummary draw_summary(const ScenarioConfig& config, std::size_t s, RandomStream& stream)
{
    auto layout = layout_for(config.regime, s);
    const auto params = mean_params(config, layout.treatments());
    const double sigma = std::sqrt(config.sigma2);

    const std::size_t k = layout.populations();
    std::vector<double> mean(k), ssw(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto n = layout.size(i);
        mean[i] = params.mean(i) + sigma / std::sqrt(static_cast<double>(n)) * stream.normal();
        ssw[i] = config.sigma2 * stream.chi_square(n - 1);
    }
    return SampleSummary(std::move(layout), std::move(mean), std::move(ssw));
}

Dataset draw_dataset(const ScenarioConfig& config, std::size_t s, RandomStream& stream, std::size_t cap)
{
    const auto layout = layout_for(config.regime, s);
    require(layout.total() <= cap, "dataset of N=" + std::to_string(layout.total()) + " exceeds cap " +
                                       std::to_string(cap));
    const auto params = mean_params(config, layout.treatments());
    const double sigma = std::sqrt(config.sigma2);

    std::vector<std::vector<double>> populations(layout.populations());
    for (std::size_t i = 0; i < populations.size(); ++i) {
        auto& xs = populations[i];
        xs.resize(layout.size(i));
        for (auto& x : xs) x = params.mean(i) + sigma * stream.normal();
    }
    return Dataset(std::move(populations));
}

}  // namespace treeorder
