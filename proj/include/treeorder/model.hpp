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

namespace treeorder {

/// Sample-size structure of one control population (index 0) and s >= 1
/// treatment populations.
class PopulationLayout {
public:
    PopulationLayout(std::size_t control_size, std::vector<std::size_t> treatment_sizes);

    std::size_t treatments() const noexcept { return treatment_sizes_.size(); }
    std::size_t control_size() const noexcept { return control_size_; }
    std::span<const std::size_t> treatment_sizes() const noexcept { return treatment_sizes_; }
    std::size_t total() const noexcept { return total_; }

    /// Size of population `index`, where 0 is the control.
    std::size_t size(std::size_t index) const;

    std::size_t populations() const noexcept { return treatment_sizes_.size() + 1; }
    bool equal_treatment_sizes() const noexcept;

    friend bool operator==(const PopulationLayout&, const PopulationLayout&) = default;

private:
    std::size_t control_size_;
    std::vector<std::size_t> treatment_sizes_;
    std::size_t total_;
};

std::size_t total_sample_size(const PopulationLayout& layout) noexcept;

/// True means under the tree order mu0 <= mu_i <= bound, common variance sigma2.
class MeanParams {
public:
    MeanParams(double mu0, std::vector<double> mu, double sigma2, double bound);

    double mu0() const noexcept { return mu0_; }
    std::span<const double> mu() const noexcept { return mu_; }
    double sigma2() const noexcept { return sigma2_; }
    double bound() const noexcept { return bound_; }

    /// Mean of population `index`, 0 being the control.
    double mean(std::size_t index) const { return index == 0 ? mu0_ : mu_.at(index - 1); }

private:
    double mu0_;
    std::vector<double> mu_;
    double sigma2_;
    double bound_;
};

/// Sufficient statistics per population: sample mean and within-group sum of
/// squared deviations. Index 0 is the control.
class SampleSummary {
public:
    SampleSummary(PopulationLayout layout, std::vector<double> mean, std::vector<double> ssw);

    const PopulationLayout& layout() const noexcept { return layout_; }
    std::span<const double> mean() const noexcept { return mean_; }
    std::span<const double> ssw() const noexcept { return ssw_; }

    std::size_t treatments() const noexcept { return layout_.treatments(); }
    std::size_t size(std::size_t index) const { return layout_.size(index); }
    std::size_t total() const noexcept { return layout_.total(); }

private:
    PopulationLayout layout_;
    std::vector<double> mean_;
    std::vector<double> ssw_;
};

/// Raw observations, one vector per population (index 0 is the control).
class Dataset {
public:
    explicit Dataset(std::vector<std::vector<double>> populations);

    const PopulationLayout& layout() const noexcept { return layout_; }
    std::span<const double> population(std::size_t index) const { return populations_.at(index); }
    std::size_t populations() const noexcept { return populations_.size(); }

private:
    std::vector<std::vector<double>> populations_;
    PopulationLayout layout_;
};

SampleSummary summarize(const Dataset& data);

}  // namespace treeorder
