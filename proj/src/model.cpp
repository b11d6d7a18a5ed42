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

#include "treeorder/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "treeorder/error.hpp"

namespace treeorder {

PopulationLayout::PopulationLayout(std::size_t control_size, std::vector<std::size_t> treatment_sizes)
    : control_size_(control_size), treatment_sizes_(std::move(treatment_sizes)), total_(0)
{
    require(!treatment_sizes_.empty(), "need s >= 1 treatment population");
    require(control_size_ >= 1, "control sample size must be >= 1");
    total_ = control_size_;
    for (std::size_t i = 0; i < treatment_sizes_.size(); ++i) {
        if (treatment_sizes_[i] == 0) {
            throw ValidationError("treatment population " + std::to_string(i + 1) + " is empty");
        }
        total_ += treatment_sizes_[i];
    }
}

std::size_t PopulationLayout::size(std::size_t index) const
{
    if (index == 0) return control_size_;
    return treatment_sizes_.at(index - 1);
}

bool PopulationLayout::equal_treatment_sizes() const noexcept
{
    return std::all_of(treatment_sizes_.begin(), treatment_sizes_.end(),
                       [&](std::size_t n) { return n == treatment_sizes_.front(); });
}

std::size_t total_sample_size(const PopulationLayout& layout) noexcept
{
    return layout.total();
}

MeanParams::MeanParams(double mu0, std::vector<double> mu, double sigma2, double bound)
    : mu0_(mu0), mu_(std::move(mu)), sigma2_(sigma2), bound_(bound)
{
    require(!mu_.empty(), "need s >= 1 treatment means");
    require(std::isfinite(sigma2_) && sigma2_ > 0.0, "sigma2 must be positive");
    require(std::isfinite(mu0_) && mu0_ <= bound_, "mu0 exceeds the bound B");
    for (std::size_t i = 0; i < mu_.size(); ++i) {
        if (std::isfinite(mu_[i]) && mu0_ <= mu_[i] && mu_[i] <= bound_) continue;
        const auto label = "mu[" + std::to_string(i + 1) + "]";
        require(std::isfinite(mu_[i]), label + " is not finite");
        require(mu0_ <= mu_[i], label + " violates the tree order mu0 <= mu_i");
        throw ValidationError(label + " exceeds the bound B");
    }
}

SampleSummary::SampleSummary(PopulationLayout layout, std::vector<double> mean, std::vector<double> ssw)
    : layout_(std::move(layout)), mean_(std::move(mean)), ssw_(std::move(ssw))
{
    const std::size_t k = layout_.populations();
    require(mean_.size() == k, "mean vector must have s+1 entries");
    require(ssw_.size() == k, "ssw vector must have s+1 entries");
    for (std::size_t i = 0; i < k; ++i) {
        const bool ssw_ok = std::isfinite(ssw_[i]) && ssw_[i] >= 0.0 && (layout_.size(i) > 1 || ssw_[i] == 0.0);
        if (std::isfinite(mean_[i]) && ssw_ok) continue;
        const auto index = std::to_string(i);
        require(std::isfinite(mean_[i]), "sample mean " + index + " is not finite");
        require(std::isfinite(ssw_[i]) && ssw_[i] >= 0.0, "ssw " + index + " must be finite and nonnegative");
        throw ValidationError("ssw " + index + " must be 0 for a single observation");
    }
}

namespace {

PopulationLayout layout_of(const std::vector<std::vector<double>>& populations)
{
    require(populations.size() >= 2, "need s >= 1 treatment population");
    std::vector<std::size_t> sizes;
    sizes.reserve(populations.size() - 1);
    for (std::size_t i = 1; i < populations.size(); ++i) sizes.push_back(populations[i].size());
    return PopulationLayout(populations[0].size(), std::move(sizes));
}

}  // namespace

Dataset::Dataset(std::vector<std::vector<double>> populations)
    : populations_(std::move(populations)), layout_(layout_of(populations_))
{
}

SampleSummary summarize(const Dataset& data)
{
    const std::size_t k = data.populations();
    std::vector<double> mean(k), ssw(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto xs = data.population(i);
        const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        // Two-pass: a sum of squares, nonnegative without clamping.
        double ss = 0.0;
        for (double x : xs) ss += (x - m) * (x - m);
        mean[i] = m;
        ssw[i] = ss;
    }
    return SampleSummary(data.layout(), std::move(mean), std::move(ssw));
}

}  // namespace treeorder
