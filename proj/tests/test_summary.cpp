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

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "treeorder/error.hpp"
#include "treeorder/montecarlo.hpp"
#include "treeorder/summary.hpp"

using namespace treeorder;

namespace {

ReplicationRecord record_with(std::size_t s, double sigma2_hat, std::size_t total = 4)
{
    ReplicationRecord r;
    r.s = s;
    r.total_size = total;
    r.sigma2_hat = sigma2_hat;
    r.terms.within_control = sigma2_hat;
    return r;
}

}  // namespace

TEST_CASE("box summary of 1..5")
{
    const std::vector<double> v = {5, 3, 1, 4, 2};
    const auto b = box_summary(v);
    CHECK(b.count == 5);
    CHECK(b.q1 == 2.0);
    CHECK(b.median == 3.0);
    CHECK(b.q3 == 4.0);
    CHECK(b.whisker_low == 1.0);
    CHECK(b.whisker_high == 5.0);
    CHECK(b.n_outliers == 0);
}

TEST_CASE("box summary of a constant list")
{
    const std::vector<double> v(9, 2.5);
    const auto b = box_summary(v);
    for (double x : {b.q1, b.median, b.q3, b.whisker_low, b.whisker_high}) CHECK(x == 2.5);
    CHECK(b.n_outliers == 0);
}

TEST_CASE("box summary with zero IQR flags the outlier")
{
    const std::vector<double> v = {0, 0, 0, 0, 100};
    const auto b = box_summary(v);
    CHECK(b.whisker_high == 0.0);
    CHECK(b.n_outliers == 1);
    CHECK_THROWS_AS(box_summary(std::vector<double>{}), ValidationError);
}

TEST_CASE("quantile interpolates linearly")
{
    const std::vector<double> v = {1, 2, 3, 4};
    CHECK(quantile(v, 0.0) == 1.0);
    CHECK(quantile(v, 1.0) == 4.0);
    CHECK(quantile(v, 0.5) == 2.5);
    CHECK(quantile(v, 0.25) == 1.75);
}

TEST_CASE("histogram examples")
{
    const std::vector<double> v = {0, 1, 2, 3};
    const auto h = histogram(v, 2);
    CHECK(h.counts == std::vector<std::size_t>{2, 2});
    CHECK(h.bin_edges == std::vector<double>{0.0, 1.5, 3.0});

    const std::vector<double> same(6, 1.0);
    const auto h2 = histogram(same, 3, std::pair{0.0, 3.0});
    CHECK(h2.counts == std::vector<std::size_t>{0, 6, 0});
    const auto h3 = histogram(same, 3);
    CHECK(std::count_if(h3.counts.begin(), h3.counts.end(), [](auto c) { return c > 0; }) == 1);
    CHECK_THROWS_AS(histogram(v, 0), ValidationError);
}

TEST_CASE("histogram conserves counts within range")
{
    std::mt19937_64 rng(4);
    std::normal_distribution<double> normal;
    std::vector<double> v(10'000);
    for (auto& x : v) x = normal(rng);
    const auto h = histogram(v, 50, std::pair{-2.0, 2.0});
    const auto inside = std::count_if(v.begin(), v.end(), [](double x) { return x >= -2.0 && x <= 2.0; });
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == static_cast<std::size_t>(inside));
    const auto full = histogram(v, 50);
    CHECK(std::accumulate(full.counts.begin(), full.counts.end(), std::size_t{0}) == v.size());
}

TEST_CASE("box and histogram are permutation invariant")
{
    std::mt19937_64 rng(8);
    std::vector<double> v(501);
    std::uniform_real_distribution<double> u(-3.0, 7.0);
    for (auto& x : v) x = u(rng);
    const auto b = box_summary(v);
    const auto h = histogram(v, 20);
    std::shuffle(v.begin(), v.end(), rng);
    const auto b2 = box_summary(v);
    CHECK(b2.q1 == b.q1);
    CHECK(b2.median == b.median);
    CHECK(b2.q3 == b.q3);
    CHECK(b2.n_outliers == b.n_outliers);
    CHECK(histogram(v, 20).counts == h.counts);
}

TEST_CASE("clt diagnostics")
{
    std::vector<ReplicationRecord> flat = {record_with(5, 1.0), record_with(5, 1.0), record_with(5, 1.0)};
    const auto d = clt_diagnostics(flat, 1.0);
    CHECK(d.target_variance == 2.0);
    CHECK(d.mean == 0.0);
    CHECK(d.variance == 0.0);

    // sqrt(4) (sigma2_hat - 1) = -1, +1.
    std::vector<ReplicationRecord> two = {record_with(5, 0.5), record_with(5, 1.5)};
    const auto e = clt_diagnostics(two, 1.0);
    CHECK(e.mean == 0.0);
    CHECK(e.variance == doctest::Approx(2.0));

    two[1].s = 6;
    CHECK_THROWS_AS(clt_diagnostics(two, 1.0), ValidationError);
}

TEST_CASE("trend classification")
{
    CHECK(classify_trend(std::vector<double>{4, 2, 1, 0.5}) == Trend::StrictlyDecreasing);
    CHECK(classify_trend(std::vector<double>{4, 2, 2, 0.5}) == Trend::NonIncreasing);
    CHECK(classify_trend(std::vector<double>{1, 1, 1}) == Trend::Constant);
    CHECK(classify_trend(std::vector<double>{1, 2, 2}) == Trend::NonDecreasing);
    CHECK(classify_trend(std::vector<double>{1, 2, 3}) == Trend::StrictlyIncreasing);
    CHECK(classify_trend(std::vector<double>{1, 3, 2}) == Trend::Mixed);
    CHECK(is_non_increasing(Trend::Constant));
    CHECK_FALSE(is_non_increasing(Trend::Mixed));
}

TEST_CASE("halving errors are flagged decreasing")
{
    std::vector<ReplicationRecord> records;
    double err = 0.4;
    for (std::size_t s : {10u, 20u, 40u, 80u}) {
        records.push_back(record_with(s, 1.0 + err));
        records.push_back(record_with(s, 1.0 - err));
        err /= 2.0;
    }
    const auto table = consistency_diagnostics(records, ConsistencyOptions{1.0, std::nullopt});
    CHECK(table.rows.size() == 4);
    CHECK(table.sigma2_error == Trend::StrictlyDecreasing);
    CHECK(table.rows[0].sigma2_error.median == doctest::Approx(0.4));
    CHECK_FALSE(table.neyman_scott_error.has_value());
}

TEST_CASE("Neyman-Scott target for m = 5")
{
    std::vector<ReplicationRecord> records = {record_with(10, 0.8), record_with(20, 0.8)};
    const auto table = consistency_diagnostics(records, ConsistencyOptions{1.0, 5});
    REQUIRE(table.rows[0].neyman_scott_error.has_value());
    CHECK(table.rows[0].neyman_scott_error->median == doctest::Approx(0.0).scale(1.0));
    CHECK(table.rows[0].sigma2_error.median == doctest::Approx(0.2));
}

TEST_CASE("grouping requires ordered records")
{
    std::vector<ReplicationRecord> records = {record_with(10, 1.0), record_with(5, 1.0)};
    CHECK_THROWS_AS(group_by_s(records), ValidationError);
}

TEST_CASE("two-population regime error median shrinks across the grid")
{
    ExperimentPlan plan;
    plan.scenario.regime = regime::TwoPopulation{4, 3};
    plan.scenario.seed = 21;
    plan.s_grid = {10, 100, 1000, 10000};
    plan.replications = 400;
    const auto records = run_experiment(plan);
    const auto table = consistency_diagnostics(records, ConsistencyOptions{1.0, std::nullopt});
    CHECK(table.sigma2_error == Trend::StrictlyDecreasing);
}
