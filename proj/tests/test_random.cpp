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

#include <algorithm>
#include <random>
#include <unordered_set>

#include "treeorder/philox.hpp"
#include "treeorder/random_stream.hpp"

using namespace treeorder;

static_assert(std::uniform_random_bit_generator<RandomStream>);

TEST_CASE("philox4x32-10 known-answer vectors")
{
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("same triple gives the same stream")
{
    auto a = derive_stream(42, 7, 100);
    auto b = derive_stream(42, 7, 100);
    for (int i = 0; i < 1000; ++i) CHECK(a() == b());
    CHECK(a.normal() == b.normal());
    CHECK(a.chi_square(9) == b.chi_square(9));
}

TEST_CASE("streams for different replications share no outputs")
{
    constexpr int kOutputs = 10'000;
    std::unordered_set<std::uint64_t> seen;
    for (std::uint64_t rep = 0; rep < 8; ++rep) {
        auto stream = derive_stream(1, rep, 50);
        for (int i = 0; i < kOutputs; ++i) seen.insert(stream());
    }
    CHECK(seen.size() == 8u * kOutputs);
}

TEST_CASE("distinct s and seeds give distinct streams")
{
    auto first = [](RandomStream stream) {
        std::vector<std::uint64_t> v(16);
        for (auto& x : v) x = stream();
        return v;
    };
    CHECK(first(derive_stream(1, 0, 10)) != first(derive_stream(1, 0, 50)));
    CHECK(first(derive_stream(1, 0, 10)) != first(derive_stream(2, 0, 10)));
    CHECK(first(derive_stream(1, 0, 10)) != first(derive_stream(1, 1, 10)));
    CHECK_THROWS(derive_stream(1, 0, std::size_t{1} << 33));
}

TEST_CASE("chi-square with zero degrees of freedom is exactly zero")
{
    auto stream = derive_stream(3, 0, 1);
    const auto before = stream.blocks_used();
    CHECK(stream.chi_square(0) == 0.0);
    CHECK(stream.blocks_used() == before);
}

TEST_CASE("normal and chi-square moments")
{
    auto stream = derive_stream(9, 0, 1);
    constexpr int kDraws = 100'000;
    double sum = 0.0, sum2 = 0.0, chi = 0.0;
    for (int i = 0; i < kDraws; ++i) {
        const double z = stream.normal();
        sum += z;
        sum2 += z * z;
        chi += stream.chi_square(4);
    }
    CHECK(std::abs(sum / kDraws) < 0.02);
    CHECK(std::abs(sum2 / kDraws - 1.0) < 0.02);
    CHECK(std::abs(chi / kDraws - 4.0) < 0.05);
}
