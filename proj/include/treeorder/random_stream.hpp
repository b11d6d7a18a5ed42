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
#include <limits>
#include <random>

#include "treeorder/philox.hpp"

namespace treeorder {

/// Reproducible substream of a Philox4x32-10 generator. The 128-bit counter
/// is laid out as (block, stream tag, replication lo, replication hi) and
/// the key is the experiment seed, so every (seed, replication, tag) triple
/// owns a disjoint slice of the counter space.
///
/// Satisfies UniformRandomBitGenerator with 64-bit output.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t replication, std::uint32_t tag) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    double normal() { return normal_(*this); }
    /// sum of `dof` squared standard normals; 0 when dof == 0.
    double chi_square(std::size_t dof);

    /// Number of 128-bit blocks consumed so far.
    std::uint64_t blocks_used() const noexcept { return block_; }

private:
    void refill();

    PhiloxKey key_;
    std::uint32_t tag_;
    std::uint64_t replication_;
    std::uint64_t block_ = 0;
    PhiloxCounter buffer_{};
    int position_ = 4;
    std::normal_distribution<double> normal_{};
};

/// Independent stream determined only by (seed, replication_index, s).
RandomStream derive_stream(std::uint64_t seed, std::uint64_t replication_index, std::size_t s);

}  // namespace treeorder
