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

#include "treeorder/random_stream.hpp"

#include <string>

#include "treeorder/error.hpp"

namespace treeorder {

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t replication, std::uint32_t tag) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      tag_(tag),
      replication_(replication)
{
}

void RandomStream::refill()
{
    if (block_ > std::numeric_limits<std::uint32_t>::max()) {
        throw std::overflow_error("random stream exhausted its 2^32 block budget");
    }
    const PhiloxCounter counter{static_cast<std::uint32_t>(block_), tag_,
                                static_cast<std::uint32_t>(replication_),
                                static_cast<std::uint32_t>(replication_ >> 32)};
    buffer_ = philox4x32_10(counter, key_);
    ++block_;
    position_ = 0;
}

RandomStream::result_type RandomStream::operator()()
{
    if (position_ >= 4) refill();
    const std::uint64_t lo = buffer_[position_];
    const std::uint64_t hi = buffer_[position_ + 1];
    position_ += 2;
    return lo | (hi << 32);
}

double RandomStream::chi_square(std::size_t dof)
{
    if (dof == 0) return 0.0;
    std::chi_squared_distribution<double> dist(static_cast<double>(dof));
    return dist(*this);
}

RandomStream derive_stream(std::uint64_t seed, std::uint64_t replication_index, std::size_t s)
{
    require(s <= std::numeric_limits<std::uint32_t>::max(), "s too large for stream tag: " + std::to_string(s));
    return RandomStream(seed, replication_index, static_cast<std::uint32_t>(s));
}

}  // namespace treeorder
