// Copyright 2026 The feynroute Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEYNROUTE_RNG_HPP
#define FEYNROUTE_RNG_HPP

#include <cstdint>

namespace feynroute {

/// Counter-based generator: output k of stream s under seed x is
/// splitmix64(key(x, s) + golden * (k + 1)), where key applies the same
/// finalizer to the seed and stream. Draws are addressed by counter, so any
/// partition of the counter range across workers reproduces a serial run
/// bit for bit.
class CounterRng {
   public:
    static constexpr const char *kAlgorithm = "splitmix64-counter";

    explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream), key_(mix(seed ^ mix(stream + kGolden))) {
    }

    constexpr std::uint64_t bits(std::uint64_t counter) const {
        return mix(key_ + kGolden * (counter + 1));
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// An independent stream derived from this one.
    constexpr CounterRng split(std::uint64_t stream) const {
        return CounterRng(key_, stream);
    }

    constexpr std::uint64_t seed() const {
        return seed_;
    }
    constexpr std::uint64_t stream() const {
        return stream_;
    }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

   private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
};

}  // namespace feynroute

#endif  // FEYNROUTE_RNG_HPP
