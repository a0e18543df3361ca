// Copyright (c) 2026 blursynth contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BLURSYNTH_RNG_HPP
#define BLURSYNTH_RNG_HPP

#include <cmath>
#include <cstdint>

namespace blursynth::rng {

// Counter-based random numbers. Every draw is a pure function of
// (stream, counter), so work items can be evaluated in any order -- or in
// parallel -- and still produce identical output. Streams are split from a
// seed the same way (splitmix64 evaluated at an arbitrary counter).

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// splitmix64 output for state `stream` advanced `counter + 1` times.
constexpr std::uint64_t at(std::uint64_t stream, std::uint64_t counter) {
    return mix64(stream + kGolden * (counter + 1));
}

// Derives an independent child stream; keyed off a distinct tag so stream
// derivation never collides with value draws on the parent.
constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t key) {
    return mix64((seed ^ 0xA24BAED4963EE407ull) + kGolden * (key + 1));
}

// Uniform in (0, 1]; never returns 0 so it is safe under log().
inline double uniform01(std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>((at(stream, counter) >> 11) + 1) * 0x1.0p-53;
}

// One standard-normal sample per counter (Box-Muller, cosine branch).
// Consumes uniform counters 2c and 2c+1.
inline double standard_normal(std::uint64_t stream, std::uint64_t counter) {
    const double u1 = uniform01(stream, 2 * counter);
    const double u2 = uniform01(stream, 2 * counter + 1);
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace blursynth::rng

#endif
