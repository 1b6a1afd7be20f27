// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pxmap {

// SplitMix64 finalizer; used only to derive well-separated seeds.
constexpr uint64_t MixBits(uint64_t v) {
    v += 0x9e3779b97f4a7c15ull;
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
    return v ^ (v >> 31);
}

// Hashes an ordered key tuple (master seed, record index, retry, ...) into
// a stream seed. Distinct keys give statistically independent streams, so
// records can be produced in any order on any worker.
constexpr uint64_t DeriveSeed(std::initializer_list<uint64_t> key) {
    uint64_t h = 0x243f6a8885a308d3ull;
    for (uint64_t k : key) h = MixBits(h ^ MixBits(k));
    return h;
}

// A single-owner pseudo random stream. Never shared between threads.
class RandomStream {
  public:
    explicit RandomStream(uint64_t seed) : engine_(seed) {}

    // Uniform in [a, b).
    double Uniform(double a = 0, double b = 1) {
        return std::uniform_real_distribution<double>(a, b)(engine_);
    }
    // Uniform integer in [lo, hi], both inclusive.
    int UniformInt(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    double Normal(double mean, double stddev) { return mean + stddev * unit_normal_(engine_); }
    bool Bernoulli(double p) { return Uniform() < p; }

    std::mt19937_64 &engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> unit_normal_{0.0, 1.0};
};

}  // namespace pxmap
