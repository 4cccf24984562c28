#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace tmfusion {

/// Seeded random stream. Every stochastic routine takes one by reference and
/// consumes draws in a documented order, so runs replay exactly.
///
/// Draw conversions are done here rather than through <random> distributions,
/// whose output is implementation-defined.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// True with probability p (p <= 0 never, p >= 1 always). Consumes one draw.
    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Independent child stream identified by a tag; does not advance this stream.
    Stream split(std::uint64_t tag) const;
    Stream split(std::string_view tag) const;

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace tmfusion
