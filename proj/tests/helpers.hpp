#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "tmfusion/dataset.hpp"
#include "tmfusion/tsetlin.hpp"

namespace testing {

using Bits = std::vector<std::uint8_t>;

/// Sets exactly the given literals to include (N+1); all others exclude (N).
inline void set_includes(tmfusion::ClauseState& clause, std::initializer_list<int> literals) {
    const int n = clause.ta_states();
    for (std::size_t k = 0; k < clause.num_literals(); ++k) clause.set_state(k, n);
    for (int k : literals) clause.set_state(static_cast<std::size_t>(k), n + 1);
}

inline tmfusion::HyperParams small_params(int m = 4, int t = 2, double s = 3.9, int n = 10) {
    tmfusion::HyperParams p;
    p.clauses_per_class = m;
    p.threshold = t;
    p.specificity = s;
    p.ta_states = n;
    return p;
}

/// The four XOR rows, each repeated `copies` times.
inline tmfusion::BinaryDataset xor_data(int copies = 1) {
    tmfusion::BinaryDataset d(std::vector<std::string>{"x1", "x2"});
    for (int c = 0; c < copies; ++c) {
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const Bits row{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)};
                d.add_row(row, a ^ b);
            }
    }
    return d;
}

}  // namespace testing
