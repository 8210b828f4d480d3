#pragma once

#include <vector>

#include "stodec/mass.hpp"
#include "stodec/rng.hpp"
#include "stodec/satisfaction.hpp"

namespace stodec::test {

// The four-symbol example constraint used across the suites: eight rows over
// three size-4 alphabets, one branch per trellis state pair.
inline SatisfactionTable example_table() {
    Alphabet a4{4};
    return SatisfactionTable({a4, a4, a4}, {
                                               {0, 0, 0},
                                               {0, 1, 1},
                                               {1, 3, 2},
                                               {1, 2, 3},
                                               {2, 2, 0},
                                               {2, 3, 1},
                                               {3, 1, 2},
                                               {3, 0, 3},
                                           });
}

inline Mass random_mass(SplitMix64& rng, int size, double lo = 0.05,
                        double hi = 0.95) {
    std::vector<double> v(static_cast<std::size_t>(size));
    for (double& x : v) x = lo + (hi - lo) * rng.next_unit();
    return Mass::normalized(std::move(v));
}

}  // namespace stodec::test
