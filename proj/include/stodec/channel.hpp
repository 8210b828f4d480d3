#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "stodec/errors.hpp"
#include "stodec/mass.hpp"
#include "stodec/rng.hpp"

namespace stodec {

// Antipodal transmission over AWGN with unit-energy symbols. Bit 0 maps to
// +1, bit 1 to -1; sigma^2 = 1 / (2 * rate * 10^(ebn0_db/10)) so Eb/N0 is
// rate-adjusted.
struct ChannelConfig {
    double ebn0_db = 0.0;
    double rate = 1.0;
    double sigma = 0.0;

    static ChannelConfig from_ebn0(double ebn0_db, double rate) {
        if (!(rate > 0.0 && rate <= 1.0))
            throw ConfigInvalid("channel rate must lie in (0,1]");
        ChannelConfig cfg;
        cfg.ebn0_db = ebn0_db;
        cfg.rate = rate;
        cfg.sigma = std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0)));
        return cfg;
    }
};

inline std::vector<double> transmit(const std::vector<int>& codeword,
                                    const ChannelConfig& cfg, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::normal_distribution<double> noise(0.0, cfg.sigma);
    std::vector<double> y;
    y.reserve(codeword.size());
    for (int bit : codeword) {
        if (bit != 0 && bit != 1) throw ConfigInvalid("transmit: bits must be 0 or 1");
        y.push_back((1.0 - 2.0 * bit) + noise(rng));
    }
    return y;
}

// Posterior bit mass from one channel observation:
// P(bit=0 | y) = 1 / (1 + exp(-2y/sigma^2)), clamped away from {0,1}.
inline Mass to_evidence(double y, const ChannelConfig& cfg) {
    double llr = 2.0 * y / (cfg.sigma * cfg.sigma);
    double p0;
    if (llr > 700.0) p0 = 1.0;
    else if (llr < -700.0) p0 = 0.0;
    else p0 = 1.0 / (1.0 + std::exp(-llr));
    return Mass::binary(p0);
}

inline std::vector<Mass> to_evidence(const std::vector<double>& y,
                                     const ChannelConfig& cfg) {
    std::vector<Mass> out;
    out.reserve(y.size());
    for (double v : y) out.push_back(to_evidence(v, cfg));
    return out;
}

// Upper tail of the standard normal distribution.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace stodec
