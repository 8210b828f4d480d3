#pragma once

#include <cstdint>
#include <limits>

namespace stodec {

namespace detail {

// Finalizer from the SplitMix64 generator (Steele, Lea, Flood 2014).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

}  // namespace detail

// Counter-based pseudo-random generator. One 64-bit word of state, output
// t is a bijective mix of (seed + t*golden), so streams with different
// derived seeds never correlate. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    SplitMix64() = default;
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() {
        state_ += detail::kGolden;
        return detail::mix64(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_ = 0;
};

// Stream families for derived substreams. Every RNG consumer in a run draws
// from derive_seed(root, family, ids...) so evaluation order never matters.
enum class StreamKind : std::uint64_t {
    kEdgeInit = 1,
    kHeldInit = 2,
    kVariableSource = 3,
    kSinkInit = 4,
    kEdgeSupernode = 5,
    kConstraintSupernode = 6,
    kChannelNoise = 7,
    kFrameInfo = 8,
    kTest = 9,
};

inline constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a,
                                           std::uint64_t b = 0, std::uint64_t c = 0,
                                           std::uint64_t d = 0) {
    std::uint64_t s = root;
    s = detail::mix64(s + detail::kGolden + a);
    s = detail::mix64(s + detail::kGolden + b);
    s = detail::mix64(s + detail::kGolden + c);
    s = detail::mix64(s + detail::kGolden + d);
    return s;
}

inline constexpr std::uint64_t derive_seed(std::uint64_t root, StreamKind kind,
                                           std::uint64_t a = 0, std::uint64_t b = 0,
                                           std::uint64_t c = 0) {
    return derive_seed(root, static_cast<std::uint64_t>(kind), a, b, c);
}

}  // namespace stodec
