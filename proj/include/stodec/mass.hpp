#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "stodec/errors.hpp"

namespace stodec {

// Normalized probability mass over a finite alphabet {0..size-1}. Entries
// stay inside the open interval (0,1): clamping pins them to
// [kEpsilon, 1-kEpsilon] before renormalizing, so downstream stochastic
// sources never see a zero-probability symbol. Size-1 alphabets are the
// degenerate exception: their single entry is exactly 1.
class Mass {
public:
    static constexpr double kEpsilon = 1e-6;

    Mass() = default;

    static Mass normalized(std::vector<double> values, bool clamp = true) {
        if (values.empty()) throw DegenerateMass("mass over empty alphabet");
        double sum = 0.0;
        for (double v : values) {
            if (v < 0.0 || !std::isfinite(v))
                throw DegenerateMass("mass entry negative or non-finite");
            sum += v;
        }
        if (sum <= 0.0) throw DegenerateMass("mass normalizer is zero");
        for (double& v : values) v /= sum;
        Mass m;
        m.values_ = std::move(values);
        if (clamp) m.clamp();
        return m;
    }

    static Mass uniform(int size) {
        return normalized(std::vector<double>(static_cast<std::size_t>(size), 1.0),
                          /*clamp=*/false);
    }

    // Binary mass (p0, 1-p0), clamped.
    static Mass binary(double p0) { return normalized({p0, 1.0 - p0}); }

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }

    // Index of the largest entry, ties toward the lowest symbol.
    int argmax() const {
        int best = 0;
        for (int i = 1; i < size(); ++i)
            if (values_[static_cast<std::size_t>(i)] >
                values_[static_cast<std::size_t>(best)])
                best = i;
        return best;
    }

    double total_variation(const Mass& other) const {
        double d = 0.0;
        for (int i = 0; i < size(); ++i) d += std::abs((*this)[i] - other[i]);
        return 0.5 * d;
    }

private:
    void clamp() {
        if (values_.size() < 2) return;
        double sum = 0.0;
        for (double& v : values_) {
            if (v < kEpsilon) v = kEpsilon;
            if (v > 1.0 - kEpsilon) v = 1.0 - kEpsilon;
            sum += v;
        }
        for (double& v : values_) v /= sum;
    }

    std::vector<double> values_;
};

// Elementwise product of masses over the same alphabet, renormalized.
inline Mass hadamard(const Mass& a, const Mass& b, bool clamp = true) {
    if (a.size() != b.size())
        throw LengthMismatch("hadamard product over mismatched alphabets");
    std::vector<double> out(static_cast<std::size_t>(a.size()));
    for (int i = 0; i < a.size(); ++i)
        out[static_cast<std::size_t>(i)] = a[i] * b[i];
    return Mass::normalized(std::move(out), clamp);
}

}  // namespace stodec
