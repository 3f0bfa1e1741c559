#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "cfgf/errors.hpp"
#include "cfgf/torus_spectrum.hpp"

namespace cfgf {

// Smallest 5-smooth integer >= x (FFT-friendly sizes 2^a 3^b 5^c).
inline std::int64_t next_smooth(std::int64_t x) {
    if (x < 1) return 1;
    auto smooth = [](std::int64_t v) {
        for (std::int64_t f : {2, 3, 5})
            while (v % f == 0) v /= f;
        return v == 1;
    };
    std::int64_t m = x;
    while (!smooth(m)) ++m;
    return m;
}

struct GridSpec {
    int n = 2;
    std::int64_t m = 16;        // points per axis; x_j = 2pi j / m
    double oversampling = 8.0;  // samples per shortest wavelength

    GridSpec() = default;
    GridSpec(int n_, std::int64_t m_, double oversampling_ = 8.0)
        : n(n_), m(m_), oversampling(oversampling_) {
        if (n < 1) throw ParamError("GridSpec: n must be >= 1");
        if (oversampling < 2.0)
            throw ParamError("GridSpec: oversampling must be >= 2");
        if (m < 1) throw ParamError("GridSpec: m must be >= 1");
    }

    double spacing() const { return 2.0 * std::numbers::pi / static_cast<double>(m); }

    std::int64_t cells() const {
        std::int64_t total = 1;
        for (int i = 0; i < n; ++i) total *= m;
        return total;
    }

    // Oversampling contract for cutoff L: m >= ceil(oversampling * sqrt(L)).
    bool resolves(double L) const {
        return static_cast<double>(m) >= std::ceil(oversampling * std::sqrt(L));
    }

    void require_resolves(double L) const {
        if (!resolves(L))
            throw PreconditionError("GridSpec: m=" + std::to_string(m) +
                                    " too coarse for L=" + std::to_string(L) +
                                    " at oversampling=" + std::to_string(oversampling));
    }
};

// Default grid: next 5-smooth m >= ceil(oversampling * sqrt(L)).
inline GridSpec make_grid(const FieldParams& p, double oversampling = 8.0) {
    p.validate();
    const auto need =
        static_cast<std::int64_t>(std::ceil(oversampling * std::sqrt(p.L)));
    return GridSpec(p.n, next_smooth(std::max<std::int64_t>(need, 4)), oversampling);
}

}  // namespace cfgf
