#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "cfgf/errors.hpp"

// Laplace eigenbasis of the flat torus T^n = [0,2pi)^n. Eigenfunctions are
// cos(k.x), sin(k.x) over integer lattice vectors k grouped by the antipodal
// pair {k,-k}; the eigenvalue is |k|^2 exactly.

namespace cfgf {

enum class Regime { subcritical, critical, supercritical };

struct FieldParams {
    int n = 2;        // dimension, >= 1
    double s = 1.0;   // fractional exponent (possibly negative)
    double L = 100.0; // spectral cutoff, > 0

    void validate() const {
        if (n < 1) throw ParamError("FieldParams: n must be >= 1, got " + std::to_string(n));
        if (!(L > 0)) throw ParamError("FieldParams: L must be > 0, got " + std::to_string(L));
        if (!std::isfinite(s) || !std::isfinite(L))
            throw ParamError("FieldParams: s and L must be finite");
    }

    Regime regime() const {
        const double half_n = 0.5 * n;
        if (s < half_n) return Regime::subcritical;
        if (s == half_n) return Regime::critical;
        return Regime::supercritical;
    }
};

enum class Parity { cosine, sine };

struct SpectralMode {
    std::array<std::int64_t, 3> k{};  // canonical antipodal representative, first n entries used
    Parity parity = Parity::cosine;
    double eigenvalue = 0.0;  // |k|^2
    double weight = 0.0;      // eigenvalue^{-s/2}
    double amplitude = 0.0;   // sqrt(2/(2pi)^n), L^2-normalization on the torus
};

// One antipodal pair {k,-k}; carries both the cosine and sine mode.
struct ModePair {
    std::array<std::int64_t, 3> k{};
    std::int64_t k_sq = 0;
    double weight = 0.0;  // eigenvalue^{-s/2} = |k|^{-s}
};

namespace detail {

inline std::int64_t isqrt_floor(double L) {
    auto r = static_cast<std::int64_t>(std::floor(std::sqrt(L)));
    while (double(r + 1) * double(r + 1) <= L) ++r;
    while (double(r) * double(r) > L) --r;
    return std::max<std::int64_t>(r, 0);
}

// Eigenvalue-cutoff comparison: exact integer comparison against floor(L)
// when L is integer-valued, to avoid float ambiguity at shell boundaries.
inline bool within_cutoff(std::int64_t k_sq, double L) {
    if (L == std::floor(L) && std::abs(L) < 9.0e18)
        return k_sq <= static_cast<std::int64_t>(L);
    return static_cast<double>(k_sq) <= L;
}

// Canonical antipodal representative: the lexicographically larger of
// {k, -k}, i.e. the first nonzero component is positive.
inline bool is_canonical(const std::array<std::int64_t, 3>& k, int n) {
    for (int i = 0; i < n; ++i) {
        if (k[i] > 0) return true;
        if (k[i] < 0) return false;
    }
    return false;  // k = 0 has no canonical form; excluded anyway
}

inline bool lex_less(const std::array<std::int64_t, 3>& a,
                     const std::array<std::int64_t, 3>& b, int n) {
    for (int i = 0; i < n; ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

}  // namespace detail

inline constexpr std::int64_t kDefaultModeBudget = 1 << 26;

// All antipodal pairs with 0 < |k|^2 <= L, ordered by eigenvalue then
// lexicographically on the canonical representative. This ordering defines
// the RNG coefficient assignment, so it must never change.
inline std::vector<ModePair> enumerate_pairs(const FieldParams& p,
                                             std::int64_t pair_budget = kDefaultModeBudget) {
    p.validate();
    if (p.n > 3) throw ParamError("enumerate_pairs: n > 3 not supported");
    const std::int64_t K = detail::isqrt_floor(p.L);

    // Capacity pre-check from the Weyl-order estimate before any allocation.
    const double vol_ball[] = {0.0, 2.0, std::numbers::pi, 4.0 * std::numbers::pi / 3.0};
    const double est = vol_ball[p.n] * std::pow(p.L, 0.5 * p.n);
    if (est > 2.0 * static_cast<double>(pair_budget))
        throw CapacityError("enumerate_pairs: ~" + std::to_string(est) +
                            " lattice points exceeds budget " + std::to_string(2 * pair_budget));

    std::vector<ModePair> pairs;
    std::array<std::int64_t, 3> k{0, 0, 0};
    const int n = p.n;
    const std::int64_t lo1 = (n >= 2) ? -K : 0, hi1 = (n >= 2) ? K : 0;
    const std::int64_t lo2 = (n >= 3) ? -K : 0, hi2 = (n >= 3) ? K : 0;
    for (std::int64_t k0 = -K; k0 <= K; ++k0)
        for (std::int64_t k1 = lo1; k1 <= hi1; ++k1)
            for (std::int64_t k2 = lo2; k2 <= hi2; ++k2) {
                k = {k0, k1, k2};
                const std::int64_t k_sq = k0 * k0 + k1 * k1 + k2 * k2;
                if (k_sq == 0 || !detail::within_cutoff(k_sq, p.L)) continue;
                if (!detail::is_canonical(k, n)) continue;
                ModePair mp;
                mp.k = k;
                mp.k_sq = k_sq;
                mp.weight = std::pow(static_cast<double>(k_sq), -0.5 * p.s);
                pairs.push_back(mp);
            }
    if (static_cast<std::int64_t>(pairs.size()) > pair_budget)
        throw CapacityError("enumerate_pairs: " + std::to_string(pairs.size()) +
                            " pairs exceeds budget " + std::to_string(pair_budget));
    std::sort(pairs.begin(), pairs.end(), [n](const ModePair& a, const ModePair& b) {
        if (a.k_sq != b.k_sq) return a.k_sq < b.k_sq;
        return detail::lex_less(a.k, b.k, n);
    });
    return pairs;
}

inline double mode_amplitude(int n) {
    return std::sqrt(2.0 / std::pow(2.0 * std::numbers::pi, n));
}

// Flat list of modes, cosine before sine within each pair.
inline std::vector<SpectralMode> enumerate_modes(const FieldParams& p,
                                                 std::int64_t pair_budget = kDefaultModeBudget) {
    const auto pairs = enumerate_pairs(p, pair_budget);
    const double amp = mode_amplitude(p.n);
    std::vector<SpectralMode> modes;
    modes.reserve(2 * pairs.size());
    for (const auto& mp : pairs) {
        SpectralMode m;
        m.k = mp.k;
        m.eigenvalue = static_cast<double>(mp.k_sq);
        m.weight = mp.weight;
        m.amplitude = amp;
        m.parity = Parity::cosine;
        modes.push_back(m);
        m.parity = Parity::sine;
        modes.push_back(m);
    }
    return modes;
}

// Weyl-order sanity value: Vol(B^n) L^{n/2} ~ #{k != 0 : |k|^2 <= L}.
inline double mode_count_asymptotics(const FieldParams& p) {
    p.validate();
    const double pi = std::numbers::pi;
    double vol;
    switch (p.n) {
        case 1: vol = 2.0; break;
        case 2: vol = pi; break;
        case 3: vol = 4.0 * pi / 3.0; break;
        default: {
            // Vol(B^n) = pi^{n/2} / Gamma(n/2 + 1)
            vol = std::pow(pi, 0.5 * p.n) / std::tgamma(0.5 * p.n + 1.0);
            break;
        }
    }
    return vol * std::pow(p.L, 0.5 * p.n);
}

// Evaluate a single mode at a point.
inline double mode_value(const SpectralMode& m, const double* x, int n) {
    double phase = 0.0;
    for (int i = 0; i < n; ++i) phase += static_cast<double>(m.k[i]) * x[i];
    return m.amplitude * (m.parity == Parity::cosine ? std::cos(phase) : std::sin(phase));
}

}  // namespace cfgf
