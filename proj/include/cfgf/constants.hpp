#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "cfgf/eigensym.hpp"
#include "cfgf/errors.hpp"
#include "cfgf/philox.hpp"
#include "cfgf/quadrature.hpp"
#include "cfgf/stats.hpp"

namespace cfgf {

inline constexpr std::uint64_t kDefaultSeed = 0x243F6A8885A308D3ull;
inline constexpr std::uint64_t kDefaultMcSamples = 1'000'000;
inline constexpr std::uint64_t kMcBatch = 4096;

// J_k = int_0^inf t^k exp(-t^2/2) dt.  Closed form by parity; satisfies
// J_{k+2} = (k+1) J_k.
inline double radial_moment(int k) {
    if (k < 0) throw ParamError("radial_moment: k >= 0 required");
    if (k % 2 == 0) {
        double v = std::sqrt(std::numbers::pi / 2.0);  // J_0
        for (int j = 1; j <= k - 1; j += 2) v *= j;    // (k-1)!! over odds
        return v;
    }
    double v = 1.0;                                // J_1
    for (int j = 2; j <= k - 1; j += 2) v *= j;    // 2^{(k-1)/2} ((k-1)/2)!
    return v;
}

// c_n := 1/((2 pi)^{n/2} J_{n+1}), the unique value with
// n c_n = |S^{n-1}|/(2 pi)^n.
inline double universal_c(int n) {
    if (n < 2) throw ParamError("universal_c: n >= 2 required");
    return 1.0 / (std::pow(2.0 * std::numbers::pi, 0.5 * n) * radial_moment(n + 1));
}

// C_n = 1/sqrt(pi^{n+1} 2^{2n-1} n (n+2)^{n-1}), the normalization in front
// of the signed determinant moments.
inline double betti_norm_constant(int n) {
    if (n < 2) throw ParamError("betti_norm_constant: n >= 2 required");
    const double inside = std::pow(std::numbers::pi, n + 1) *
                          std::pow(2.0, 2 * n - 1) * n * std::pow(n + 2.0, n - 1);
    return 1.0 / std::sqrt(inside);
}

// E[|X| 1(X > 0)] = E[|X| 1(X < 0)] = sqrt(a/(2 pi)) for X ~ N(0, a): the
// per-sign half of the first absolute moment of the m = 1 matrix law (the
// full moment is sqrt(2a/pi)).  Closed form counterpart of
// signed_det_moment({1, a}, i).
inline double half_abs_moment_scalar(double a) {
    if (!(a > 0.0)) throw ParamError("half_abs_moment_scalar: a > 0 required");
    return std::sqrt(a / (2.0 * std::numbers::pi));
}

// Relative quadrature error of the four ball-integral identities that pin
// down c_n:
//   (1/(2pi)^n) int_B |xi|^{1-n}            = n c_n
//   (1/(2pi)^n) int_B xi_1^2 / |xi|^n       = c_n / 2
//   (1/(2pi)^n) int_B xi_1^2 xi_2^2 /|xi|^n = c_n / (4(n+2))
//   (1/(2pi)^n) int_B xi_1^4 / |xi|^n       = 3 c_n / (4(n+2))
inline std::array<double, 4> integral_identity_errors(int n) {
    const double c = universal_c(n);
    const std::array<int, 4> z{}, e1{1, 0, 0, 0}, e12{1, 1, 0, 0}, e2x{2, 0, 0, 0};
    const std::array<double, 4> lhs = {
        ball_spectral_integral(n, 0.5 * (n - 1), z, z),
        ball_spectral_integral(n, 0.5 * n, e1, e1),
        ball_spectral_integral(n, 0.5 * n, e12, e12),
        ball_spectral_integral(n, 0.5 * n, e2x, e2x),
    };
    const std::array<double, 4> rhs = {
        n * c,
        c / 2.0,
        c / (4.0 * (n + 2.0)),
        3.0 * c / (4.0 * (n + 2.0)),
    };
    std::array<double, 4> rel{};
    for (int i = 0; i < 4; ++i) rel[i] = std::abs(lhs[i] / rhs[i] - 1.0);
    return rel;
}

// Law of the structured symmetric Gaussian matrix M: off-diagonals i.i.d.
// standard normal, diagonal M_ii = Y_i + Y with Y_i i.i.d. N(0, a-1) and a
// shared Y ~ N(0,1).  Entrywise: Var(M_ii) = a, Cov(M_ii, M_jj) = 1,
// Var(M_ij) = 1, all other pairs uncorrelated.
struct StructuredHessianLaw {
    int m = 1;
    double a = 3.0;

    void validate() const {
        if (m < 1) throw ParamError("StructuredHessianLaw: m >= 1 required");
        if (a < 1.0)
            throw ParamError("StructuredHessianLaw: a >= 1 required, got " +
                             std::to_string(a));
    }

    // Covariance entry Cov(M_ij, M_kl) of Xi.
    double xi_entry(int i, int j, int k, int l) const {
        if (i > j) std::swap(i, j);
        if (k > l) std::swap(k, l);
        if (i == k && j == l) return (i == j) ? a : 1.0;
        if (i == j && k == l) return 1.0;  // distinct diagonal entries
        return 0.0;
    }
};

// One draw of M, row-major m x m.  Gaussian budget per draw: m(m-1)/2
// off-diagonals, m values of Y_i, one shared Y, consumed in that order from
// the pair stream of `seed`.
inline std::vector<double> sample_M(const StructuredHessianLaw& law,
                                    std::uint64_t seed) {
    law.validate();
    const int m = law.m;
    const int need = m * (m - 1) / 2 + m + 1;
    std::vector<double> g;
    g.reserve(need + 1);
    for (std::uint64_t j = 0; g.size() < static_cast<std::size_t>(need); ++j) {
        const auto p = gaussian_pair(seed, j);
        g.push_back(p[0]);
        g.push_back(p[1]);
    }
    std::vector<double> M(static_cast<std::size_t>(m) * m, 0.0);
    std::size_t pos = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            M[static_cast<std::size_t>(i) * m + j] = g[pos];
            M[static_cast<std::size_t>(j) * m + i] = g[pos];
            ++pos;
        }
    const double sd = std::sqrt(law.a - 1.0);
    const double y_shared = g[pos + m];
    for (int i = 0; i < m; ++i)
        M[static_cast<std::size_t>(i) * m + i] = sd * g[pos + i] + y_shared;
    return M;
}

// Determinant by LU with partial pivoting; m is tiny here.
inline double det_by_lu(std::vector<double> a, int m) {
    double det = 1.0;
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * m + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * m + col]))
                piv = r;
        if (piv != col) {
            for (int c = 0; c < m; ++c)
                std::swap(a[static_cast<std::size_t>(piv) * m + c],
                          a[static_cast<std::size_t>(col) * m + c]);
            det = -det;
        }
        const double d = a[static_cast<std::size_t>(col) * m + col];
        if (d == 0.0) return 0.0;
        det *= d;
        for (int r = col + 1; r < m; ++r) {
            const double f = a[static_cast<std::size_t>(r) * m + col] / d;
            for (int c = col; c < m; ++c)
                a[static_cast<std::size_t>(r) * m + c] -=
                    f * a[static_cast<std::size_t>(col) * m + c];
        }
    }
    return det;
}

struct MomentEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;    // samples that entered the estimate
    std::uint64_t discarded = 0;  // degenerate draws skipped
};

namespace detail {

// Monte Carlo mean of f(M) over draws of the law.  f returns {value, keep};
// dropped draws count as discarded.  Batches are delimited at fixed sample
// indices and merged pairwise, so the result does not depend on how batches
// would be scheduled.
template <typename F>
MomentEstimate mc_matrix_moment(const StructuredHessianLaw& law,
                                std::uint64_t samples, std::uint64_t seed, F&& f) {
    law.validate();
    if (samples == 0) throw ParamError("mc_matrix_moment: samples >= 1 required");
    BatchedMoments acc;
    std::uint64_t discarded = 0;
    std::vector<double> vals, sqs;
    for (std::uint64_t b0 = 0; b0 < samples; b0 += kMcBatch) {
        const std::uint64_t b1 = std::min(samples, b0 + kMcBatch);
        vals.clear();
        sqs.clear();
        for (std::uint64_t t = b0; t < b1; ++t) {
            const auto M = sample_M(law, derive_seed(seed, t));
            const auto [v, keep] = f(M);
            if (!keep) {
                ++discarded;
                continue;
            }
            vals.push_back(v);
            sqs.push_back(v * v);
        }
        acc.add_batch(pairwise_sum(vals), pairwise_sum(sqs), vals.size());
    }
    if (acc.count == 0) throw PreconditionError("mc_matrix_moment: all draws degenerate");
    return {acc.mean(), acc.std_error(), acc.count, discarded};
}

}  // namespace detail

// Monte Carlo estimate of E[det M].
inline MomentEstimate expected_det(const StructuredHessianLaw& law,
                                   std::uint64_t samples = kDefaultMcSamples,
                                   std::uint64_t seed = kDefaultSeed) {
    return detail::mc_matrix_moment(
        law, samples, seed, [&](const std::vector<double>& M) {
            return std::pair<double, bool>(det_by_lu(M, law.m), true);
        });
}

// Exact E[det M] via the permutation expansion.  Only involutions survive
// the Wick pairing; an involution with k two-cycles contributes
// (-1)^k C(m,2k) (2k-1)!! E[Y^{m-2k}], and E[Y^f] = (f-1)!! for even f,
// 0 for odd.  Independent of a, and identically 0 for every m >= 1.
inline double wick_expected_det(const StructuredHessianLaw& law) {
    law.validate();
    if (law.m > 6)
        throw CapacityError("wick_expected_det: permutation oracle limited to m <= 6");
    auto odd_dfact = [](int j) {  // j!! over odd factors; (-1)!! = 1
        long long v = 1;
        for (int t = 1; t <= j; t += 2) v *= t;
        return v;
    };
    auto binom = [](int n, int k) {
        long long v = 1;
        for (int t = 1; t <= k; ++t) v = v * (n - k + t) / t;
        return v;
    };
    long long total = 0;
    for (int k = 0; 2 * k <= law.m; ++k) {
        const int f = law.m - 2 * k;
        if (f % 2 != 0) continue;
        const long long term =
            binom(law.m, 2 * k) * odd_dfact(2 * k - 1) * odd_dfact(f - 1);
        total += (k % 2 == 0) ? term : -term;
    }
    return static_cast<double>(total);
}

// Monte Carlo estimate of E[|det M| 1(sgn(M) = i)], where sgn is the number
// of negative eigenvalues.  Eigenvalues come from tridiagonalization + QL;
// draws with an eigenvalue below 1e-12 times the spectral norm are
// degenerate and discarded (count reported in the estimate).
inline MomentEstimate signed_det_moment(const StructuredHessianLaw& law, int i,
                                        std::uint64_t samples = kDefaultMcSamples,
                                        std::uint64_t seed = kDefaultSeed) {
    law.validate();
    if (i < 0 || i > law.m)
        throw ParamError("signed_det_moment: index must lie in [0, m]");
    return detail::mc_matrix_moment(
        law, samples, seed, [&](const std::vector<double>& M) {
            const auto eig = symmetric_eigenvalues(M, law.m);
            const double norm = std::max(std::abs(eig.front()), std::abs(eig.back()));
            if (norm == 0.0) return std::pair<double, bool>(0.0, false);
            int neg = 0;
            double absdet = 1.0;
            for (double ev : eig) {
                if (std::abs(ev) < 1e-12 * norm)
                    return std::pair<double, bool>(0.0, false);
                if (ev < 0.0) ++neg;
                absdet *= std::abs(ev);
            }
            return std::pair<double, bool>(neg == i ? absdet : 0.0, true);
        });
}

// A_n^i = C_n E[|det M| 1(sgn(M) = i)] with the m = n-1, a = 3 law.
inline MomentEstimate betti_constant(int n, int i,
                                     std::uint64_t samples = kDefaultMcSamples,
                                     std::uint64_t seed = kDefaultSeed) {
    if (n < 2) throw ParamError("betti_constant: n >= 2 required");
    if (i < 0 || i > n - 1)
        throw ParamError("betti_constant: index must lie in [0, n-1]");
    const StructuredHessianLaw law{n - 1, 3.0};
    auto est = signed_det_moment(law, i, samples, seed);
    const double C = betti_norm_constant(n);
    est.value *= C;
    est.std_error *= C;
    return est;
}

struct UniversalConstants {
    int n = 2;
    double c_n = 0.0;
    double C_n = 0.0;
    std::vector<double> J;  // J_0 .. J_{n+2}
    std::vector<double> A;  // A_n^i for i = 0..n-1
    std::vector<double> A_std_error;
    std::vector<std::uint64_t> A_discarded;
};

inline UniversalConstants
compute_universal_constants(int n, std::uint64_t samples = kDefaultMcSamples,
                            std::uint64_t seed = kDefaultSeed) {
    UniversalConstants u;
    u.n = n;
    u.c_n = universal_c(n);
    u.C_n = betti_norm_constant(n);
    for (int k = 0; k <= n + 2; ++k) u.J.push_back(radial_moment(k));
    for (int i = 0; i < n; ++i) {
        const auto est = betti_constant(n, i, samples, derive_seed(seed, i));
        u.A.push_back(est.value);
        u.A_std_error.push_back(est.std_error);
        u.A_discarded.push_back(est.discarded);
    }
    return u;
}

}  // namespace cfgf
