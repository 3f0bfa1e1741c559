#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "cfgf/errors.hpp"
#include "cfgf/fft.hpp"
#include "cfgf/grid.hpp"
#include "cfgf/philox.hpp"
#include "cfgf/torus_spectrum.hpp"

// Realizations of f_L^s = sum_{0<|k|^2<=L} |k|^{-s} xi_k e_k on a periodic
// grid, plus the exact covariance kernel K_L^s and its analytic derivatives.
//
// Coefficient convention: the pair {k,-k} carries the real modes
//   a w [xi_c cos(k.x) + xi_s sin(k.x)]  =  Re[(a w)(xi_c - i xi_s) e^{ik.x}]
// so the complex Fourier coefficient at +k is C_k = (a w / 2)(xi_c - i xi_s)
// and C_{-k} = conj(C_k). One backward c2r FFT synthesizes the field.

namespace cfgf {

struct FieldSample {
    FieldParams params;
    GridSpec grid;
    std::uint64_t seed = 0;
    std::vector<double> values;  // m^n reals, row-major, periodic indexing

    double& at(std::int64_t i0, std::int64_t i1) {
        return values[static_cast<std::size_t>(i0 * grid.m + i1)];
    }
    double at(std::int64_t i0, std::int64_t i1) const {
        return values[static_cast<std::size_t>(i0 * grid.m + i1)];
    }
};

// Deterministic coefficient stream: pair j of the canonical mode ordering
// draws (xi_cos, xi_sin) = gaussian_pair(seed, j).
inline std::array<double, 2> mode_xi(std::uint64_t seed, std::uint64_t pair_index) {
    return gaussian_pair(seed, pair_index);
}

inline FieldSample sample_field(const FieldParams& params, const GridSpec& grid,
                                std::uint64_t seed) {
    params.validate();
    if (grid.n != params.n) throw ParamError("sample_field: grid/params dimension mismatch");
    grid.require_resolves(params.L);

    const auto pairs = enumerate_pairs(params);
    const double amp = mode_amplitude(params.n);
    const int n = params.n;
    const auto m = grid.m;
    const std::int64_t mh = m / 2 + 1;

    std::size_t real_count = 1;
    for (int i = 0; i < n; ++i) real_count *= static_cast<std::size_t>(m);
    const std::size_t cplx_count = real_count / static_cast<std::size_t>(m) *
                                   static_cast<std::size_t>(mh);

    auto spec = fftw_alloc_buffer<std::complex<double>>(cplx_count);
    std::memset(spec.get(), 0, sizeof(std::complex<double>) * cplx_count);

    auto flat_index = [&](const std::array<std::int64_t, 3>& p) {
        std::size_t idx = 0;
        for (int i = 0; i + 1 < n; ++i)
            idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(p[i]);
        return idx * static_cast<std::size_t>(mh) + static_cast<std::size_t>(p[n - 1]);
    };

    for (std::size_t j = 0; j < pairs.size(); ++j) {
        const auto& mp = pairs[j];
        const auto xi = mode_xi(seed, j);
        const std::complex<double> coeff =
            0.5 * mp.weight * amp * std::complex<double>(xi[0], -xi[1]);
        for (int sgn : {+1, -1}) {
            std::array<std::int64_t, 3> p{};
            for (int i = 0; i < n; ++i) {
                const std::int64_t ki = sgn * mp.k[i];
                p[i] = ((ki % m) + m) % m;
            }
            if (p[n - 1] <= m / 2)
                spec[flat_index(p)] += (sgn > 0) ? coeff : std::conj(coeff);
        }
    }

    FieldSample out;
    out.params = params;
    out.grid = grid;
    out.seed = seed;
    out.values.resize(real_count);
    std::vector<int> dims(static_cast<std::size_t>(n), static_cast<int>(m));
    FftPlanCache::instance().execute_c2r(dims, spec.get(), out.values.data());
    return out;
}

// Direct trigonometric-sum evaluation at an arbitrary point (the reference
// the FFT path must reproduce at grid nodes).
inline double field_value_direct(const FieldParams& params, std::uint64_t seed,
                                 const double* x) {
    const auto pairs = enumerate_pairs(params);
    const double amp = mode_amplitude(params.n);
    double acc = 0.0;
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        const auto& mp = pairs[j];
        double phase = 0.0;
        for (int i = 0; i < params.n; ++i)
            phase += static_cast<double>(mp.k[i]) * x[i];
        const auto xi = mode_xi(seed, j);
        acc += mp.weight * amp * (xi[0] * std::cos(phase) + xi[1] * std::sin(phase));
    }
    return acc;
}

// Exact kernel K_L^s(x,y) = (1/(2pi)^n) sum_{0<|k|^2<=L} |k|^{-2s} cos(k.(x-y)).
inline double covariance(const FieldParams& params, const double* x, const double* y) {
    const auto pairs = enumerate_pairs(params);
    const double two_over_vol = 2.0 / std::pow(2.0 * std::numbers::pi, params.n);
    double acc = 0.0;
    for (const auto& mp : pairs) {
        double phase = 0.0;
        for (int i = 0; i < params.n; ++i)
            phase += static_cast<double>(mp.k[i]) * (x[i] - y[i]);
        acc += mp.weight * mp.weight * std::cos(phase);
    }
    return two_over_vol * acc;
}

// Pointwise variance K_L(x,x) as an explicit lattice sum.
inline double variance_at_origin(const FieldParams& params) {
    const auto pairs = enumerate_pairs(params);
    double acc = 0.0;
    for (const auto& mp : pairs) acc += mp.weight * mp.weight;
    return 2.0 * acc / std::pow(2.0 * std::numbers::pi, params.n);
}

// Analytic mixed derivative d^alpha_x d^beta_y K_L(x,y) evaluated at
// separation d = x - y. Each mode contributes
//   |k|^{-2s} Re[(ik)^alpha (-ik)^beta e^{ik.d}] / (2pi)^n,
// summed over all nonzero k (both members of each antipodal pair).
inline double covariance_deriv(const FieldParams& params,
                               const std::array<int, 3>& alpha,
                               const std::array<int, 3>& beta, const double* d) {
    const auto pairs = enumerate_pairs(params);
    int abs_a = 0, abs_b = 0;
    for (int i = 0; i < params.n; ++i) {
        abs_a += alpha[i];
        abs_b += beta[i];
    }
    // Re[i^q e^{i theta}] for q = |alpha| - |beta| (mod 4).
    const int q = ((abs_a - abs_b) % 4 + 4) % 4;
    auto re_iq_exp = [q](double theta) {
        switch (q) {
            case 0: return std::cos(theta);
            case 1: return -std::sin(theta);
            case 2: return -std::cos(theta);
            default: return std::sin(theta);
        }
    };
    double acc = 0.0;
    for (const auto& mp : pairs) {
        for (int sgn : {+1, -1}) {
            double kpow = 1.0, phase = 0.0;
            for (int i = 0; i < params.n; ++i) {
                const double ki = static_cast<double>(sgn * mp.k[i]);
                phase += ki * d[i];
                for (int t = 0; t < alpha[i] + beta[i]; ++t) kpow *= ki;
            }
            acc += mp.weight * mp.weight * kpow * re_iq_exp(phase);
        }
    }
    return acc / std::pow(2.0 * std::numbers::pi, params.n);
}

// --- binary dump -----------------------------------------------------------
// Layout: magic "CFGF", version u32=1, n u32, s f64, L f64, m u64, seed u64,
// then m^n values as little-endian f64 in row-major order.

namespace detail {

template <typename T>
void put_le(std::ostream& os, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));  // host is little-endian
    os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
    unsigned char buf[sizeof(T)];
    is.read(reinterpret_cast<char*>(buf), sizeof(T));
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace detail

inline void dump_field(const FieldSample& sample, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("dump_field: cannot open " + path);
    os.write("CFGF", 4);
    detail::put_le<std::uint32_t>(os, 1u);
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(sample.params.n));
    detail::put_le<double>(os, sample.params.s);
    detail::put_le<double>(os, sample.params.L);
    detail::put_le<std::uint64_t>(os, static_cast<std::uint64_t>(sample.grid.m));
    detail::put_le<std::uint64_t>(os, sample.seed);
    for (double v : sample.values) detail::put_le<double>(os, v);
    if (!os) throw Error("dump_field: write failed for " + path);
}

inline FieldSample load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("load_field: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "CFGF", 4) != 0)
        throw Error("load_field: bad magic in " + path);
    const auto version = detail::get_le<std::uint32_t>(is);
    if (version != 1u) throw Error("load_field: unsupported version");
    FieldSample s;
    s.params.n = static_cast<int>(detail::get_le<std::uint32_t>(is));
    s.params.s = detail::get_le<double>(is);
    s.params.L = detail::get_le<double>(is);
    const auto m = static_cast<std::int64_t>(detail::get_le<std::uint64_t>(is));
    s.seed = detail::get_le<std::uint64_t>(is);
    s.grid = GridSpec(s.params.n, m, 2.0);
    s.grid.oversampling = static_cast<double>(m) / std::sqrt(s.params.L);
    s.values.resize(static_cast<std::size_t>(s.grid.cells()));
    for (auto& v : s.values) v = detail::get_le<double>(is);
    if (!is) throw Error("load_field: truncated file " + path);
    return s;
}

}  // namespace cfgf
