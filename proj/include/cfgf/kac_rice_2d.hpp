#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "cfgf/constants.hpp"
#include "cfgf/errors.hpp"
#include "cfgf/fft.hpp"
#include "cfgf/field_sampler.hpp"
#include "cfgf/nodal_topology.hpp"
#include "cfgf/parallel.hpp"
#include "cfgf/philox.hpp"
#include "cfgf/stats.hpp"

// Critical points of a fixed Morse function restricted to traced nodal
// curves, versus the per-index Kac-Rice prediction
//   A_n^i * Vol * L^{n/2} / sqrt(ln sqrt(L)),
// where A_n^i is the normalized signed determinant moment from the constants
// module.  n = 2 throughout: curves are circles, so index-0 and index-1
// counts balance exactly on every component.

namespace cfgf {

// The fixed Morse height function p(x) = cos(x0) + 2 cos(x1): Morse on the
// torus with exactly four critical points (x0, x1 in {0, pi}), anisotropic so
// that the field has no accidental symmetry with it.
inline double morse_height(double x0, double x1) {
    return std::cos(x0) + 2.0 * std::cos(x1);
}

constexpr double kMorseHeightRange = 6.0;  // max p - min p on the torus

struct RestrictedCounts {
    std::int64_t m0 = 0;    // strict minima of p along curves (index 0)
    std::int64_t m1 = 0;    // strict maxima of p along curves (index 1)
    bool flagged = false;   // some curve passed within one cell of a critical
                            // point of p (probability-zero in the continuum)
};

struct MorseRestrictionReport {
    double L = 0.0;
    std::int64_t seeds = 0;
    double m0_mean = 0.0;
    double m1_mean = 0.0;
    double predicted_per_index = 0.0;
    double ratio = 0.0;  // (m0_mean + m1_mean) / (2 * predicted_per_index)
    std::int64_t flagged = 0;
};

namespace detail {

// Exact band-limited refinement of the sample grid: zero-pad the discrete
// spectrum to twice the resolution.  For fields whose modes lie strictly
// below the grid Nyquist (always true at oversampling >= 2 + margin) the
// result is the true field evaluated at half-step points.
inline std::vector<double> doubled_resolution_values(const FieldSample& sample) {
    const std::int64_t m = sample.grid.m;
    const std::int64_t m2 = 2 * m;
    auto in = fftw_alloc_buffer<double>(static_cast<std::size_t>(m * m));
    auto spec = fftw_alloc_buffer<std::complex<double>>(
        static_cast<std::size_t>(m * (m / 2 + 1)));
    for (std::size_t i = 0; i < sample.values.size(); ++i) in[i] = sample.values[i];
    FftPlanCache::instance().execute_r2c(
        {static_cast<int>(m), static_cast<int>(m)}, in.get(), spec.get());

    const std::int64_t cols = m / 2 + 1;
    const std::int64_t cols2 = m2 / 2 + 1;
    auto spec2 = fftw_alloc_buffer<std::complex<double>>(
        static_cast<std::size_t>(m2 * cols2));
    for (std::int64_t i = 0; i < m2 * cols2; ++i) spec2[i] = 0.0;
    const double norm = 1.0 / static_cast<double>(m * m);
    for (std::int64_t r = 0; r < m; ++r) {
        const std::int64_t k0 = r <= m / 2 ? r : r - m;
        const std::int64_t r2 = k0 >= 0 ? k0 : m2 + k0;
        for (std::int64_t c = 0; c < cols; ++c)
            spec2[r2 * cols2 + c] = spec[r * cols + c] * norm;
    }
    std::vector<double> fine(static_cast<std::size_t>(m2 * m2));
    FftPlanCache::instance().execute_c2r(
        {static_cast<int>(m2), static_cast<int>(m2)}, spec2.get(), fine.data());
    return fine;
}

// Crossing position along a crossed edge after one bisection step: the exact
// field value at the edge midpoint (from the doubled grid) selects the half
// that changes sign; linear interpolation finishes within that half.
inline double refined_edge_t(double v0, double v1, double vm) {
    if (vm == 0.0) return 0.5;
    if ((v0 > 0.0) != (vm > 0.0)) return 0.5 * v0 / (v0 - vm);
    return 0.5 + 0.5 * vm / (vm - v1);
}

// Strict cyclic extrema of p-samples after plateau merging.  Consecutive
// samples within `tol` of the current run's representative merge into one
// run (including across the cyclic seam), so adjacent runs always differ by
// at least tol and maxima/minima alternate strictly.
inline void cyclic_extrema(const std::vector<double>& p_values, double tol,
                           std::int64_t& minima, std::int64_t& maxima) {
    std::vector<double> runs;
    for (double v : p_values) {
        if (runs.empty() || std::abs(v - runs.back()) >= tol) runs.push_back(v);
    }
    while (runs.size() > 1 && std::abs(runs.front() - runs.back()) < tol)
        runs.pop_back();
    const std::size_t k = runs.size();
    if (k < 2) return;  // p constant along the curve to tolerance
    for (std::size_t j = 0; j < k; ++j) {
        const double prev = runs[(j + k - 1) % k];
        const double cur = runs[j];
        const double next = runs[(j + 1) % k];
        if (cur > prev && cur > next) ++maxima;
        if (cur < prev && cur < next) ++minima;
    }
}

}  // namespace detail

// Counts strict local minima (index 0) and maxima (index 1) of the Morse
// height p along every traced nodal curve of the sample.  One p-sample per
// marching-squares edge crossing, with the crossing refined by one bisection
// step on the band-limited field; `density` = 2 doubles the crossing density
// by tracing the same band-limited field on the half-step grid (used by the
// sampling-density stability check).  Midpoints of polyline chords are not
// used: they sit O(h^2) off the curve, and that jitter manufactures spurious
// extremum pairs at a resolution-independent few-percent rate.
inline RestrictedCounts restricted_critical_points(const FieldSample& sample,
                                                   int density = 1) {
    if (sample.params.n != 2)
        throw ParamError("restricted_critical_points: n = 2 required");
    if (density != 1 && density != 2)
        throw ParamError("restricted_critical_points: density in {1,2}");
    if (density == 2) {
        FieldSample doubled;
        doubled.params = sample.params;
        doubled.grid =
            GridSpec(2, 2 * sample.grid.m, 2.0 * sample.grid.oversampling);
        doubled.seed = sample.seed;
        doubled.values = detail::doubled_resolution_values(sample);
        return restricted_critical_points(doubled, 1);
    }
    const std::int64_t m = sample.grid.m;
    const double h = sample.grid.spacing();
    const auto curves = trace_nodal_curves(sample);
    const auto fine = detail::doubled_resolution_values(sample);
    const auto vals = detail::nudged_values(sample);
    auto vat = [&](std::int64_t i0, std::int64_t i1) {
        return vals[static_cast<std::size_t>(((i0 % m + m) % m) * m +
                                             ((i1 % m + m) % m))];
    };
    const std::int64_t m2 = 2 * m;
    auto fine_at = [&](std::int64_t i0, std::int64_t i1) {
        return fine[static_cast<std::size_t>(((i0 % m2 + m2) % m2) * m2 +
                                             ((i1 % m2 + m2) % m2))];
    };

    const double tol = 1e-10 * kMorseHeightRange;
    RestrictedCounts out;
    std::vector<std::array<double, 2>> pts;
    std::vector<double> p_values;
    for (const auto& curve : curves) {
        // refined crossing positions, re-unwrapped along the walk
        pts.clear();
        double prev[2] = {curve.points[0][0], curve.points[0][1]};
        for (std::size_t j = 0; j < curve.edges.size(); ++j) {
            const auto el = detail::decode_edge(curve.edges[j], m);
            double x[2];
            if (el.axis == 0) {
                const double t = detail::refined_edge_t(
                    vat(el.i0, el.i1), vat(el.i0 + 1, el.i1),
                    fine_at(2 * el.i0 + 1, 2 * el.i1));
                x[0] = (static_cast<double>(el.i0) + t) * h;
                x[1] = static_cast<double>(el.i1) * h;
            } else {
                const double t = detail::refined_edge_t(
                    vat(el.i0, el.i1), vat(el.i0, el.i1 + 1),
                    fine_at(2 * el.i0, 2 * el.i1 + 1));
                x[0] = static_cast<double>(el.i0) * h;
                x[1] = (static_cast<double>(el.i1) + t) * h;
            }
            for (int ax = 0; ax < 2; ++ax) {
                while (x[ax] - prev[ax] > std::numbers::pi)
                    x[ax] -= 2.0 * std::numbers::pi;
                while (x[ax] - prev[ax] < -std::numbers::pi)
                    x[ax] += 2.0 * std::numbers::pi;
                prev[ax] = x[ax];
            }
            pts.push_back({x[0], x[1]});
        }

        // proximity to the four critical points of p, within one cell
        for (const auto& x : pts) {
            for (int a = 0; a < 2 && !out.flagged; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double cx = a * std::numbers::pi;
                    const double cy = b * std::numbers::pi;
                    auto axdist = [](double u, double c) {
                        double d = std::fmod(std::abs(u - c), 2.0 * std::numbers::pi);
                        return std::min(d, 2.0 * std::numbers::pi - d);
                    };
                    const double d0 = axdist(x[0], cx), d1 = axdist(x[1], cy);
                    if (d0 * d0 + d1 * d1 < h * h) {
                        out.flagged = true;
                        break;
                    }
                }
            if (out.flagged) break;
        }

        p_values.clear();
        for (const auto& x : pts) p_values.push_back(morse_height(x[0], x[1]));
        detail::cyclic_extrema(p_values, tol, out.m0, out.m1);
    }
    return out;
}

// Mean of m0 - m1 over the samples: zero exactly, since every traced
// component is a circle (chi = 0); an internal consistency check of the
// tracer and the extremum counter.
inline double euler_characteristic_check(const std::vector<FieldSample>& samples) {
    if (samples.empty())
        throw ParamError("euler_characteristic_check: no samples");
    double acc = 0.0;
    for (const auto& sample : samples) {
        const auto counts = restricted_critical_points(sample);
        acc += static_cast<double>(counts.m0 - counts.m1);
    }
    return acc / static_cast<double>(samples.size());
}

// Per-index Kac-Rice prediction at cutoff L on the full torus:
//   A_2^i * (2 pi)^2 * L / sqrt(ln sqrt(L)),
// with A_2^i = C_2 * E[|det M| 1(sgn = i)] taken from the constants module
// closed forms (m = 1: the half moment sqrt(6/pi)/2 at a = 3).
inline double kac_rice_prediction_per_index(double L) {
    if (!(L > 1.0)) throw ParamError("kac_rice_prediction_per_index: L > 1 required");
    const double vol = std::pow(2.0 * std::numbers::pi, 2);
    const double a_2i = betti_norm_constant(2) * half_abs_moment_scalar(3.0);
    return a_2i * vol * L / std::sqrt(std::log(std::sqrt(L)));
}

// Critical-regime study at one cutoff: mean restricted critical-point counts
// over independent seeds against the per-index prediction.
inline MorseRestrictionReport morse_restriction_study(
    double L, std::int64_t seeds, std::uint64_t master_seed = kDefaultSeed,
    double oversampling = 8.0, int threads = 1) {
    if (seeds < 1) throw ParamError("morse_restriction_study: seeds >= 1");
    const FieldParams params{2, 1.0, L};
    const GridSpec grid = make_grid(params, oversampling);
    const std::uint64_t row_seed =
        derive_seed(master_seed, static_cast<std::uint64_t>(std::llround(L)), 17);
    std::vector<double> m0(static_cast<std::size_t>(seeds));
    std::vector<double> m1(static_cast<std::size_t>(seeds));
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(seeds), 0);
    parallel_for(seeds, threads, [&](std::int64_t t) {
        const auto sample = sample_field(
            params, grid, derive_seed(row_seed, static_cast<std::uint64_t>(t)));
        const auto counts = restricted_critical_points(sample);
        m0[static_cast<std::size_t>(t)] = static_cast<double>(counts.m0);
        m1[static_cast<std::size_t>(t)] = static_cast<double>(counts.m1);
        flags[static_cast<std::size_t>(t)] = counts.flagged ? 1 : 0;
    });
    MorseRestrictionReport report;
    report.L = L;
    report.seeds = seeds;
    report.m0_mean = mean_of(m0);
    report.m1_mean = mean_of(m1);
    report.predicted_per_index = kac_rice_prediction_per_index(L);
    report.ratio =
        (report.m0_mean + report.m1_mean) / (2.0 * report.predicted_per_index);
    for (const auto f : flags) report.flagged += f;
    return report;
}

}  // namespace cfgf
