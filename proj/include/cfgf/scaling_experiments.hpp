#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cfgf/constants.hpp"
#include "cfgf/errors.hpp"
#include "cfgf/field_sampler.hpp"
#include "cfgf/nodal_topology.hpp"
#include "cfgf/parallel.hpp"
#include "cfgf/philox.hpp"
#include "cfgf/stats.hpp"

namespace cfgf {

// One row of a scaling study at a fixed cutoff L.  `normalized` is
// mean_N / L^{n/2} in the subcritical regime and mean_N * sqrt(ln sqrt(L)) /
// L^{n/2} in the critical regime.  The rho fields are -1 when no diameter
// threshold was requested (subcritical runs).
struct ScalingRow {
    double L = 0.0;
    std::int64_t seeds = 0;
    double mean_N = 0.0;
    double std_error = 0.0;
    double normalized = 0.0;
    double mean_N_rho = -1.0;
    double std_error_rho = -1.0;
};

namespace detail {

inline void check_l_grid(const std::vector<double>& l_grid) {
    if (l_grid.empty()) throw ParamError("scaling: empty L grid");
    for (std::size_t i = 0; i < l_grid.size(); ++i) {
        if (!(l_grid[i] > 1.0))
            throw ParamError("scaling: cutoffs must exceed 1, got " +
                             std::to_string(l_grid[i]));
        if (i > 0 && !(l_grid[i] > l_grid[i - 1]))
            throw ParamError("scaling: L grid must be strictly increasing");
    }
}

inline std::int64_t count_components(const FieldSample& sample) {
    if (sample.params.n == 2) return count_components_2d(sample).N;
    return count_components_nd(sample).N;
}

// Counts per seed for one cutoff; when rho >= 0 also the small-diameter
// counts.  Results land in slots indexed by the seed position, so the output
// is independent of the thread count.
struct RowCounts {
    std::vector<double> n;
    std::vector<double> n_rho;
};

inline RowCounts row_counts(const FieldParams& params, std::int64_t seeds,
                            std::uint64_t row_seed, double rho,
                            double oversampling, int threads) {
    const GridSpec grid = make_grid(params, oversampling);
    RowCounts out;
    out.n.assign(static_cast<std::size_t>(seeds), 0.0);
    if (rho >= 0.0) out.n_rho.assign(static_cast<std::size_t>(seeds), 0.0);
    parallel_for(seeds, threads, [&](std::int64_t t) {
        const std::uint64_t seed =
            derive_seed(row_seed, static_cast<std::uint64_t>(t));
        const FieldSample sample = sample_field(params, grid, seed);
        if (rho >= 0.0) {
            auto report = count_components_2d(sample);
            report = component_diameters(report, params, rho);
            out.n[static_cast<std::size_t>(t)] = static_cast<double>(report.N);
            out.n_rho[static_cast<std::size_t>(t)] =
                static_cast<double>(report.N_rho);
        } else {
            out.n[static_cast<std::size_t>(t)] =
                static_cast<double>(count_components(sample));
        }
    });
    return out;
}

}  // namespace detail

// Subcritical scaling study: s < n/2 (s may be negative).  Counts nodal
// components over `seeds` independent draws at each cutoff and reports the
// normalization mean_N / L^{n/2}, whose stabilization along the grid is the
// testable convergence claim.  Seed streams: row L uses
// derive_seed(master_seed, round(L)), seed t within the row uses
// derive_seed(row_seed, t), so rows are independent and reproducible.
inline std::vector<ScalingRow> subcritical_study(
    int n, double s, const std::vector<double>& l_grid, std::int64_t seeds,
    std::uint64_t master_seed = kDefaultSeed, double oversampling = 8.0,
    int threads = 1) {
    if (n != 2 && n != 3)
        throw ParamError("subcritical_study: component counting needs n in {2,3}");
    if (!(s < 0.5 * n))
        throw RegimeError("subcritical_study: requires s < n/2, got s = " +
                          std::to_string(s));
    detail::check_l_grid(l_grid);
    if (seeds < 2) throw ParamError("subcritical_study: need >= 2 seeds");
    std::vector<ScalingRow> rows;
    rows.reserve(l_grid.size());
    for (const double L : l_grid) {
        const FieldParams params{n, s, L};
        const std::uint64_t row_seed = derive_seed(
            master_seed, static_cast<std::uint64_t>(std::llround(L)));
        const auto counts =
            detail::row_counts(params, seeds, row_seed, -1.0, oversampling, threads);
        ScalingRow row;
        row.L = L;
        row.seeds = seeds;
        row.mean_N = mean_of(counts.n);
        row.std_error = std_error_of(counts.n);
        row.normalized = row.mean_N / std::pow(L, 0.5 * n);
        rows.push_back(row);
    }
    return rows;
}

// Critical scaling study: s = n/2 implicitly.  Reports the normalization
// mean_N * sqrt(ln sqrt(L)) / L^{n/2} together with the small-diameter count
// N_rho (threshold rho * L^{-1/2}).  Restricted to n = 2: the diameter
// thresholding rides on the contour tracer.
inline std::vector<ScalingRow> critical_study(
    int n, const std::vector<double>& l_grid, std::int64_t seeds, double rho,
    std::uint64_t master_seed = kDefaultSeed, double oversampling = 8.0,
    int threads = 1) {
    if (n != 2)
        throw ParamError("critical_study: diameter thresholding needs n = 2");
    if (!(rho >= 0.0)) throw ParamError("critical_study: rho must be >= 0");
    detail::check_l_grid(l_grid);
    if (seeds < 2) throw ParamError("critical_study: need >= 2 seeds");
    std::vector<ScalingRow> rows;
    rows.reserve(l_grid.size());
    for (const double L : l_grid) {
        const FieldParams params{n, 0.5 * n, L};
        const std::uint64_t row_seed = derive_seed(
            master_seed, static_cast<std::uint64_t>(std::llround(L)));
        const auto counts =
            detail::row_counts(params, seeds, row_seed, rho, oversampling, threads);
        const double log_factor = std::sqrt(std::log(std::sqrt(L)));
        ScalingRow row;
        row.L = L;
        row.seeds = seeds;
        row.mean_N = mean_of(counts.n);
        row.std_error = std_error_of(counts.n);
        row.normalized = row.mean_N * log_factor / std::pow(L, 0.5 * n);
        row.mean_N_rho = mean_of(counts.n_rho);
        row.std_error_rho = std_error_of(counts.n_rho);
        rows.push_back(row);
    }
    return rows;
}

// Stabilization diagnostic: |normalized_i - normalized_{i-1}| / normalized_{i-1}
// for consecutive rows.  Element i corresponds to the step into row i+1.
inline std::vector<double> successive_relative_changes(
    const std::vector<ScalingRow>& rows) {
    if (rows.size() < 2)
        throw ParamError("successive_relative_changes: need >= 2 rows");
    std::vector<double> changes;
    changes.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i - 1].normalized > 0.0))
            throw PreconditionError("successive_relative_changes: nonpositive normalization");
        changes.push_back(std::abs(rows[i].normalized - rows[i - 1].normalized) /
                          rows[i - 1].normalized);
    }
    return changes;
}

// Per-seed coefficient of variation of N_L at one cutoff; the subcritical L^1
// law predicts this decreases along the L grid.
inline double count_coefficient_of_variation(
    int n, double s, double L, std::int64_t seeds,
    std::uint64_t master_seed = kDefaultSeed, double oversampling = 8.0,
    int threads = 1) {
    if (n != 2 && n != 3)
        throw ParamError("count_coefficient_of_variation: n in {2,3}");
    if (seeds < 2) throw ParamError("count_coefficient_of_variation: need >= 2 seeds");
    const FieldParams params{n, s, L};
    const std::uint64_t row_seed =
        derive_seed(master_seed, static_cast<std::uint64_t>(std::llround(L)));
    const auto counts =
        detail::row_counts(params, seeds, row_seed, -1.0, oversampling, threads);
    const double mean = mean_of(counts.n);
    if (!(mean > 0.0))
        throw PreconditionError("count_coefficient_of_variation: zero mean count");
    return std::sqrt(variance_of(counts.n)) / mean;
}

}  // namespace cfgf
