#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cfgf/constants.hpp"
#include "cfgf/errors.hpp"
#include "cfgf/field_sampler.hpp"
#include "cfgf/nodal_topology.hpp"
#include "cfgf/parallel.hpp"
#include "cfgf/philox.hpp"
#include "cfgf/stats.hpp"

// Probabilistic inequality checks: positive association (FKG) for
// nonnegatively correlated Gaussian vectors, Borell-TIS-type supremum tails,
// and the barrier-probability experiment (a nodal component forced inside a
// shrinking ball, with probability of order 1/sqrt(ln lambda)).

namespace cfgf {

// ---------------------------------------------------------------------------
// Parameter records

struct SupTailParams {
    double sigma2 = 1.0;  // max pointwise variance bound
    double D = 1.0;       // Hoelder constant: E[(g(x)-g(y))^2] <= D^2 |x-y|^alpha
    double alpha = 2.0;   // Hoelder exponent in (0, 2]
    double C = 0.0;       // domain constant, calibrated as empirical E[sup]/D

    void validate() const {
        if (!(sigma2 > 0.0)) throw ParamError("SupTailParams: sigma2 > 0 required");
        if (!(D > 0.0)) throw ParamError("SupTailParams: D > 0 required");
        if (!(alpha > 0.0 && alpha <= 2.0))
            throw ParamError("SupTailParams: alpha in (0, 2] required");
    }
};

struct BarrierParams {
    double a = 1.0;        // kernel O(1) bound
    double b = 1.0;        // Hoelder bound constant
    double alpha = 2.0;    // Hoelder exponent
    double rho = 12.0;     // barrier radius factor: ball radius rho / lambda
    double kappa = 0.0;    // probability constant (measured, not asserted)
    double lambda0 = 1.0;  // threshold scale

    void validate() const {
        if (!(a > 0.0 && b > 0.0 && rho > 0.0 && lambda0 > 0.0))
            throw ParamError("BarrierParams: a, b, rho, lambda0 must be positive");
        if (!(alpha > 0.0 && alpha <= 2.0))
            throw ParamError("BarrierParams: alpha in (0, 2] required");
        if (kappa < 0.0) throw ParamError("BarrierParams: kappa >= 0 required");
    }
};

// ---------------------------------------------------------------------------
// FKG check

// Increasing threshold event {X_i >= t_i for i in indices}.
struct FkgEvent {
    std::vector<int> indices;
    std::vector<double> thresholds;

    void validate(int dim) const {
        if (indices.empty()) throw ParamError("FkgEvent: empty index set");
        if (indices.size() != thresholds.size())
            throw ParamError("FkgEvent: index/threshold size mismatch");
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (indices[i] < 0 || indices[i] >= dim)
                throw ParamError("FkgEvent: index out of range");
            for (std::size_t j = 0; j < i; ++j)
                if (indices[j] == indices[i])
                    throw ParamError("FkgEvent: duplicate index");
        }
    }
};

struct FkgVerdict {
    double p_ab = 0.0;
    double p_a = 0.0;
    double p_b = 0.0;
    double margin_std_error = 0.0;  // stderr of p_ab - p_a p_b (delta method)
    std::int64_t samples = 0;
    bool pass = false;
};

namespace detail {

// Lower-triangular factor L with L L^T = cov for a PSD matrix; exactly
// singular directions get a zero column.  Rejects non-PSD input.
inline std::vector<double> psd_cholesky(const std::vector<double>& cov, int dim) {
    double scale = 0.0;
    for (int i = 0; i < dim; ++i) scale = std::max(scale, std::abs(cov[i * dim + i]));
    if (!(scale > 0.0)) scale = 1.0;
    const double tol = 1e-12 * scale;
    std::vector<double> fac(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int j = 0; j < dim; ++j) {
        double d = cov[j * dim + j];
        for (int k = 0; k < j; ++k) d -= fac[j * dim + k] * fac[j * dim + k];
        if (d < -tol) throw ParamError("fkg_check: covariance is not PSD");
        if (d <= tol) {
            // semidefinite pivot: the rest of the column must vanish too
            for (int i = j + 1; i < dim; ++i) {
                double off = cov[i * dim + j];
                for (int k = 0; k < j; ++k) off -= fac[i * dim + k] * fac[j * dim + k];
                if (std::abs(off) > 1e-6 * scale)
                    throw ParamError("fkg_check: covariance is not PSD");
            }
            continue;
        }
        const double root = std::sqrt(d);
        fac[j * dim + j] = root;
        for (int i = j + 1; i < dim; ++i) {
            double off = cov[i * dim + j];
            for (int k = 0; k < j; ++k) off -= fac[i * dim + k] * fac[j * dim + k];
            fac[i * dim + j] = off / root;
        }
    }
    return fac;
}

inline void standard_normals(std::uint64_t seed, int count, double* out) {
    for (int j = 0; j < count; j += 2) {
        const auto z = gaussian_pair(seed, static_cast<std::uint64_t>(j / 2));
        out[j] = z[0];
        if (j + 1 < count) out[j + 1] = z[1];
    }
}

}  // namespace detail

// Monte Carlo verdict on P[A and B] >= P[A] P[B] for the centered Gaussian
// vector with the given row-major covariance (all entries nonnegative) and
// two increasing threshold events.  PASS means the estimate violates the
// inequality by no more than 3 delta-method standard errors.
inline FkgVerdict fkg_check(const std::vector<double>& covariance, int dim,
                            const FkgEvent& a, const FkgEvent& b,
                            std::int64_t samples = 100000,
                            std::uint64_t seed = kDefaultSeed) {
    if (dim < 1) throw ParamError("fkg_check: dim >= 1 required");
    if (covariance.size() != static_cast<std::size_t>(dim) * dim)
        throw ParamError("fkg_check: covariance size != dim^2");
    if (samples < 100) throw ParamError("fkg_check: samples >= 100 required");
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            if (covariance[i * dim + j] < 0.0)
                throw PreconditionError("fkg_check: negative covariance entry");
            if (covariance[i * dim + j] != covariance[j * dim + i])
                throw ParamError("fkg_check: covariance not symmetric");
        }
    a.validate(dim);
    b.validate(dim);
    const auto fac = detail::psd_cholesky(covariance, dim);

    std::int64_t n_ab = 0, n_a = 0, n_b = 0;
    std::vector<double> z(static_cast<std::size_t>(dim));
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (std::int64_t t = 0; t < samples; ++t) {
        detail::standard_normals(derive_seed(seed, static_cast<std::uint64_t>(t)),
                                 dim, z.data());
        for (int i = 0; i < dim; ++i) {
            double acc = 0.0;
            for (int k = 0; k <= i; ++k) acc += fac[i * dim + k] * z[k];
            x[static_cast<std::size_t>(i)] = acc;
        }
        auto holds = [&](const FkgEvent& ev) {
            for (std::size_t i = 0; i < ev.indices.size(); ++i)
                if (x[static_cast<std::size_t>(ev.indices[i])] < ev.thresholds[i])
                    return false;
            return true;
        };
        const bool ha = holds(a), hb = holds(b);
        n_a += ha;
        n_b += hb;
        n_ab += ha && hb;
    }

    FkgVerdict v;
    v.samples = samples;
    const double n = static_cast<double>(samples);
    v.p_ab = static_cast<double>(n_ab) / n;
    v.p_a = static_cast<double>(n_a) / n;
    v.p_b = static_cast<double>(n_b) / n;
    // delta method for D = p_ab - p_a p_b with multinomial covariances
    const double var_ab = v.p_ab * (1.0 - v.p_ab) / n;
    const double var_a = v.p_a * (1.0 - v.p_a) / n;
    const double var_b = v.p_b * (1.0 - v.p_b) / n;
    const double cov_ab_a = v.p_ab * (1.0 - v.p_a) / n;
    const double cov_ab_b = v.p_ab * (1.0 - v.p_b) / n;
    const double cov_a_b = (v.p_ab - v.p_a * v.p_b) / n;
    const double var_d = var_ab + v.p_b * v.p_b * var_a + v.p_a * v.p_a * var_b -
                         2.0 * v.p_b * cov_ab_a - 2.0 * v.p_a * cov_ab_b +
                         2.0 * v.p_a * v.p_b * cov_a_b;
    v.margin_std_error = std::sqrt(std::max(var_d, 0.0));
    v.pass = v.p_ab >= v.p_a * v.p_b - 3.0 * v.margin_std_error;
    return v;
}

// Closed-form bivariate orthant probability P[X1 >= 0, X2 >= 0] at
// correlation rho.
inline double orthant_probability(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0))
        throw ParamError("orthant_probability: rho in [-1, 1]");
    return 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
}

// Randomized nonnegative-covariance instance (dimension <= 8) with two
// increasing events on the first and last halves of the coordinates.
struct FkgInstance {
    int dim = 0;
    std::vector<double> covariance;
    FkgEvent a, b;
};

inline FkgInstance random_fkg_instance(int dim, std::uint64_t seed) {
    if (dim < 2 || dim > 8) throw ParamError("random_fkg_instance: dim in [2, 8]");
    FkgInstance inst;
    inst.dim = dim;
    // G with entrywise |N(0,1)| makes G G^T PSD with nonnegative entries
    std::vector<double> g(static_cast<std::size_t>(dim) * dim);
    detail::standard_normals(derive_seed(seed, 1), dim * dim, g.data());
    for (double& v : g) v = std::abs(v);
    inst.covariance.assign(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            double acc = 0.0;
            for (int k = 0; k < dim; ++k) acc += g[i * dim + k] * g[j * dim + k];
            inst.covariance[i * dim + j] = acc;
        }
    std::vector<double> t(static_cast<std::size_t>(dim));
    detail::standard_normals(derive_seed(seed, 2), dim, t.data());
    const int half = (dim + 1) / 2;
    for (int i = 0; i < half; ++i) {
        inst.a.indices.push_back(i);
        inst.a.thresholds.push_back(0.5 * t[static_cast<std::size_t>(i)]);
    }
    for (int i = dim - half; i < dim; ++i) {
        inst.b.indices.push_back(i);
        inst.b.thresholds.push_back(0.5 * t[static_cast<std::size_t>(i)]);
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Supremum tail check

struct SupTailCurve {
    SupTailParams params;  // C filled with the calibrated empirical E[sup]/D
    std::vector<double> u_values;
    std::vector<double> empirical;  // P[sup >= C D + u]
    std::vector<double> bound;      // 2 exp(-u^2 / (2 sigma^2))
    std::int64_t samples = 0;
};

// Compares the empirical tail of M = sup g against the Borell-TIS-type bound
// 2 exp(-u^2/(2 sigma^2)).  `sup_sampler(seed)` returns one independent draw
// of the supremum; C is calibrated as the empirical mean of M over D.
template <typename SupSampler>
SupTailCurve sup_tail_check(SupTailParams params, SupSampler&& sup_sampler,
                            const std::vector<double>& u_values,
                            std::int64_t samples = 100000,
                            std::uint64_t seed = kDefaultSeed) {
    params.validate();
    if (u_values.empty()) throw ParamError("sup_tail_check: no u values");
    for (double u : u_values)
        if (!(u > 0.0)) throw ParamError("sup_tail_check: u > 0 required");
    if (samples < 100) throw ParamError("sup_tail_check: samples >= 100 required");

    std::vector<double> sups(static_cast<std::size_t>(samples));
    for (std::int64_t t = 0; t < samples; ++t)
        sups[static_cast<std::size_t>(t)] =
            sup_sampler(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const double mean_sup = mean_of(sups);

    SupTailCurve curve;
    curve.params = params;
    curve.params.C = mean_sup / params.D;
    curve.u_values = u_values;
    curve.samples = samples;
    const double level_base = curve.params.C * params.D;
    for (double u : u_values) {
        std::int64_t hits = 0;
        for (double s : sups) hits += (s >= level_base + u);
        curve.empirical.push_back(static_cast<double>(hits) /
                                  static_cast<double>(samples));
        curve.bound.push_back(2.0 * std::exp(-u * u / (2.0 * params.sigma2)));
    }
    return curve;
}

// Stationary 1-d test field g(x) = z1 cos(2 pi x) + z2 sin(2 pi x) on [0, 1]:
// the phase sweeps a full period, so sup g equals the Rayleigh amplitude
// sqrt(z1^2 + z2^2) and P[sup >= t] = exp(-t^2/2) exactly.
inline double rayleigh_wave_sup(std::uint64_t seed) {
    const auto z = gaussian_pair(seed, 0);
    return std::sqrt(z[0] * z[0] + z[1] * z[1]);
}

// Default field of the tail lemma: the critical torus field restricted to the
// ball of radius 1/lambda = L^{-1/2} around the origin (sup over the grid
// points inside the ball).
inline double critical_ball_sup(const FieldParams& params, const GridSpec& grid,
                                std::uint64_t seed) {
    if (params.n != 2) throw ParamError("critical_ball_sup: n = 2 required");
    const FieldSample sample = sample_field(params, grid, seed);
    const double r = 1.0 / std::sqrt(params.L);
    const double h = grid.spacing();
    const std::int64_t k = static_cast<std::int64_t>(r / h) + 1;
    const std::int64_t m = grid.m;
    double best = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = -k; i <= k; ++i)
        for (std::int64_t j = -k; j <= k; ++j) {
            if (static_cast<double>(i) * i * h * h +
                    static_cast<double>(j) * j * h * h >
                r * r)
                continue;
            best = std::max(best, sample.at((i % m + m) % m, (j % m + m) % m));
        }
    return best;
}

// ---------------------------------------------------------------------------
// Barrier probability

struct BarrierRow {
    double L = 0.0;
    double lambda = 0.0;  // sqrt(L)
    double rho = 0.0;
    std::int64_t seeds = 0;
    double q = 0.0;            // fraction of seeds with a contained component
    double std_error = 0.0;    // binomial stderr of q
    double q_normalized = 0.0; // q * sqrt(ln lambda)
    double sub_freq = 0.0;     // empirical P[-1 <= f(x0) < 0]
    double sub_pred = 0.0;     // exact Gaussian probability Phi(0)-Phi(-1/sigma)
    double sub_density = 0.0;  // density approximation (2 pi Var)^(-1/2)
    std::int64_t audit_checked = 0;
    std::int64_t audit_agreed = 0;
};

namespace detail {

// Patch of nudged values around grid point (0,0): points with indices in
// [-K, K]^2, K chosen so the whole closed ball of radius r plus one cell of
// margin fits strictly inside.
struct BallPatch {
    int points = 0;  // points per axis, 2K+1
    int K = 0;
    double h = 0.0;
    double r = 0.0;
    std::vector<double> values;  // row-major (i + K) * points + (j + K)

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i + K) * points + (j + K)];
    }
};

inline BallPatch make_ball_patch(const FieldSample& sample, double r) {
    const std::int64_t m = sample.grid.m;
    const double h = sample.grid.spacing();
    BallPatch patch;
    patch.K = static_cast<int>(std::ceil(r / h)) + 2;
    patch.points = 2 * patch.K + 1;
    patch.h = h;
    patch.r = r;
    if (2 * static_cast<std::int64_t>(patch.K) + 1 > m)
        throw ResolutionError("barrier: ball patch exceeds the grid period");
    const auto vals = nudged_values(sample);
    patch.values.resize(static_cast<std::size_t>(patch.points) * patch.points);
    for (int i = -patch.K; i <= patch.K; ++i)
        for (int j = -patch.K; j <= patch.K; ++j)
            patch.values[static_cast<std::size_t>(i + patch.K) * patch.points +
                         (j + patch.K)] =
                vals[static_cast<std::size_t>(((i % m + m) % m) * m +
                                              ((j % m + m) % m))];
    return patch;
}

// Marching-squares detector on the patch: true when some closed nodal curve
// has every crossing point strictly inside the open ball.  Open contours
// (reaching the patch border) never qualify.  Same linear interpolation and
// bilinear-center saddle rule as the global tracer.
inline bool ball_contains_component(const BallPatch& patch) {
    const int P = patch.points;
    const int n_e0 = (P - 1) * P;  // axis-0 edges: (ei, ej), ei < P-1
    const int n_edges = n_e0 + P * (P - 1);
    auto e0_id = [&](int ei, int ej) { return ei * P + ej; };
    auto e1_id = [&](int ei, int ej) { return n_e0 + ei * (P - 1) + ej; };

    struct Link {
        int cell = -1;
        int partner = -1;
    };
    std::vector<std::array<Link, 2>> links(static_cast<std::size_t>(n_edges));
    std::vector<std::uint8_t> link_count(static_cast<std::size_t>(n_edges), 0);
    auto add_segment = [&](int cell, int e1, int e2) {
        if (link_count[e1] >= 2 || link_count[e2] >= 2)
            throw Error("barrier: edge incidence overflow");
        links[e1][link_count[e1]++] = {cell, e2};
        links[e2][link_count[e2]++] = {cell, e1};
    };

    for (int ci = 0; ci + 1 < P; ++ci)
        for (int cj = 0; cj + 1 < P; ++cj) {
            const double va = patch.at(ci - patch.K, cj - patch.K);
            const double vb = patch.at(ci + 1 - patch.K, cj - patch.K);
            const double vc = patch.at(ci + 1 - patch.K, cj + 1 - patch.K);
            const double vd = patch.at(ci - patch.K, cj + 1 - patch.K);
            const bool sa = va > 0, sb = vb > 0, sc = vc > 0, sd = vd > 0;
            if (sa == sb && sb == sc && sc == sd) continue;
            const int cell = ci * (P - 1) + cj;
            const int ea = e0_id(ci, cj);
            const int eb = e1_id(ci + 1, cj);
            const int ec = e0_id(ci, cj + 1);
            const int ed = e1_id(ci, cj);
            const bool xa = sa != sb, xb = sb != sc, xc = sd != sc, xd = sa != sd;
            const int crossings = int(xa) + int(xb) + int(xc) + int(xd);
            if (crossings == 2) {
                int pair[2];
                int w = 0;
                if (xa) pair[w++] = ea;
                if (xb) pair[w++] = eb;
                if (xc) pair[w++] = ec;
                if (xd) pair[w++] = ed;
                add_segment(cell, pair[0], pair[1]);
            } else if (crossings == 4) {
                const bool center_pos = (va + vb + vc + vd) >= 0.0;
                if (center_pos == sa) {
                    add_segment(cell, ea, eb);
                    add_segment(cell, ec, ed);
                } else {
                    add_segment(cell, ea, ed);
                    add_segment(cell, eb, ec);
                }
            } else {
                throw Error("barrier: odd crossing parity");
            }
        }

    // crossing coordinates relative to the ball center x0 = (0, 0)
    auto edge_point = [&](int e) -> std::array<double, 2> {
        if (e < n_e0) {
            const int ei = e / P, ej = e % P;
            const double v0 = patch.at(ei - patch.K, ej - patch.K);
            const double v1 = patch.at(ei + 1 - patch.K, ej - patch.K);
            return {(ei - patch.K + v0 / (v0 - v1)) * patch.h,
                    static_cast<double>(ej - patch.K) * patch.h};
        }
        const int ei = (e - n_e0) / (P - 1), ej = (e - n_e0) % (P - 1);
        const double v0 = patch.at(ei - patch.K, ej - patch.K);
        const double v1 = patch.at(ei - patch.K, ej + 1 - patch.K);
        return {static_cast<double>(ei - patch.K) * patch.h,
                (ej - patch.K + v0 / (v0 - v1)) * patch.h};
    };

    std::vector<std::uint8_t> visited(static_cast<std::size_t>(n_edges), 0);
    const double r2 = patch.r * patch.r;
    for (int start = 0; start < n_edges; ++start) {
        if (visited[start] || link_count[start] == 0) continue;
        if (link_count[start] == 1) {
            // open contour leaving the patch: mark its whole chain visited
            int e = start, from_cell = -1;
            while (true) {
                visited[e] = 1;
                const Link* next = nullptr;
                for (int s = 0; s < link_count[e]; ++s)
                    if (links[e][s].cell != from_cell) next = &links[e][s];
                if (!next) break;
                from_cell = next->cell;
                e = next->partner;
                if (visited[e]) break;
            }
            continue;
        }
        // closed-candidate walk
        bool contained = true;
        {
            const auto p = edge_point(start);
            contained = p[0] * p[0] + p[1] * p[1] < r2;
        }
        int e = start, from_cell = -1;
        bool closed = true;
        std::int64_t guard = 0;
        do {
            visited[e] = 1;
            if (link_count[e] < 2) {
                closed = false;  // reached the patch border after all
                break;
            }
            const Link& use =
                (from_cell == -1 || links[e][0].cell != from_cell) ? links[e][0]
                                                                   : links[e][1];
            from_cell = use.cell;
            e = use.partner;
            const auto p = edge_point(e);
            if (!(p[0] * p[0] + p[1] * p[1] < r2)) contained = false;
            if (++guard > 4ll * n_edges) throw Error("barrier: walk did not close");
        } while (e != start);
        if (closed && contained) return true;
    }
    return false;
}

// Independent audit: flood fill of the sign field over patch points
// (4-adjacency plus the saddle-cell diagonal dictated by the bilinear center
// rule, so connectivity matches the traced curves).  Success when some sign
// region avoids the patch border and every crossing on its boundary lies
// strictly inside the ball.
inline bool ball_flood_audit(const BallPatch& patch) {
    const int P = patch.points;
    auto sign_at = [&](int i, int j) { return patch.at(i - patch.K, j - patch.K) > 0; };

    // saddle diagonals: for cell (ci, cj) a value of 1 joins corners
    // a=(ci,cj) and c=(ci+1,cj+1); 2 joins b=(ci+1,cj) and d=(ci,cj+1)
    std::vector<std::uint8_t> diag(static_cast<std::size_t>(P - 1) * (P - 1), 0);
    for (int ci = 0; ci + 1 < P; ++ci)
        for (int cj = 0; cj + 1 < P; ++cj) {
            const double va = patch.at(ci - patch.K, cj - patch.K);
            const double vb = patch.at(ci + 1 - patch.K, cj - patch.K);
            const double vc = patch.at(ci + 1 - patch.K, cj + 1 - patch.K);
            const double vd = patch.at(ci - patch.K, cj + 1 - patch.K);
            const bool sa = va > 0, sb = vb > 0, sc = vc > 0, sd = vd > 0;
            if (sa == sc && sb == sd && sa != sb) {
                const bool center_pos = (va + vb + vc + vd) >= 0.0;
                diag[static_cast<std::size_t>(ci) * (P - 1) + cj] =
                    (center_pos == sa) ? 1 : 2;
            }
        }

    const double r2 = patch.r * patch.r;
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(P) * P, 0);
    std::vector<int> queue;
    for (int si = 0; si < P; ++si)
        for (int sj = 0; sj < P; ++sj) {
            if (seen[static_cast<std::size_t>(si) * P + sj]) continue;
            const bool s = sign_at(si, sj);
            queue.clear();
            queue.push_back(si * P + sj);
            seen[static_cast<std::size_t>(si) * P + sj] = 1;
            bool touches_border = false;
            bool crossings_inside = true;
            bool has_crossing = false;
            std::size_t head = 0;
            auto try_push = [&](int i, int j) {
                if (i < 0 || i >= P || j < 0 || j >= P) return;
                if (seen[static_cast<std::size_t>(i) * P + j]) return;
                if (sign_at(i, j) != s) return;
                seen[static_cast<std::size_t>(i) * P + j] = 1;
                queue.push_back(i * P + j);
            };
            while (head < queue.size()) {
                const int cur = queue[head++];
                const int i = cur / P, j = cur % P;
                if (i == 0 || i == P - 1 || j == 0 || j == P - 1)
                    touches_border = true;
                // face neighbors: same sign extends the region, opposite sign
                // contributes a boundary crossing
                const int di[4] = {1, -1, 0, 0};
                const int dj[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    const int ni = i + di[d], nj = j + dj[d];
                    if (ni < 0 || ni >= P || nj < 0 || nj >= P) continue;
                    if (sign_at(ni, nj) == s) {
                        try_push(ni, nj);
                    } else {
                        has_crossing = true;
                        const double v0 = patch.at(i - patch.K, j - patch.K);
                        const double v1 = patch.at(ni - patch.K, nj - patch.K);
                        const double t = v0 / (v0 - v1);
                        const double x0 = (i - patch.K + t * (ni - i)) * patch.h;
                        const double x1 = (j - patch.K + t * (nj - j)) * patch.h;
                        if (!(x0 * x0 + x1 * x1 < r2)) crossings_inside = false;
                    }
                }
                // saddle diagonals join same-sign corners through the cell
                for (int ci = i - 1; ci <= i; ++ci)
                    for (int cj = j - 1; cj <= j; ++cj) {
                        if (ci < 0 || ci + 1 >= P || cj < 0 || cj + 1 >= P) continue;
                        const std::uint8_t dd =
                            diag[static_cast<std::size_t>(ci) * (P - 1) + cj];
                        if (dd == 0) continue;
                        if (dd == 1 && ((i == ci && j == cj) ||
                                        (i == ci + 1 && j == cj + 1))) {
                            try_push(ci + (i == ci ? 1 : 0), cj + (j == cj ? 1 : 0));
                        } else if (dd == 2 && ((i == ci + 1 && j == cj) ||
                                               (i == ci && j == cj + 1))) {
                            try_push(i == ci + 1 ? ci : ci + 1,
                                     j == cj ? cj + 1 : cj);
                        }
                    }
            }
            if (!touches_border && has_crossing && crossings_inside) return true;
        }
    return false;
}

}  // namespace detail

// Barrier experiment: for each cutoff, the fraction of seeds whose nodal set
// has a connected component contained strictly inside the open ball
// B(x0, rho / lambda) around the fixed grid point x0 = (0,0), lambda =
// sqrt(L).  Either enclosed sign counts.  Also tallies the sub-event
// -1 <= f(x0) < 0 against the exact Gaussian probability, and (optionally)
// audits the detector against the flood-fill method on the first
// `audit_seeds` seeds per row.
inline std::vector<BarrierRow> barrier_probability(
    const FieldParams& base, const std::vector<double>& l_grid, double rho,
    std::int64_t seeds, std::uint64_t master_seed = kDefaultSeed,
    double oversampling = 8.0, int threads = 1, std::int64_t audit_seeds = 0) {
    if (base.n != 2) throw ParamError("barrier_probability: n = 2 required");
    if (base.s != 0.5 * base.n)
        throw RegimeError("barrier_probability: critical regime s = n/2 required");
    if (!(rho > 0.0)) throw ParamError("barrier_probability: rho > 0 required");
    if (seeds < 2) throw ParamError("barrier_probability: seeds >= 2 required");
    if (audit_seeds < 0 || audit_seeds > seeds)
        throw ParamError("barrier_probability: audit_seeds in [0, seeds]");
    if (l_grid.empty()) throw ParamError("barrier_probability: empty L grid");
    for (std::size_t i = 0; i < l_grid.size(); ++i) {
        if (!(l_grid[i] > 1.0))
            throw ParamError("barrier_probability: cutoffs must exceed 1");
        if (i > 0 && !(l_grid[i] > l_grid[i - 1]))
            throw ParamError("barrier_probability: L grid must be strictly increasing");
    }

    std::vector<BarrierRow> rows;
    rows.reserve(l_grid.size());
    for (const double L : l_grid) {
        const FieldParams params{2, base.s, L};
        const GridSpec grid = make_grid(params, oversampling);
        const double h = grid.spacing();
        const double r = rho / std::sqrt(L);
        if (static_cast<std::int64_t>(std::floor(2.0 * r / h)) < 16)
            throw ResolutionError(
                "barrier_probability: ball under-resolved (< 16 cells across)");

        const std::uint64_t row_seed = derive_seed(
            master_seed, static_cast<std::uint64_t>(std::llround(L)), 29);
        std::vector<std::uint8_t> hit(static_cast<std::size_t>(seeds), 0);
        std::vector<std::uint8_t> agree(static_cast<std::size_t>(audit_seeds), 0);
        std::vector<double> f0(static_cast<std::size_t>(seeds), 0.0);
        parallel_for(seeds, threads, [&](std::int64_t t) {
            const auto sample = sample_field(
                params, grid, derive_seed(row_seed, static_cast<std::uint64_t>(t)));
            const auto patch = detail::make_ball_patch(sample, r);
            const bool found = detail::ball_contains_component(patch);
            hit[static_cast<std::size_t>(t)] = found ? 1 : 0;
            f0[static_cast<std::size_t>(t)] = sample.values[0];
            if (t < audit_seeds)
                agree[static_cast<std::size_t>(t)] =
                    (detail::ball_flood_audit(patch) == found) ? 1 : 0;
        });

        BarrierRow row;
        row.L = L;
        row.lambda = std::sqrt(L);
        row.rho = rho;
        row.seeds = seeds;
        std::int64_t successes = 0, sub = 0;
        for (std::int64_t t = 0; t < seeds; ++t) {
            successes += hit[static_cast<std::size_t>(t)];
            const double v = f0[static_cast<std::size_t>(t)];
            sub += (v >= -1.0 && v < 0.0);
        }
        const double n = static_cast<double>(seeds);
        row.q = static_cast<double>(successes) / n;
        row.std_error = std::sqrt(row.q * (1.0 - row.q) / n);
        row.q_normalized = row.q * std::sqrt(std::log(row.lambda));
        row.sub_freq = static_cast<double>(sub) / n;
        const double sigma = std::sqrt(variance_at_origin(params));
        row.sub_pred = 0.5 - 0.5 * std::erfc(1.0 / (sigma * std::numbers::sqrt2));
        row.sub_density = 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
        row.audit_checked = audit_seeds;
        for (const auto a : agree) row.audit_agreed += a;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cfgf
