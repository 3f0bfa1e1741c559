#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "cfgf/errors.hpp"
#include "cfgf/field_sampler.hpp"
#include "cfgf/quadrature.hpp"
#include "cfgf/torus_spectrum.hpp"

// Checks of the covariance asymptotics: in the critical regime s = n/2 the
// kernel follows a log profile
//   K_L(x,y) = (|S^{n-1}|/(2pi)^n) (ln(sqrt(L)) - ln_+(sqrt(L)|x-y|)) + O(1),
// and after rescaling by sqrt(L) the kernel (with analytic derivatives)
// converges to an explicit integral over the unit spectral ball.

namespace cfgf {

inline double ln_plus(double t) { return (t > 1.0) ? std::log(t) : 0.0; }

struct KernelProfile {
    FieldParams params;
    std::vector<double> L_grid;
    std::vector<double> separations;
    // residuals[a][b] = K_{L_a}((r_b, 0, ...), 0) - predicted(L_a, r_b)
    std::vector<std::vector<double>> kernel;
    std::vector<std::vector<double>> predicted;
    std::vector<std::vector<double>> residuals;
    double max_abs_residual = 0.0;
};

// Critical-regime log profile along the first coordinate axis.
inline KernelProfile critical_log_profile(const FieldParams& params,
                                          const std::vector<double>& L_grid,
                                          const std::vector<double>& separations) {
    params.validate();
    if (params.regime() != Regime::critical)
        throw RegimeError("critical_log_profile requires s = n/2, got s = " +
                          std::to_string(params.s));
    KernelProfile prof;
    prof.params = params;
    prof.L_grid = L_grid;
    prof.separations = separations;
    const double coeff =
        sphere_area(params.n) / std::pow(2.0 * std::numbers::pi, params.n);
    for (double L : L_grid) {
        FieldParams pl = params;
        pl.L = L;
        std::vector<double> krow, prow, rrow;
        for (double r : separations) {
            double x[3] = {r, 0.0, 0.0};
            double y[3] = {0.0, 0.0, 0.0};
            const double k = covariance(pl, x, y);
            const double pred =
                coeff * (std::log(std::sqrt(L)) - ln_plus(std::sqrt(L) * r));
            krow.push_back(k);
            prow.push_back(pred);
            rrow.push_back(k - pred);
            prof.max_abs_residual = std::max(prof.max_abs_residual, std::abs(k - pred));
        }
        prof.kernel.push_back(std::move(krow));
        prof.predicted.push_back(std::move(prow));
        prof.residuals.push_back(std::move(rrow));
    }
    return prof;
}

// Non-growing residual check: max |residual| over the last third of the
// L grid must not exceed `factor` times the max over the first third.
inline bool residuals_non_growing(const KernelProfile& prof, double factor = 1.2) {
    const std::size_t rows = prof.residuals.size();
    if (rows < 2) return true;
    const std::size_t third = std::max<std::size_t>(1, rows / 3);
    double first = 0.0, last = 0.0;
    for (std::size_t a = 0; a < third; ++a)
        for (double v : prof.residuals[a]) first = std::max(first, std::abs(v));
    for (std::size_t a = rows - third; a < rows; ++a)
        for (double v : prof.residuals[a]) last = std::max(last, std::abs(v));
    return last <= factor * first;
}

// Limit of the rescaled kernel:
//   (1/(2pi)^n) int_{|xi|<=1} e^{i<xi,x-y>} (i xi)^a (-i xi)^b |xi|^{-2s} dxi.
// Defined for s < n/2, and for s = n/2 when (a,b) != 0.
inline double rescaled_kernel_limit(const FieldParams& params, const double* x,
                                    const double* y,
                                    const std::array<int, 3>& alpha,
                                    const std::array<int, 3>& beta) {
    params.validate();
    int deg = 0;
    for (int i = 0; i < params.n; ++i) deg += alpha[i] + beta[i];
    if (params.regime() == Regime::supercritical)
        throw RegimeError("rescaled_kernel_limit: supercritical s > n/2");
    if (params.regime() == Regime::critical && deg == 0)
        throw RegimeError(
            "rescaled_kernel_limit: |xi|^{-n} not integrable with alpha = beta = 0");
    double d[3] = {0, 0, 0};
    for (int i = 0; i < params.n; ++i) d[i] = x[i] - y[i];
    const std::array<int, 4> a4{alpha[0], alpha[1], alpha[2], 0};
    const std::array<int, 4> b4{beta[0], beta[1], beta[2], 0};
    return ball_spectral_integral(params.n, params.s, a4, b4, d);
}

// Finite-L side: L^{s - n/2} d^alpha d^beta K_L at rescaled separation,
// derivatives taken with respect to the rescaled arguments (each one
// contributes a factor L^{-1/2} relative to ambient derivatives).
inline double rescaled_kernel_finite(const FieldParams& params, const double* x,
                                     const double* y,
                                     const std::array<int, 3>& alpha,
                                     const std::array<int, 3>& beta) {
    params.validate();
    int deg = 0;
    for (int i = 0; i < params.n; ++i) deg += alpha[i] + beta[i];
    const double root_l = std::sqrt(params.L);
    double d[3] = {0, 0, 0};
    for (int i = 0; i < params.n; ++i) d[i] = (x[i] - y[i]) / root_l;
    const double scale =
        std::pow(params.L, params.s - 0.5 * params.n - 0.5 * double(deg));
    return scale * covariance_deriv(params, alpha, beta, d);
}

}  // namespace cfgf
