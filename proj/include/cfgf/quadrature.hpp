#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "cfgf/errors.hpp"

// Deterministic quadrature over the Euclidean unit ball in dimensions 1-4,
// in polar form: int_0^1 rho^p [ sphere average at radius rho ] drho.
// The radial factor rho^p (p > -1, possibly fractional) is handled by
// composite Gauss-Legendre on dyadic panels accumulating toward 0, which
// keeps full accuracy without assuming p is an integer. Angular integrals
// use trapezoid rules in the periodic angle (spectrally accurate) and
// Gauss-Legendre in cos(latitude).

namespace cfgf {

struct GaussLegendre {
    std::vector<double> node;    // on [-1, 1]
    std::vector<double> weight;
};

// Nodes/weights by Newton iteration on the Legendre recurrence.
inline GaussLegendre gauss_legendre(int n) {
    GaussLegendre gl;
    gl.node.resize(n);
    gl.weight.resize(n);
    const double pi = std::numbers::pi;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.node[i] = -x;
        gl.node[n - 1 - i] = x;
        gl.weight[i] = gl.weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

namespace detail {

// Evaluate h on the unit sphere S^{n-1} and integrate against surface
// measure. h receives a unit vector of length n.
template <typename F>
double sphere_integral(int n, F&& h) {
    const double tau = 2.0 * std::numbers::pi;
    static thread_local GaussLegendre gl48 = gauss_legendre(48);
    if (n == 1) {
        const double plus[1] = {1.0}, minus[1] = {-1.0};
        return h(plus) + h(minus);
    }
    if (n == 2) {
        const int ang = 96;
        double acc = 0.0;
        for (int i = 0; i < ang; ++i) {
            const double th = tau * i / ang;
            const double v[2] = {std::cos(th), std::sin(th)};
            acc += h(v);
        }
        return acc * tau / ang;
    }
    if (n == 3) {
        const int ang = 96;
        double acc = 0.0;
        for (int a = 0; a < 48; ++a) {
            const double t = gl48.node[a];  // cos(latitude)
            const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
            double ring = 0.0;
            for (int i = 0; i < ang; ++i) {
                const double th = tau * i / ang;
                const double v[3] = {st * std::cos(th), st * std::sin(th), t};
                ring += h(v);
            }
            acc += gl48.weight[a] * ring * tau / ang;
        }
        return acc;
    }
    if (n == 4) {
        // x = (cos p1, sin p1 cos p2, sin p1 sin p2 cos th, sin p1 sin p2 sin th)
        // with measure sin^2(p1) sin(p2) dp1 dp2 dth; p2 via t2 = cos(p2).
        double acc = 0.0;
        for (int a = 0; a < 48; ++a) {
            const double p1 = 0.5 * std::numbers::pi * (gl48.node[a] + 1.0);
            const double w1 = gl48.weight[a] * 0.5 * std::numbers::pi;
            const double c1 = std::cos(p1), s1 = std::sin(p1);
            double acc2 = 0.0;
            for (int b = 0; b < 48; ++b) {
                const double t2 = gl48.node[b];
                const double s2 = std::sqrt(std::max(0.0, 1.0 - t2 * t2));
                double ring = 0.0;
                for (int i = 0; i < 64; ++i) {
                    const double th = tau * i / 64;
                    const double v[4] = {c1, s1 * t2, s1 * s2 * std::cos(th),
                                         s1 * s2 * std::sin(th)};
                    ring += h(v);
                }
                acc2 += gl48.weight[b] * ring * tau / 64;
            }
            acc += w1 * s1 * s1 * acc2;
        }
        return acc;
    }
    throw ParamError("sphere_integral: n must be 1..4");
}

}  // namespace detail

// int_0^1 rho^p g(rho) drho with p > -1 and smooth g, by dyadic composite
// Gauss-Legendre; the number of panels adapts to how singular rho^p is.
template <typename G>
double radial_integral(double p, G&& g) {
    if (!(p > -1.0)) throw RegimeError("radial_integral: rho^p not integrable, p <= -1");
    static thread_local GaussLegendre gl = gauss_legendre(24);
    const int levels = std::max(40, static_cast<int>(std::ceil(60.0 / (p + 1.0))));
    double acc = 0.0;
    double hi = 1.0;
    for (int lvl = 0; lvl < levels; ++lvl) {
        const double lo = hi * 0.5;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double panel = 0.0;
        for (std::size_t i = 0; i < gl.node.size(); ++i) {
            const double rho = mid + half * gl.node[i];
            panel += gl.weight[i] * std::pow(rho, p) * g(rho);
        }
        acc += panel * half;
        hi = lo;
    }
    return acc;  // remaining mass over [0, 2^-levels] is below 1e-16
}

// Real value of (1/(2pi)^n) int_{B^n} e^{i<xi,d>} (i xi)^alpha (-i xi)^beta
// |xi|^{-2s} dxi. alpha/beta are multi-indices; d may be null (treated as 0).
inline double ball_spectral_integral(int n, double s, const std::array<int, 4>& alpha,
                                     const std::array<int, 4>& beta,
                                     const double* d = nullptr) {
    if (n < 1 || n > 4) throw ParamError("ball_spectral_integral: n must be 1..4");
    int deg = 0;
    std::array<int, 4> gamma{};
    int abs_a = 0, abs_b = 0;
    for (int i = 0; i < n; ++i) {
        gamma[i] = alpha[i] + beta[i];
        deg += gamma[i];
        abs_a += alpha[i];
        abs_b += beta[i];
    }
    const double p = double(n - 1) - 2.0 * s + double(deg);
    if (!(p > -1.0))
        throw RegimeError("ball_spectral_integral: |xi|^{-2s} xi^gamma not integrable");

    const int q = ((abs_a - abs_b) % 4 + 4) % 4;
    const bool no_phase = (d == nullptr) || [&] {
        for (int i = 0; i < n; ++i)
            if (d[i] != 0.0) return false;
        return true;
    }();

    // angular integral at radius rho: int_S theta^gamma Re[i^q e^{i rho theta.d}]
    auto angular = [&](double rho) {
        return detail::sphere_integral(n, [&](const double* v) {
            double mono = 1.0;
            for (int i = 0; i < n; ++i)
                for (int t = 0; t < gamma[i]; ++t) mono *= v[i];
            double phase = 0.0;
            if (!no_phase)
                for (int i = 0; i < n; ++i) phase += rho * v[i] * d[i];
            double re;
            switch (q) {
                case 0: re = std::cos(phase); break;
                case 1: re = -std::sin(phase); break;
                case 2: re = -std::cos(phase); break;
                default: re = std::sin(phase); break;
            }
            return mono * re;
        });
    };

    double value;
    if (no_phase) {
        const double ang = angular(1.0);  // independent of rho
        value = radial_integral(p, [&](double) { return 1.0; }) * ang;
    } else {
        value = radial_integral(p, angular);
    }
    return value / std::pow(2.0 * std::numbers::pi, n);
}

// Surface area of S^{n-1}.
inline double sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace cfgf
