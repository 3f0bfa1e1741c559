#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cfgf/errors.hpp"

namespace cfgf {

// Householder reduction of a symmetric matrix (row-major, m x m) to
// tridiagonal form.  On return d[k] holds the diagonal and off[k] the
// coupling between rows k and k+1 (off[m-1] unused, set to 0).  The input
// matrix is clobbered.  Only eigenvalues are needed downstream, so the
// orthogonal transform is not accumulated.
inline void tridiagonalize(std::vector<double>& a, int m, std::vector<double>& d,
                           std::vector<double>& off) {
    if (m < 1 || static_cast<std::size_t>(m) * m != a.size())
        throw ParamError("tridiagonalize: bad dimensions");
    d.assign(m, 0.0);
    off.assign(m, 0.0);
    auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * m + c]; };

    std::vector<double> v(m), p(m), q(m);
    for (int i = m - 1; i >= 2; --i) {
        // Annihilate row i to the left of column i-1 with a reflector acting
        // on coordinates 0..i-1.
        const int l = i - 1;
        double norm2 = 0.0;
        for (int k = 0; k <= l; ++k) norm2 += at(i, k) * at(i, k);
        if (norm2 == 0.0) {
            off[l] = 0.0;
            continue;
        }
        const double xl = at(i, l);
        double alpha = std::sqrt(norm2);
        if (xl > 0.0) alpha = -alpha;
        // v = x - alpha * e_l, nonzero by construction
        double vtv = 0.0;
        for (int k = 0; k <= l; ++k) {
            v[k] = at(i, k);
            if (k == l) v[k] -= alpha;
            vtv += v[k] * v[k];
        }
        const double beta = 2.0 / vtv;
        // p = beta * A_sub * v over the leading i x i block
        for (int r = 0; r <= l; ++r) {
            double s = 0.0;
            for (int c = 0; c <= l; ++c) s += at(r, c) * v[c];
            p[r] = beta * s;
        }
        double vtp = 0.0;
        for (int k = 0; k <= l; ++k) vtp += v[k] * p[k];
        const double kappa = 0.5 * beta * vtp;
        for (int k = 0; k <= l; ++k) q[k] = p[k] - kappa * v[k];
        // A_sub <- A_sub - v q^T - q v^T  (stays symmetric)
        for (int r = 0; r <= l; ++r)
            for (int c = 0; c <= r; ++c) {
                const double upd = v[r] * q[c] + q[r] * v[c];
                at(r, c) -= upd;
                if (c != r) at(c, r) = at(r, c);
            }
        off[l] = alpha;
        at(i, l) = alpha;
    }
    if (m >= 2) off[0] = at(1, 0);
    for (int k = 0; k < m; ++k) d[k] = at(k, k);
    off[m - 1] = 0.0;
}

// QL iteration with implicit shifts on a symmetric tridiagonal matrix.
// d[k] diagonal, off[k] couples k and k+1.  Eigenvalues replace d, sorted
// ascending.
inline void ql_eigenvalues(std::vector<double>& d, std::vector<double>& off) {
    const int m = static_cast<int>(d.size());
    if (m == 0) return;
    off[m - 1] = 0.0;
    for (int l = 0; l < m; ++l) {
        int iter = 0;
        int mm;
        do {
            for (mm = l; mm < m - 1; ++mm) {
                const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
                if (std::abs(off[mm]) <= 1e-300 || std::abs(off[mm]) <= 1e-15 * dd) break;
            }
            if (mm != l) {
                if (++iter > 64)
                    throw Error("ql_eigenvalues: too many iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * off[l]);
                double r = std::hypot(g, 1.0);
                g = d[mm] - d[l] + off[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = mm - 1;
                for (; i >= l; --i) {
                    double f = s * off[i];
                    const double b = c * off[i];
                    r = std::hypot(f, g);
                    off[i + 1] = r;
                    if (r == 0.0) {
                        // lost significance mid-sweep: undo the shift on this
                        // row and restart the sweep
                        d[i + 1] -= p;
                        off[mm] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                off[l] = g;
                off[mm] = 0.0;
            }
        } while (mm != l);
    }
    std::sort(d.begin(), d.end());
}

// Eigenvalues of a symmetric matrix (row-major, m x m), ascending.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, int m) {
    std::vector<double> d, off;
    tridiagonalize(a, m, d, off);
    ql_eigenvalues(d, off);
    return d;
}

}  // namespace cfgf
