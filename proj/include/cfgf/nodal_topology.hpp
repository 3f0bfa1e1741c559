#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "cfgf/errors.hpp"
#include "cfgf/field_sampler.hpp"

// Component counting on the periodic grid.  Two methods with different
// failure modes, used to cross-check each other:
//   contour-trace (n=2): marching squares with linear interpolation on grid
//     edges; curves counted by union-find over cell-edge incidences.
//   sign-cluster (n=2,3): face-adjacent clusters of cells whose corners mix
//     signs; one cluster approximates one component of the zero set.

namespace cfgf {

struct ComponentInfo {
    std::int64_t size_cells = 0;  // contour: segments traversed; cluster: member cells
    double diameter = 0.0;        // periodic bounding-box diagonal (upper bound)
    // unwrapped bounding box, (lo, hi) per axis; extent may reach a full
    // period for homologically essential components
    std::array<double, 6> bbox{};
};

struct NodalReport {
    FieldParams params;
    std::uint64_t seed = 0;
    std::int64_t resolution = 0;  // grid points per axis
    std::string method;           // "contour-trace" | "sign-cluster"
    std::int64_t N = 0;
    std::vector<ComponentInfo> components;
    double rho = -1.0;      // filled by component_diameters
    std::int64_t N_rho = -1;
};

namespace detail {

// Exact zeros cannot be sign-labeled; values below 1e-14 of the field RMS
// are nudged to +1e-14 RMS, which is under the synthesis round-off.
inline std::vector<double> nudged_values(const FieldSample& sample) {
    double ss = 0.0;
    for (double v : sample.values) ss += v * v;
    const double rms = std::sqrt(ss / static_cast<double>(sample.values.size()));
    if (!(rms > 0.0))
        throw PreconditionError("nodal_topology: field vanishes identically on the grid");
    const double eps = 1e-14 * rms;
    std::vector<double> out(sample.values);
    for (double& v : out)
        if (std::abs(v) < eps) v = eps;
    for (double v : out)
        if (v == 0.0) throw Error("nodal_topology: exact zero survived the nudge");
    return out;
}

struct DisjointSet {
    std::vector<std::int32_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n, -1) {}
    std::int32_t find(std::int32_t x) {
        if (parent[x] < 0) parent[x] = x;
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// periodic distance cap: two points of one axis never exceed half a period
inline double box_diameter(const double* extent, int n) {
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = std::min(extent[i], std::numbers::pi);
        d2 += e * e;
    }
    return std::sqrt(d2);
}

// Edge id layout used by the tracer: axis-0 edge (i0,i1)->(i0+1,i1) has id
// i0*m+i1; axis-1 edge (i0,i1)->(i0,i1+1) has id m^2 + i0*m + i1.
struct EdgeLattice {
    int axis;
    std::int64_t i0, i1;
};

inline EdgeLattice decode_edge(std::int32_t e, std::int64_t m) {
    const std::int64_t mm = m * m;
    if (e < mm) return {0, e / m, e % m};
    return {1, (e - mm) / m, (e - mm) % m};
}

}  // namespace detail

// One traced closed nodal curve: crossed grid edges in cyclic walk order with
// the matching crossing points (linear interpolation along each edge).
// Coordinates are unwrapped along the walk, so consecutive points differ by
// less than one cell even when the curve crosses the periodic seam; points
// on wrapping curves may leave [0, 2pi).
struct TracedCurve {
    std::vector<std::int32_t> edges;
    std::vector<std::array<double, 2>> points;
};

inline std::vector<TracedCurve> trace_nodal_curves(const FieldSample& sample) {
    if (sample.params.n != 2)
        throw ParamError("trace_nodal_curves: n = 2 required");
    const std::int64_t m = sample.grid.m;
    if (m < 4)
        throw ResolutionError("trace_nodal_curves: grid too coarse to trace");
    const auto vals = detail::nudged_values(sample);
    const double h = sample.grid.spacing();

    auto vat = [&](std::int64_t i0, std::int64_t i1) {
        return vals[static_cast<std::size_t>(((i0 % m + m) % m) * m + ((i1 % m + m) % m))];
    };
    const std::int32_t mm = static_cast<std::int32_t>(m * m);
    auto e0_id = [&](std::int64_t i0, std::int64_t i1) {
        return static_cast<std::int32_t>(((i0 % m + m) % m) * m + ((i1 % m + m) % m));
    };
    auto e1_id = [&](std::int64_t i0, std::int64_t i1) {
        return static_cast<std::int32_t>(mm + ((i0 % m + m) % m) * m + ((i1 % m + m) % m));
    };

    struct Link {
        std::int32_t cell = -1;
        std::int32_t partner = -1;
    };
    std::vector<std::array<Link, 2>> links(static_cast<std::size_t>(2) * mm);
    std::vector<std::uint8_t> link_count(static_cast<std::size_t>(2) * mm, 0);
    detail::DisjointSet dsu(static_cast<std::size_t>(2) * mm);

    auto add_segment = [&](std::int32_t cell, std::int32_t e1, std::int32_t e2) {
        dsu.unite(e1, e2);
        if (link_count[e1] >= 2 || link_count[e2] >= 2)
            throw Error("count_components_2d: edge incidence overflow");
        links[e1][link_count[e1]++] = {cell, e2};
        links[e2][link_count[e2]++] = {cell, e1};
    };

    for (std::int64_t i0 = 0; i0 < m; ++i0)
        for (std::int64_t i1 = 0; i1 < m; ++i1) {
            const double va = vat(i0, i1), vb = vat(i0 + 1, i1);
            const double vc = vat(i0 + 1, i1 + 1), vd = vat(i0, i1 + 1);
            const bool sa = va > 0, sb = vb > 0, sc = vc > 0, sd = vd > 0;
            if (sa == sb && sb == sc && sc == sd) continue;
            const std::int32_t cell = static_cast<std::int32_t>(i0 * m + i1);
            const std::int32_t ea = e0_id(i0, i1);      // a-b
            const std::int32_t eb = e1_id(i0 + 1, i1);  // b-c
            const std::int32_t ec = e0_id(i0, i1 + 1);  // d-c
            const std::int32_t ed = e1_id(i0, i1);      // a-d
            const bool xa = sa != sb, xb = sb != sc, xc = sd != sc, xd = sa != sd;
            const int crossings = int(xa) + int(xb) + int(xc) + int(xd);
            if (crossings == 2) {
                std::int32_t pair[2];
                int w = 0;
                if (xa) pair[w++] = ea;
                if (xb) pair[w++] = eb;
                if (xc) pair[w++] = ec;
                if (xd) pair[w++] = ed;
                add_segment(cell, pair[0], pair[1]);
            } else if (crossings == 4) {
                // saddle: the bilinear center value decides which diagonal
                // the zero set separates
                const bool center_pos = (va + vb + vc + vd) >= 0.0;
                if (center_pos == sa) {
                    add_segment(cell, ea, eb);  // isolates corner b
                    add_segment(cell, ec, ed);  // isolates corner d
                } else {
                    add_segment(cell, ea, ed);  // isolates corner a
                    add_segment(cell, eb, ec);  // isolates corner c
                }
            } else {
                throw Error("count_components_2d: odd crossing parity");
            }
        }

    // crossing coordinate of an edge (linear interpolation along the edge)
    auto edge_point = [&](std::int32_t e) -> std::array<double, 2> {
        if (e < mm) {
            const std::int64_t i0 = e / m, i1 = e % m;
            const double v0 = vat(i0, i1), v1 = vat(i0 + 1, i1);
            return {(static_cast<double>(i0) + v0 / (v0 - v1)) * h,
                    static_cast<double>(i1) * h};
        }
        const std::int64_t i0 = (e - mm) / m, i1 = (e - mm) % m;
        const double v0 = vat(i0, i1), v1 = vat(i0, i1 + 1);
        return {static_cast<double>(i0) * h,
                (static_cast<double>(i1) + v0 / (v0 - v1)) * h};
    };

    // walk each closed curve once, unwrapping coordinates along the way
    std::vector<TracedCurve> curves;
    std::vector<std::uint8_t> visited(static_cast<std::size_t>(2) * mm, 0);
    for (std::int32_t start = 0; start < 2 * mm; ++start) {
        if (link_count[start] == 0 || visited[start]) continue;
        if (link_count[start] != 2)
            throw Error("trace_nodal_curves: open contour");
        TracedCurve curve;
        auto p = edge_point(start);
        double prev[2] = {p[0], p[1]};
        curve.edges.push_back(start);
        curve.points.push_back(p);
        std::int32_t e = start;
        std::int32_t from_cell = -1;
        std::int64_t guard = 0;
        do {
            visited[e] = 1;
            const Link& use = (from_cell == -1 || links[e][0].cell != from_cell)
                                  ? links[e][0]
                                  : links[e][1];
            from_cell = use.cell;
            e = use.partner;
            auto q = edge_point(e);
            for (int ax = 0; ax < 2; ++ax) {
                double c = q[ax];
                while (c - prev[ax] > std::numbers::pi) c -= 2.0 * std::numbers::pi;
                while (c - prev[ax] < -std::numbers::pi) c += 2.0 * std::numbers::pi;
                prev[ax] = c;
                q[ax] = c;
            }
            if (e != start) {
                curve.edges.push_back(e);
                curve.points.push_back(q);
            }
            if (++guard > 4ll * mm)
                throw Error("trace_nodal_curves: walk did not close");
        } while (e != start);
        curves.push_back(std::move(curve));
    }
    std::int64_t roots = 0;
    for (std::int32_t e = 0; e < 2 * mm; ++e)
        if (link_count[e] > 0 && dsu.find(e) == e) ++roots;
    if (roots != static_cast<std::int64_t>(curves.size()))
        throw Error("trace_nodal_curves: union-find and curve walk disagree");
    return curves;
}

inline NodalReport count_components_2d(const FieldSample& sample) {
    if (sample.params.n != 2)
        throw ParamError("count_components_2d: n = 2 required");
    const auto curves = trace_nodal_curves(sample);
    NodalReport report;
    report.params = sample.params;
    report.seed = sample.seed;
    report.resolution = sample.grid.m;
    report.method = "contour-trace";
    for (const auto& curve : curves) {
        ComponentInfo info;
        info.size_cells = static_cast<std::int64_t>(curve.edges.size());
        double lo[2] = {curve.points[0][0], curve.points[0][1]};
        double hi[2] = {lo[0], lo[1]};
        for (const auto& q : curve.points)
            for (int ax = 0; ax < 2; ++ax) {
                lo[ax] = std::min(lo[ax], q[ax]);
                hi[ax] = std::max(hi[ax], q[ax]);
            }
        // close the loop: the start point re-unwrapped relative to the last
        // point (differs by a full period on homologically essential curves)
        for (int ax = 0; ax < 2; ++ax) {
            double c = curve.points[0][ax];
            const double last = curve.points.back()[ax];
            while (c - last > std::numbers::pi) c -= 2.0 * std::numbers::pi;
            while (c - last < -std::numbers::pi) c += 2.0 * std::numbers::pi;
            lo[ax] = std::min(lo[ax], c);
            hi[ax] = std::max(hi[ax], c);
        }
        const double extent[2] = {hi[0] - lo[0], hi[1] - lo[1]};
        info.bbox = {lo[0], hi[0], lo[1], hi[1], 0.0, 0.0};
        info.diameter = detail::box_diameter(extent, 2);
        report.components.push_back(info);
    }
    report.N = static_cast<std::int64_t>(report.components.size());
    return report;
}

inline NodalReport count_components_nd(const FieldSample& sample) {
    const int n = sample.params.n;
    if (n != 2 && n != 3)
        throw ParamError("count_components_nd: n in {2,3} required");
    const std::int64_t m = sample.grid.m;
    if (m < 4)
        throw ResolutionError("count_components_nd: grid too coarse to cluster");
    const auto vals = detail::nudged_values(sample);
    const double h = sample.grid.spacing();

    auto flat = [&](std::int64_t i0, std::int64_t i1, std::int64_t i2) {
        std::size_t idx = static_cast<std::size_t>((i0 % m + m) % m);
        idx = idx * m + static_cast<std::size_t>((i1 % m + m) % m);
        if (n == 3) idx = idx * m + static_cast<std::size_t>((i2 % m + m) % m);
        return idx;
    };

    // zero cells: corner signs not all equal
    std::size_t cell_count = 1;
    for (int i = 0; i < n; ++i) cell_count *= static_cast<std::size_t>(m);
    std::vector<std::uint8_t> zero_cell(cell_count, 0);
    const std::int64_t m2max = (n == 3) ? m : 1;
    for (std::int64_t i0 = 0; i0 < m; ++i0)
        for (std::int64_t i1 = 0; i1 < m; ++i1)
            for (std::int64_t i2 = 0; i2 < m2max; ++i2) {
                bool any_pos = false, any_neg = false;
                for (int corner = 0; corner < (1 << n); ++corner) {
                    const double v = vals[flat(i0 + (corner & 1), i1 + ((corner >> 1) & 1),
                                               i2 + ((corner >> 2) & 1))];
                    (v > 0 ? any_pos : any_neg) = true;
                }
                if (any_pos && any_neg)
                    zero_cell[flat(i0, i1, i2)] = 1;
            }

    NodalReport report;
    report.params = sample.params;
    report.seed = sample.seed;
    report.resolution = m;
    report.method = "sign-cluster";

    // BFS per cluster with unwrapped integer coordinates; a revisit whose
    // coordinate disagrees with the stored one means the cluster wraps the
    // torus along the mismatching axes
    std::vector<std::uint8_t> seen(cell_count, 0);
    std::vector<std::array<std::int32_t, 3>> coord(cell_count);
    std::vector<std::size_t> queue;
    for (std::int64_t c0 = 0; c0 < m; ++c0)
        for (std::int64_t c1 = 0; c1 < m; ++c1)
            for (std::int64_t c2 = 0; c2 < m2max; ++c2) {
                const std::size_t seed_cell = flat(c0, c1, c2);
                if (!zero_cell[seed_cell] || seen[seed_cell]) continue;
                ComponentInfo info;
                bool wraps[3] = {false, false, false};
                queue.clear();
                queue.push_back(seed_cell);
                seen[seed_cell] = 1;
                coord[seed_cell] = {static_cast<std::int32_t>(c0),
                                    static_cast<std::int32_t>(c1),
                                    static_cast<std::int32_t>(c2)};
                std::int32_t lo[3], hi[3];
                for (int ax = 0; ax < 3; ++ax) lo[ax] = hi[ax] = coord[seed_cell][ax];
                std::size_t head = 0;
                while (head < queue.size()) {
                    const std::size_t cur = queue[head++];
                    const auto cc = coord[cur];
                    ++info.size_cells;
                    for (int ax = 0; ax < n; ++ax) {
                        lo[ax] = std::min(lo[ax], cc[ax]);
                        hi[ax] = std::max(hi[ax], cc[ax]);
                    }
                    for (int ax = 0; ax < n; ++ax)
                        for (int dir = -1; dir <= 1; dir += 2) {
                            std::array<std::int32_t, 3> nc = cc;
                            nc[ax] += dir;
                            const std::size_t nb = flat(nc[0], nc[1], n == 3 ? nc[2] : 0);
                            if (!zero_cell[nb]) continue;
                            if (!seen[nb]) {
                                seen[nb] = 1;
                                coord[nb] = nc;
                                queue.push_back(nb);
                            } else {
                                const auto& stored = coord[nb];
                                for (int bx = 0; bx < n; ++bx)
                                    if (stored[bx] != nc[bx]) wraps[bx] = true;
                            }
                        }
                }
                double extent[3] = {0, 0, 0};
                for (int ax = 0; ax < n; ++ax) {
                    extent[ax] = wraps[ax] ? 2.0 * std::numbers::pi
                                           : (hi[ax] - lo[ax] + 1) * h;
                    info.bbox[2 * ax] = lo[ax] * h;
                    info.bbox[2 * ax + 1] = (hi[ax] + 1) * h;
                }
                info.diameter = detail::box_diameter(extent, n);
                report.components.push_back(info);
            }
    report.N = static_cast<std::int64_t>(report.components.size());
    return report;
}

// Threshold the per-component diameters at rho L^{-1/2} and record the count
// of small components.
inline NodalReport component_diameters(NodalReport report, const FieldParams& params,
                                       double rho) {
    if (!(rho >= 0.0)) throw ParamError("component_diameters: rho >= 0 required");
    if (report.N != static_cast<std::int64_t>(report.components.size()))
        throw PreconditionError("component_diameters: report lacks per-component boxes");
    const double threshold = rho / std::sqrt(params.L);
    std::int64_t small = 0;
    for (const auto& comp : report.components)
        if (comp.diameter <= threshold) ++small;
    report.rho = rho;
    report.N_rho = small;
    return report;
}

}  // namespace cfgf
