#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "pplab/errors.hpp"
#include "pplab/matrix.hpp"

namespace pplab {

using MultiIndex = std::vector<int>;

// Uniform grid over the cube Q_{half_width}(center).  points_per_axis is odd
// so the center and the hyperplanes {x_i = center_i} carry grid nodes.
struct GridSpec {
    int dim;
    Vec center;
    double half_width;
    int points_per_axis;

    GridSpec(int n, Vec c, double hw, int ppa)
        : dim(n), center(std::move(c)), half_width(hw), points_per_axis(ppa) {
        if (n < 1 || n > 4) throw InvalidInput("GridSpec: need 1 <= dim <= 4");
        if (int(center.size()) != n) throw InvalidInput("GridSpec: center size mismatch");
        if (!(hw > 0.0)) throw InvalidInput("GridSpec: need half_width > 0");
        if (ppa < 9 || ppa % 2 == 0) throw InvalidInput("GridSpec: points_per_axis must be odd and >= 9");
    }

    static GridSpec unit_cube(int n, int ppa) { return GridSpec(n, Vec(std::size_t(n), 0.0), 1.0, ppa); }

    double spacing() const { return 2.0 * half_width / (points_per_axis - 1); }

    std::size_t node_count() const {
        std::size_t c = 1;
        for (int d = 0; d < dim; ++d) c *= std::size_t(points_per_axis);
        return c;
    }

    double coord(int axis, int i) const {
        return center[std::size_t(axis)] - half_width + spacing() * i;
    }

    Vec point(const MultiIndex& idx) const {
        Vec x(std::size_t(dim), 0.0);
        for (int d = 0; d < dim; ++d) x[std::size_t(d)] = coord(d, idx[std::size_t(d)]);
        return x;
    }

    std::size_t linear(const MultiIndex& idx) const {
        std::size_t k = 0;
        for (int d = 0; d < dim; ++d) k = k * std::size_t(points_per_axis) + std::size_t(idx[std::size_t(d)]);
        return k;
    }

    MultiIndex unravel(std::size_t k) const {
        MultiIndex idx(std::size_t(dim), 0);
        for (int d = dim - 1; d >= 0; --d) {
            idx[std::size_t(d)] = int(k % std::size_t(points_per_axis));
            k /= std::size_t(points_per_axis);
        }
        return idx;
    }

    // Advance a multi-index in row-major (lexicographic) order.
    bool next(MultiIndex& idx) const {
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[std::size_t(d)] < points_per_axis) return true;
            idx[std::size_t(d)] = 0;
        }
        return false;
    }

    int interior_margin(const MultiIndex& idx) const {
        int m = points_per_axis;
        for (int d = 0; d < dim; ++d)
            m = std::min({m, idx[std::size_t(d)], points_per_axis - 1 - idx[std::size_t(d)]});
        return m;
    }

    bool same_layout(const GridSpec& o) const {
        if (dim != o.dim || points_per_axis != o.points_per_axis) return false;
        if (half_width != o.half_width) return false;
        for (int d = 0; d < dim; ++d)
            if (center[std::size_t(d)] != o.center[std::size_t(d)]) return false;
        return true;
    }
};

struct ScalarField {
    GridSpec spec;
    Vec values;

    explicit ScalarField(GridSpec s) : spec(std::move(s)), values(spec.node_count(), 0.0) {}

    ScalarField(GridSpec s, Vec v) : spec(std::move(s)), values(std::move(v)) {
        if (values.size() != spec.node_count())
            throw InvalidInput("ScalarField: value count mismatch");
    }

    static ScalarField sample(const GridSpec& s, const std::function<double(const Vec&)>& fn) {
        ScalarField u(s);
        MultiIndex idx(std::size_t(s.dim), 0);
        std::size_t k = 0;
        do {
            u.values[k++] = fn(s.point(idx));
        } while (s.next(idx));
        return u;
    }

    double at(const MultiIndex& idx) const { return values[spec.linear(idx)]; }
    double& at(const MultiIndex& idx) { return values[spec.linear(idx)]; }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline void require_interior(const GridSpec& s, const MultiIndex& idx, int margin, const char* who) {
    if (s.interior_margin(idx) < margin)
        throw BoundaryProximity(std::string(who) + ": node too close to the boundary");
}

// Central differences; second-order on interior nodes.
inline Vec fd_gradient(const ScalarField& u, const MultiIndex& idx) {
    require_interior(u.spec, idx, 1, "fd_gradient");
    const double h = u.spec.spacing();
    Vec g(std::size_t(u.spec.dim), 0.0);
    MultiIndex j = idx;
    for (int d = 0; d < u.spec.dim; ++d) {
        j[std::size_t(d)] = idx[std::size_t(d)] + 1;
        const double up = u.at(j);
        j[std::size_t(d)] = idx[std::size_t(d)] - 1;
        const double dn = u.at(j);
        j[std::size_t(d)] = idx[std::size_t(d)];
        g[std::size_t(d)] = (up - dn) / (2.0 * h);
    }
    return g;
}

inline SymMatrix fd_hessian(const ScalarField& u, const MultiIndex& idx) {
    require_interior(u.spec, idx, 1, "fd_hessian");
    const double h = u.spec.spacing();
    const int n = u.spec.dim;
    SymMatrix H(n);
    const double uc = u.at(idx);
    MultiIndex j = idx;
    for (int d = 0; d < n; ++d) {
        j[std::size_t(d)] = idx[std::size_t(d)] + 1;
        const double up = u.at(j);
        j[std::size_t(d)] = idx[std::size_t(d)] - 1;
        const double dn = u.at(j);
        j[std::size_t(d)] = idx[std::size_t(d)];
        H.set(d, d, (up - 2.0 * uc + dn) / (h * h));
    }
    for (int d1 = 0; d1 < n; ++d1) {
        for (int d2 = d1 + 1; d2 < n; ++d2) {
            double s = 0.0;
            for (int s1 : {+1, -1}) {
                for (int s2 : {+1, -1}) {
                    j[std::size_t(d1)] = idx[std::size_t(d1)] + s1;
                    j[std::size_t(d2)] = idx[std::size_t(d2)] + s2;
                    s += s1 * s2 * u.at(j);
                }
            }
            j[std::size_t(d1)] = idx[std::size_t(d1)];
            j[std::size_t(d2)] = idx[std::size_t(d2)];
            H.set(d1, d2, s / (4.0 * h * h));
        }
    }
    return H;
}

struct SliceSpec {
    std::vector<int> frozen_axes;
    Vec frozen_values;
};

// Restrict a field to the slice with the given axes frozen at grid lines.
inline ScalarField restrict_slice(const ScalarField& u, const SliceSpec& s) {
    const GridSpec& g = u.spec;
    const int n = g.dim;
    if (s.frozen_axes.empty() || int(s.frozen_axes.size()) >= n)
        throw InvalidSlice("restrict_slice: frozen axes must be a nonempty proper subset");
    if (s.frozen_axes.size() != s.frozen_values.size())
        throw InvalidSlice("restrict_slice: axes/values size mismatch");

    std::vector<int> frozen_idx(std::size_t(n), -1);
    for (std::size_t k = 0; k < s.frozen_axes.size(); ++k) {
        const int ax = s.frozen_axes[k];
        if (ax < 0 || ax >= n || frozen_idx[std::size_t(ax)] >= 0)
            throw InvalidSlice("restrict_slice: bad frozen axis " + std::to_string(ax));
        const double t = (s.frozen_values[k] - g.center[std::size_t(ax)] + g.half_width) / g.spacing();
        const int i = int(std::lround(t));
        if (i < 0 || i >= g.points_per_axis || std::fabs(t - i) > 1e-9)
            throw InvalidSlice("restrict_slice: frozen value off the grid on axis " + std::to_string(ax));
        frozen_idx[std::size_t(ax)] = i;
    }

    std::vector<int> kept;
    for (int d = 0; d < n; ++d)
        if (frozen_idx[std::size_t(d)] < 0) kept.push_back(d);

    const int k = int(kept.size());
    Vec sub_center(std::size_t(k), 0.0);
    for (int d = 0; d < k; ++d) sub_center[std::size_t(d)] = g.center[std::size_t(kept[std::size_t(d)])];
    GridSpec sub(k, sub_center, g.half_width, g.points_per_axis);

    ScalarField out(sub);
    MultiIndex sidx(std::size_t(k), 0);
    MultiIndex full(std::size_t(n), 0);
    for (int d = 0; d < n; ++d)
        if (frozen_idx[std::size_t(d)] >= 0) full[std::size_t(d)] = frozen_idx[std::size_t(d)];
    std::size_t pos = 0;
    do {
        for (int d = 0; d < k; ++d) full[std::size_t(kept[std::size_t(d)])] = sidx[std::size_t(d)];
        out.values[pos++] = u.at(full);
    } while (sub.next(sidx));
    return out;
}

}  // namespace pplab
