#pragma once

#include <limits>

#include "pplab/grid.hpp"

namespace pplab {

struct InfConvParams {
    double epsilon;
    explicit InfConvParams(double eps) : epsilon(eps) {
        if (!(eps > 0.0)) throw InvalidInput("InfConvParams: need epsilon > 0");
    }
};

namespace detail {

// Exact 1-d lower envelope of the parabolas f(j) + w (i - j)^2 over integer
// positions (Felzenszwalb-Huttenlocher).  Result values are re-evaluated
// from the argmin parabola so they match the brute-force definition.
inline void envelope_1d(const double* f, double* out, int m, double w) {
    std::vector<int> v(std::size_t(m), 0);      // parabola sites
    std::vector<double> z(std::size_t(m) + 1);  // envelope breakpoints
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < m; ++q) {
        double s;
        for (;;) {
            const int p = v[std::size_t(k)];
            s = ((f[q] + w * q * q) - (f[p] + w * p * p)) / (2.0 * w * (q - p));
            if (s <= z[std::size_t(k)]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[std::size_t(k)] = q;
        z[std::size_t(k)] = s;
        z[std::size_t(k) + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int i = 0; i < m; ++i) {
        while (z[std::size_t(k) + 1] < i) ++k;
        const int j = v[std::size_t(k)];
        const double d = double(i - j);
        out[i] = f[j] + w * d * d;
    }
}

}  // namespace detail

// Discrete inf convolution u_eps(x) = min over grid nodes y of
// u(y) + |x - y|^2 / eps.  The additive quadratic penalty separates per
// axis, so sequential 1-d envelope passes reproduce the full minimum.
inline ScalarField inf_convolution(const ScalarField& u, const InfConvParams& P) {
    if (!u.all_finite()) throw InvalidInput("inf_convolution: non-finite field");
    const GridSpec& s = u.spec;
    const double h = s.spacing();
    const double w = h * h / P.epsilon;
    ScalarField cur = u;
    const int m = s.points_per_axis;
    std::vector<double> line(std::size_t(m), 0.0), res(std::size_t(m), 0.0);

    for (int axis = 0; axis < s.dim; ++axis) {
        // stride of the axis in the row-major layout
        std::size_t stride = 1;
        for (int d = axis + 1; d < s.dim; ++d) stride *= std::size_t(m);
        const std::size_t total = s.node_count();
        const std::size_t block = stride * std::size_t(m);
        for (std::size_t base = 0; base < total; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (int i = 0; i < m; ++i) line[std::size_t(i)] = cur.values[base + off + std::size_t(i) * stride];
                detail::envelope_1d(line.data(), res.data(), m, w);
                for (int i = 0; i < m; ++i) cur.values[base + off + std::size_t(i) * stride] = res[std::size_t(i)];
            }
        }
    }
    return cur;
}

// Sup convolution by sign flip.
inline ScalarField sup_convolution(const ScalarField& u, const InfConvParams& P) {
    ScalarField neg = u;
    for (double& v : neg.values) v = -v;
    ScalarField r = inf_convolution(neg, P);
    for (double& v : r.values) v = -v;
    return r;
}

}  // namespace pplab
