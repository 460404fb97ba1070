#pragma once

#include <cmath>
#include <string>

#include "pplab/pucci.hpp"

namespace pplab {

// b = 1 + 1/(1+p); the anisotropic exponent tying the paraboloid, the
// barrier and the degeneracy exponent together.
inline double profile_b(double p) { return 1.0 + 1.0 / (1.0 + p); }

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// |x|_b = sum_i |x_i|^b
inline double bnorm_eval(const Vec& x, double b) {
    if (!(b > 1.0)) throw InvalidInput("bnorm_eval: need b > 1");
    double s = 0.0;
    for (double xi : x) s += std::pow(std::fabs(xi), b);
    return s;
}

// (x^b)_i = |x_i|^{b-1} x_i
inline Vec signed_power(const Vec& x, double b) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        r[i] = std::pow(std::fabs(x[i]), b - 1.0) * x[i];
    return r;
}

// Closed-form evaluations are refused this close to a coordinate hyperplane;
// the degenerate directions are handled by slicing, never by evaluation.
inline constexpr double kHyperplaneMargin = 1e-8;

inline std::vector<int> hyperplane_violations(const Vec& x) {
    double scale = 1.0;
    for (double xi : x) scale = std::max(scale, std::fabs(xi));
    std::vector<int> bad;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::fabs(x[i]) <= kHyperplaneMargin * scale) bad.push_back(int(i));
    return bad;
}

inline void require_off_hyperplanes(const Vec& x, const char* who) {
    auto bad = hyperplane_violations(x);
    if (!bad.empty()) {
        std::string msg = std::string(who) + ": degenerate direction(s)";
        for (int i : bad) msg += " " + std::to_string(i);
        throw DegenerateDirection(msg, bad);
    }
}

struct ParaboloidParams {
    double K;
    DegeneracyExponent p;
    double b;  // cached, = 1 + 1/(1+p)
    ParaboloidParams(double amp, DegeneracyExponent pe) : K(amp), p(pe), b(profile_b(pe.p)) {
        if (!(amp > 1.0)) throw InvalidInput("ParaboloidParams: need K > 1");
    }
};

// phi(x) = -K (1+p)/(2+p) |x|_b
inline double phi_eval(const Vec& x, const ParaboloidParams& P) {
    return -P.K * (1.0 + P.p.p) / (2.0 + P.p.p) * bnorm_eval(x, P.b);
}

// D_i phi = -K |x_i|^{1/(1+p)} sgn(x_i); continuous across the hyperplanes.
inline Vec phi_grad(const Vec& x, const ParaboloidParams& P) {
    Vec g(x.size());
    const double e = 1.0 / (1.0 + P.p.p);
    for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = -P.K * std::pow(std::fabs(x[i]), e) * sgn(x[i]);
    return g;
}

// D^2 phi = -(K/(1+p)) diag(|x_i|^{-p/(1+p)}); C^2 only off the hyperplanes.
inline SymMatrix phi_hess(const Vec& x, const ParaboloidParams& P) {
    require_off_hyperplanes(x, "phi_hess");
    SymMatrix h(int(x.size()));
    const double e = -P.p.p / (1.0 + P.p.p);
    for (std::size_t i = 0; i < x.size(); ++i)
        h.set(int(i), int(i), -P.K / (1.0 + P.p.p) * std::pow(std::fabs(x[i]), e));
    return h;
}

struct BarrierParams {
    double a;
    double b;
    double K;
    DegeneracyExponent p;
    BarrierParams(double decay, double shift_amp, DegeneracyExponent pe)
        : a(decay), b(profile_b(pe.p)), K(shift_amp), p(pe) {
        if (!(decay > 1.0)) throw InvalidInput("BarrierParams: need a > 1");
        if (!(shift_amp > 1.0)) throw InvalidInput("BarrierParams: need K > 1");
    }
};

// Phi_0(x) = (1/(ab)) |x|_b^{-a}
inline double barrier_eval(const Vec& x, const BarrierParams& B) {
    const double nb = bnorm_eval(x, B.b);
    if (nb == 0.0) throw Singularity("barrier_eval: x = 0");
    return std::pow(nb, -B.a) / (B.a * B.b);
}

// D Phi_0 = -|x|_b^{-(a+1)} x^{b-1}
inline Vec barrier_grad(const Vec& x, const BarrierParams& B) {
    const double nb = bnorm_eval(x, B.b);
    if (nb == 0.0) throw Singularity("barrier_grad: x = 0");
    Vec g = signed_power(x, B.b - 1.0);
    const double c = -std::pow(nb, -(B.a + 1.0));
    for (double& gi : g) gi *= c;
    return g;
}

// D^2 Phi_0 = b(a+1)|x|_b^{-(a+2)} (x^{b-1} (x) x^{b-1})
//             - (b-1)|x|_b^{-(a+1)} diag(|x_i|^{b-2})
inline SymMatrix barrier_hess(const Vec& x, const BarrierParams& B) {
    require_off_hyperplanes(x, "barrier_hess");
    const int n = int(x.size());
    const double nb = bnorm_eval(x, B.b);
    const Vec xb1 = signed_power(x, B.b - 1.0);
    const double c1 = B.b * (B.a + 1.0) * std::pow(nb, -(B.a + 2.0));
    const double c2 = (B.b - 1.0) * std::pow(nb, -(B.a + 1.0));
    SymMatrix h(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            h.set(i, j, c1 * xb1[std::size_t(i)] * xb1[std::size_t(j)]);
    for (int i = 0; i < n; ++i)
        h.add(i, i, -c2 * std::pow(std::fabs(x[std::size_t(i)]), B.b - 2.0));
    return h;
}

// Shifted barrier K(Phi_0(x) - Phi_0(5n e_1)); vanishes at 5n e_1.
inline double barrier_shifted_eval(const Vec& x, const BarrierParams& B) {
    const int n = int(x.size());
    Vec anchor(x.size(), 0.0);
    anchor[0] = 5.0 * n;
    return B.K * (barrier_eval(x, B) - barrier_eval(anchor, B));
}

// M^-(weighted hessian of Phi_0) - Lambda |D Phi_0|^{p+1}
inline double barrier_lower_residual(const Vec& x, const BarrierParams& B,
                                     const EllipticityParams& e) {
    const Vec g = barrier_grad(x, B);
    const SymMatrix h = barrier_hess(x, B);
    // for very large exponents the |x|_b^{-a} prefactor overflows inside
    // Q_1; the residual there diverges to +infinity (the bracket grows
    // linearly in a and is eventually positive), so report that limit
    // instead of feeding non-finite entries to the eigensolver
    bool finite = true;
    for (double gi : g) finite = finite && std::isfinite(gi);
    for (int i = 0; i < h.dim() && finite; ++i)
        for (int j = i; j < h.dim(); ++j) finite = finite && std::isfinite(h(i, j));
    if (!finite) return std::numeric_limits<double>::infinity();
    const SymMatrix w = weighted_hessian(g, h, B.p);
    for (int i = 0; i < w.dim(); ++i)
        for (int j = i; j < w.dim(); ++j)
            if (!std::isfinite(w(i, j))) return std::numeric_limits<double>::infinity();
    return pucci_minus(w, e) - e.Lambda * gradient_power_term(g, B.p.p);
}

// Verification sample: 41 nodes per axis on Q_{6n}, restricted to
// Q_{6n} \ Q_{1/8n} and purged of hyperplane-adjacent points.
inline std::vector<Vec> barrier_sample_points(int n) {
    if (n < 1 || n > 4) throw InvalidInput("barrier_sample_points: need 1 <= n <= 4");
    const int per_axis = 41;
    const double r = 6.0 * n;
    const double inner = 1.0 / (8.0 * n);
    std::vector<Vec> pts;
    std::vector<int> idx(std::size_t(n), 0);
    for (;;) {
        Vec x(std::size_t(n), 0.0);
        double maxabs = 0.0, minabs = 1e300;
        for (int d = 0; d < n; ++d) {
            x[std::size_t(d)] = -r + 2.0 * r * idx[std::size_t(d)] / (per_axis - 1);
            maxabs = std::max(maxabs, std::fabs(x[std::size_t(d)]));
            minabs = std::min(minabs, std::fabs(x[std::size_t(d)]));
        }
        if (maxabs >= inner && minabs > kHyperplaneMargin * std::max(1.0, maxabs))
            pts.push_back(std::move(x));
        int d = 0;
        while (d < n && ++idx[std::size_t(d)] == per_axis) idx[std::size_t(d++)] = 0;
        if (d == n) break;
    }
    return pts;
}

// Smallest a on the geometric ladder {2, 4, 8, ...} whose residual clears
// `threshold` at every sample point.  The ladder caps at 2^20; exhaustion
// raises SearchFailure.  threshold defaults to the subsolution level 1.
inline double select_barrier_exponent(int n, DegeneracyExponent p, const EllipticityParams& e,
                                      double threshold = 1.0) {
    const auto pts = barrier_sample_points(n);
    for (double a = 2.0; a <= double(1 << 20); a *= 2.0) {
        const BarrierParams B(a, 2.0, p);
        bool ok = true;
        for (const Vec& x : pts) {
            if (!(barrier_lower_residual(x, B, e) > threshold)) {
                ok = false;
                break;
            }
        }
        if (ok) return a;
    }
    throw SearchFailure("select_barrier_exponent: ladder exhausted at a > 2^20 (threshold " +
                        std::to_string(threshold) + ")");
}

// Jacobian of the inverse gradient map of the shifted barrier:
// D((D Phi)^{-1})(v) with Phi = K Phi_0.
inline SymMatrix inverse_gradient_jacobian(const Vec& v, const BarrierParams& B) {
    const int n = int(v.size());
    const double q = 2.0 + B.p.p;
    const double nv = bnorm_eval(v, q);
    if (nv == 0.0) throw Singularity("inverse_gradient_jacobian: v = 0");
    const double ab1 = B.a * B.b + 1.0;
    const Vec w = signed_power(v, 1.0 + B.p.p / 2.0);  // v^{1+p/2}
    const double rank1 = -(B.a + 1.0) / ab1 * q / nv;
    SymMatrix bm(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            bm.set(i, j, rank1 * w[std::size_t(i)] * w[std::size_t(j)]);
    for (int i = 0; i < n; ++i) bm.add(i, i, 1.0 + B.p.p);

    const double c = -std::pow(B.K, 1.0 / ab1) * std::pow(nv, -(B.a + 1.0) / ab1);
    SymMatrix r(n);
    for (int i = 0; i < n; ++i) {
        const double di = half_power_weight(v[std::size_t(i)], B.p.p);
        for (int j = i; j < n; ++j) {
            const double dj = half_power_weight(v[std::size_t(j)], B.p.p);
            r.set(i, j, c * di * bm(i, j) * dj);
        }
    }
    return r;
}

}  // namespace pplab
