#pragma once

#include <cmath>

#include "pplab/matrix.hpp"

namespace pplab {

struct EllipticityParams {
    double lambda;
    double Lambda;
    EllipticityParams(double lam, double Lam) : lambda(lam), Lambda(Lam) {
        if (!(lam > 0.0) || !(Lam >= lam))
            throw InvalidInput("EllipticityParams: need 0 < lambda <= Lambda");
    }
};

struct DegeneracyExponent {
    double p;
    DegeneracyExponent(double pe = 0.0) : p(pe) {  // NOLINT(google-explicit-constructor)
        if (!(pe >= 0.0)) throw InvalidInput("DegeneracyExponent: need p >= 0");
    }
};

// Extreme values of trace-type operators with eigenvalue weights in
// [lambda, Lambda]: the minimal one puts Lambda on negative eigenvalues.
inline double pucci_minus(const SymMatrix& m, const EllipticityParams& e) {
    double s = 0.0;
    for (double ev : sym_eigenvalues(m)) s += (ev < 0.0 ? e.Lambda : e.lambda) * ev;
    return s;
}

inline double pucci_plus(const SymMatrix& m, const EllipticityParams& e) {
    double s = 0.0;
    for (double ev : sym_eigenvalues(m)) s += (ev < 0.0 ? e.lambda : e.Lambda) * ev;
    return s;
}

// |g_i|^{p/2}, with the p = 0, g_i = 0 weight taken as 1 so the uniformly
// elliptic case is recovered continuously.
inline double half_power_weight(double gi, double p) {
    if (p == 0.0) return 1.0;
    return std::pow(std::fabs(gi), p / 2.0);
}

// Entrywise conjugation diag(|g_i|^{p/2}) H diag(|g_j|^{p/2}).  Vanishing
// gradient components zero out the matching rows and columns; that is the
// coordinatewise degeneracy itself, not an error.
inline SymMatrix weighted_hessian(const Vec& g, const SymMatrix& h, DegeneracyExponent p) {
    if (int(g.size()) != h.dim()) throw InvalidInput("weighted_hessian: dim mismatch");
    const int n = h.dim();
    SymMatrix w(n);
    Vec d(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i) d[std::size_t(i)] = half_power_weight(g[std::size_t(i)], p.p);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) w.set(i, j, d[std::size_t(i)] * d[std::size_t(j)] * h(i, j));
    return w;
}

inline double gradient_power_term(const Vec& g, double p) {
    return std::pow(euclidean_norm(g), p + 1.0);
}

inline double lower_residual(const Vec& g, const SymMatrix& h, DegeneracyExponent p,
                             const EllipticityParams& e, double f_val) {
    return pucci_minus(weighted_hessian(g, h, p), e) - e.Lambda * gradient_power_term(g, p.p) -
           f_val;
}

inline double upper_residual(const Vec& g, const SymMatrix& h, DegeneracyExponent p,
                             const EllipticityParams& e, double f_val) {
    return pucci_plus(weighted_hessian(g, h, p), e) + e.Lambda * gradient_power_term(g, p.p) -
           f_val;
}

// sum_i |g_i|^p H_ii, the diagonal pseudo-(p+2)-Laplacian form.
inline double pseudo_laplacian(const Vec& g, const SymMatrix& h, DegeneracyExponent p) {
    if (int(g.size()) != h.dim()) throw InvalidInput("pseudo_laplacian: dim mismatch");
    double s = 0.0;
    for (int i = 0; i < h.dim(); ++i) {
        const double w = half_power_weight(g[std::size_t(i)], p.p);
        s += w * w * h(i, i);
    }
    return s;
}

}  // namespace pplab
