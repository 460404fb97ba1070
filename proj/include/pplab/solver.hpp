#pragma once

#include "pplab/grid.hpp"
#include "pplab/pucci.hpp"

namespace pplab {

struct SolveConfig {
    double tol;
    long max_steps;
    double safety;
    double floor;
    SolveConfig(double t, long steps, double saf = 0.9, double flr = 0.0)
        : tol(t), max_steps(steps), safety(saf), floor(flr) {
        if (!(t > 0.0)) throw InvalidInput("SolveConfig: need tol > 0");
        if (steps < 1) throw InvalidInput("SolveConfig: need max_steps >= 1");
        if (!(saf > 0.0 && saf <= 1.0)) throw InvalidInput("SolveConfig: need safety in (0,1]");
        if (!(flr >= 0.0)) throw InvalidInput("SolveConfig: need floor >= 0");
    }
};

struct SolveReport {
    long steps = 0;
    double final_residual = 0.0;
    double initial_residual = 0.0;
    double dt_min = 0.0;
    double dt_max = 0.0;
    double floor = 0.0;
    bool converged = false;
};

namespace detail {

// sup over interior nodes of |sum_i |D_i u|^p D_ii u - f|
inline double interior_residual(const ScalarField& u, const ScalarField& f, double p) {
    const GridSpec& s = u.spec;
    const double h = s.spacing();
    double worst = 0.0;
    MultiIndex idx(std::size_t(s.dim), 1);
    Vec gi(std::size_t(s.dim), 0.0);
    for (;;) {
        double op = 0.0;
        MultiIndex j = idx;
        const double uc = u.at(idx);
        for (int d = 0; d < s.dim; ++d) {
            j[std::size_t(d)] = idx[std::size_t(d)] + 1;
            const double up = u.at(j);
            j[std::size_t(d)] = idx[std::size_t(d)] - 1;
            const double dn = u.at(j);
            j[std::size_t(d)] = idx[std::size_t(d)];
            const double gd = (up - dn) / (2.0 * h);
            const double sdd = (up - 2.0 * uc + dn) / (h * h);
            const double a = (p == 0.0) ? 1.0 : std::pow(std::fabs(gd), p);
            op += a * sdd;
        }
        worst = std::max(worst, std::fabs(op - f.at(idx)));
        int d = s.dim - 1;
        while (d >= 0 && ++idx[std::size_t(d)] == s.points_per_axis - 1) idx[std::size_t(d--)] = 1;
        if (d < 0) break;
    }
    return worst;
}

}  // namespace detail

// Explicit parabolic relaxation for sum_i |D_i u|^p D_ii u = f with Dirichlet
// data.  Pointwise time step dt = safety h^2 / (2 sum a_i) keeps every node
// update a convex combination of its neighbours (monotone scheme).  With
// floor = 0 the update stalls where all partials vanish; a positive floor is
// the vanishing-viscosity variant.
inline std::pair<ScalarField, SolveReport> solve_dirichlet(const ScalarField& f,
                                                           const ScalarField& boundary,
                                                           DegeneracyExponent p,
                                                           const SolveConfig& cfg) {
    const GridSpec& s = f.spec;
    if (!boundary.spec.same_layout(s)) throw InvalidInput("solve_dirichlet: grid mismatch");
    if (!boundary.all_finite() || !f.all_finite())
        throw InvalidInput("solve_dirichlet: non-finite data");

    const double h = s.spacing();
    const double pe = p.p;
    ScalarField u = boundary;
    ScalarField next = u;

    SolveReport rep;
    rep.floor = cfg.floor;
    rep.dt_min = std::numeric_limits<double>::infinity();
    rep.initial_residual = detail::interior_residual(u, f, pe);
    double residual = rep.initial_residual;
    if (residual <= cfg.tol) {
        rep.final_residual = residual;
        rep.converged = true;
        if (!std::isfinite(rep.dt_min)) rep.dt_min = 0.0;
        return {u, rep};
    }

    const int n = s.dim;
    Vec a(std::size_t(n), 0.0);
    for (long step = 0; step < cfg.max_steps; ++step) {
        MultiIndex idx(std::size_t(n), 1);
        for (;;) {
            const double uc = u.at(idx);
            MultiIndex j = idx;
            double diffusion = 0.0, asum = 0.0;
            for (int d = 0; d < n; ++d) {
                j[std::size_t(d)] = idx[std::size_t(d)] + 1;
                const double up = u.at(j);
                j[std::size_t(d)] = idx[std::size_t(d)] - 1;
                const double dn = u.at(j);
                j[std::size_t(d)] = idx[std::size_t(d)];
                const double gd = (up - dn) / (2.0 * h);
                double ad = (pe == 0.0) ? 1.0 : std::pow(std::fabs(gd), pe);
                ad = std::max(ad, cfg.floor);
                a[std::size_t(d)] = ad;
                asum += ad;
                diffusion += ad * (up - 2.0 * uc + dn) / (h * h);
            }
            if (asum > 0.0) {
                const double dt = cfg.safety * h * h / (2.0 * asum);
                rep.dt_min = std::min(rep.dt_min, dt);
                rep.dt_max = std::max(rep.dt_max, dt);
                next.at(idx) = uc + dt * (diffusion - f.at(idx));
            } else {
                next.at(idx) = uc;  // fully degenerate node, floor = 0
            }
            int d = n - 1;
            while (d >= 0 && ++idx[std::size_t(d)] == s.points_per_axis - 1) idx[std::size_t(d--)] = 1;
            if (d < 0) break;
        }
        std::swap(u.values, next.values);
        ++rep.steps;

        if (rep.steps % 16 == 0 || rep.steps == cfg.max_steps) {
            residual = detail::interior_residual(u, f, pe);
            if (residual <= cfg.tol) break;
            if (residual > 10.0 * rep.initial_residual && rep.initial_residual > 0.0)
                throw Divergence("solve_dirichlet: residual grew 10x above initial (" +
                                 std::to_string(residual) + " vs " +
                                 std::to_string(rep.initial_residual) + ")");
        }
    }
    rep.final_residual = detail::interior_residual(u, f, pe);
    rep.converged = rep.final_residual <= cfg.tol;
    if (!std::isfinite(rep.dt_min)) rep.dt_min = 0.0;
    return {u, rep};
}

// Warm-started variant for p > 0.  A discontinuous initial layer (boundary
// data with a flat interior guess) makes the coefficient |D_i u|^p
// non-monotone wherever curvature * h outruns the gradient, and the explicit
// relaxation can lock onto spurious discrete solutions or blow up.  Relaxing
// the p = 0 Laplace problem first produces a smooth interior extension of the
// boundary data from which the degenerate relaxation is well behaved.
inline std::pair<ScalarField, SolveReport> solve_dirichlet_warm(const ScalarField& f,
                                                                const ScalarField& boundary,
                                                                DegeneracyExponent p,
                                                                const SolveConfig& cfg) {
    if (p.p == 0.0) return solve_dirichlet(f, boundary, p, cfg);
    ScalarField zero_f(f.spec);
    const double warm_tol = std::max(cfg.tol, 1e-6);
    auto [u0, rep0] = solve_dirichlet(zero_f, boundary, 0.0, SolveConfig(warm_tol, cfg.max_steps));
    auto [u, rep] = solve_dirichlet(f, u0, p, cfg);
    rep.steps += rep0.steps;
    return {u, rep};
}

// Pointwise lower/upper residual fields from central differences.  Boundary
// nodes carry 0; the estimates are interior.
inline std::pair<ScalarField, ScalarField> viscosity_residual_check(const ScalarField& u,
                                                                    const ScalarField& f,
                                                                    DegeneracyExponent p,
                                                                    const EllipticityParams& e) {
    if (e.lambda > 1.0 || e.Lambda < 1.0)
        throw InvalidInput("viscosity_residual_check: need lambda <= 1 <= Lambda");
    const GridSpec& s = u.spec;
    if (!f.spec.same_layout(s)) throw InvalidInput("viscosity_residual_check: grid mismatch");
    ScalarField lower(s), upper(s);
    MultiIndex idx(std::size_t(s.dim), 1);
    for (;;) {
        const Vec g = fd_gradient(u, idx);
        const SymMatrix H = fd_hessian(u, idx);
        lower.at(idx) = lower_residual(g, H, p, e, f.at(idx));
        upper.at(idx) = upper_residual(g, H, p, e, f.at(idx));
        int d = s.dim - 1;
        while (d >= 0 && ++idx[std::size_t(d)] == s.points_per_axis - 1) idx[std::size_t(d--)] = 1;
        if (d < 0) break;
    }
    return {lower, upper};
}

// Remark-style scaling: u~(x) = u(rx)/K on the same grid layout (nearest
// node resampling), f~(x) = r^{p+2}/K^{p+1} f(rx).
inline std::pair<ScalarField, ScalarField> rescale(const ScalarField& u, double r, double Kdiv,
                                                   const ScalarField& f, DegeneracyExponent p) {
    const GridSpec& s = u.spec;
    if (!f.spec.same_layout(s)) throw InvalidInput("rescale: grid mismatch");
    if (!(r > 0.0) || !(Kdiv > 0.0)) throw InvalidInput("rescale: need r, K > 0");
    if (r > 1.0) throw InvalidInput("rescale: r * cube does not fit in the source cube");

    const double fscale = std::pow(r, p.p + 2.0) / std::pow(Kdiv, p.p + 1.0);
    ScalarField ut(s), ft(s);
    MultiIndex idx(std::size_t(s.dim), 0);
    const double h = s.spacing();
    MultiIndex src(std::size_t(s.dim), 0);
    do {
        const Vec x = s.point(idx);
        bool ok = true;
        for (int d = 0; d < s.dim; ++d) {
            const double xs = r * (x[std::size_t(d)] - s.center[std::size_t(d)]) + s.center[std::size_t(d)];
            const double t = (xs - s.center[std::size_t(d)] + s.half_width) / h;
            const int i = int(std::lround(t));
            if (i < 0 || i >= s.points_per_axis) ok = false;
            src[std::size_t(d)] = std::clamp(i, 0, s.points_per_axis - 1);
        }
        if (!ok) throw InvalidInput("rescale: resample point out of the source domain");
        ut.at(idx) = u.at(src) / Kdiv;
        ft.at(idx) = fscale * f.at(src);
    } while (s.next(idx));
    return {ut, ft};
}

}  // namespace pplab
