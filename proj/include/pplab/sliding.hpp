#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>

#include "pplab/grid.hpp"
#include "pplab/profiles.hpp"

namespace pplab {

struct TouchingRecord {
    Vec vertex;
    Vec touch;
    MultiIndex touch_index;
    double offset = 0.0;                 // min of u - phi(. - y)
    std::uint32_t nondeg_mask = 0;       // bit i set <=> |x_i - y_i| > eps_deg
    std::optional<double> jac_det;       // absent at boundary touches
    std::optional<double> a_min_eig;     // min eigenvalue of the symmetrized A
};

struct ThresholdConfig {
    double delta;
    double mu;
    double M;
    double eps_deg;
    ThresholdConfig(double d, double m, double big_m, double eps)
        : delta(d), mu(m), M(big_m), eps_deg(eps) {
        if (!(d > 0.0 && d < 1.0)) throw InvalidInput("ThresholdConfig: need delta in (0,1)");
        if (!(m > 0.0 && m < 1.0)) throw InvalidInput("ThresholdConfig: need mu in (0,1)");
        if (!(big_m > 1.0)) throw InvalidInput("ThresholdConfig: need M > 1");
        if (!(eps >= 0.0)) throw InvalidInput("ThresholdConfig: need eps_deg >= 0");
    }
};

// Smallest power of 2 with K (1+p)/(2+p) (1 - 1/4n)^2 > 1 + K (1+p)/(2+p) (1/2n);
// the discrete version of "by choosing a large K".
inline double default_paraboloid_amplitude(int n, double p) {
    const double c = (1.0 + p) / (2.0 + p);
    const double lhs = c * (1.0 - 1.0 / (4.0 * n)) * (1.0 - 1.0 / (4.0 * n));
    const double rhs = c * (1.0 / (2.0 * n));
    for (double k = 2.0; k <= 1e9; k *= 2.0)
        if (k * lhs > 1.0 + k * rhs) return k;
    throw SearchFailure("default_paraboloid_amplitude: no admissible K");
}

inline double default_threshold_M(int n, double p, double K) {
    const double c = (1.0 + p) / (2.0 + p);
    return K * c * (1.0 - 1.0 / (4.0 * n)) * (1.0 - 1.0 / (4.0 * n));
}

// Slide phi(. - y) upward under u until first contact.  The touch is the
// argmin of u(z) - phi(z - y) over all grid nodes; ties resolve to the
// lexicographically smallest multi-index (the scan order).
inline TouchingRecord slide_vertex(const ScalarField& u, const Vec& y,
                                   const ParaboloidParams& P, double eps_deg) {
    const GridSpec& s = u.spec;
    MultiIndex idx(std::size_t(s.dim), 0);
    MultiIndex best_idx = idx;
    double best = std::numeric_limits<double>::infinity();
    Vec diff(std::size_t(s.dim), 0.0);
    std::size_t k = 0;
    do {
        const Vec z = s.point(idx);
        for (int d = 0; d < s.dim; ++d) diff[std::size_t(d)] = z[std::size_t(d)] - y[std::size_t(d)];
        const double val = u.values[k++] - phi_eval(diff, P);
        if (val < best) {
            best = val;
            best_idx = idx;
        }
    } while (s.next(idx));

    TouchingRecord rec;
    rec.vertex = y;
    rec.touch_index = best_idx;
    rec.touch = s.point(best_idx);
    rec.offset = best;
    for (int d = 0; d < s.dim; ++d)
        if (std::fabs(rec.touch[std::size_t(d)] - y[std::size_t(d)]) > eps_deg)
            rec.nondeg_mask |= (1u << d);
    return rec;
}

// Full rescan of the touching inequality; test aid.
inline bool verify_touching(const ScalarField& u, const TouchingRecord& rec,
                            const ParaboloidParams& P, double tol = 1e-12) {
    const GridSpec& s = u.spec;
    MultiIndex idx(std::size_t(s.dim), 0);
    std::size_t k = 0;
    Vec diff(std::size_t(s.dim), 0.0);
    do {
        const Vec z = s.point(idx);
        for (int d = 0; d < s.dim; ++d) diff[std::size_t(d)] = z[std::size_t(d)] - rec.vertex[std::size_t(d)];
        if (u.values[k++] - phi_eval(diff, P) < rec.offset - tol) return false;
    } while (s.next(idx));
    return true;
}

// y_i = x_i + K^{-(1+p)} |g_i|^p g_i
inline Vec vertex_from_gradient(const Vec& x, const Vec& g, const ParaboloidParams& P) {
    Vec y(x.size());
    const double c = std::pow(P.K, -(1.0 + P.p.p));
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = x[i] + c * std::pow(std::fabs(g[i]), P.p.p) * g[i];
    return y;
}

inline SymMatrix touch_matrix_A(const Vec& g, const SymMatrix& h, const ParaboloidParams& P) {
    const double c = (1.0 + P.p.p) / std::pow(P.K, 1.0 + P.p.p);
    SymMatrix a = c * weighted_hessian(g, h, P.p);
    for (int i = 0; i < a.dim(); ++i) a.add(i, i, 1.0);
    return a;
}

// det(I + (1+p)/K^{1+p} diag(|g_i|^{p/2}) H diag(|g_i|^{p/2})); equal to the
// unsymmetrized det(I + (1+p)/K^{1+p} diag(|g_i|^p) H) by det(I+MN)=det(I+NM).
inline double touch_jacobian_det(const Vec& g, const SymMatrix& h, const ParaboloidParams& P) {
    return Matrix::from(touch_matrix_A(g, h, P)).determinant();
}

// |det( D((DPhi)^{-1})(g) . (D^2 Phi_0(x-y) - H) )|
inline double barrier_touch_jacobian_det(const Vec& x_minus_y, const Vec& g, const SymMatrix& h,
                                         const BarrierParams& B) {
    if (euclidean_norm(g) == 0.0) throw Singularity("barrier_touch_jacobian_det: g = 0");
    const SymMatrix igj = inverse_gradient_jacobian(g, B);
    const SymMatrix bh = barrier_hess(x_minus_y, B);
    const Matrix prod = Matrix::from(igj) * (Matrix::from(bh) - Matrix::from(h));
    return std::fabs(prod.determinant());
}

struct MeasureReport {
    std::map<std::uint32_t, std::size_t> vertex_counts;  // |V_I| per nondeg mask
    std::map<std::uint32_t, std::size_t> touch_counts;   // |T_I|, distinct touch nodes
    double mu = 0.0;
    double empirical_C = 0.0;
    std::size_t vertex_total = 0;
    std::size_t touch_at_or_above_M = 0;   // violations of T subset of {u < M}
    std::size_t case2_violations = 0;      // touch == vertex while u(touch) > M
    double eps_deg = 0.0;
    double M = 0.0;
    double K = 0.0;
    bool degenerate = false;  // empty vertex set (notice, not an error)

    std::string to_kv_text(int dim) const {
        std::ostringstream os;
        os.precision(17);
        os << "degenerate = " << (degenerate ? 1 : 0) << "\n";
        os << "empirical_C = " << empirical_C << "\n";
        os << "eps_deg = " << eps_deg << "\n";
        os << "K = " << K << "\n";
        os << "M = " << M << "\n";
        os << "mu = " << mu << "\n";
        os << "case2_violations = " << case2_violations << "\n";
        os << "touch_at_or_above_M = " << touch_at_or_above_M << "\n";
        os << "vertex_total = " << vertex_total << "\n";
        for (const auto& [mask, cnt] : vertex_counts) os << "V_" << mask_name(mask, dim) << " = " << cnt << "\n";
        for (const auto& [mask, cnt] : touch_counts) os << "T_" << mask_name(mask, dim) << " = " << cnt << "\n";
        return os.str();
    }

    static std::string mask_name(std::uint32_t mask, int dim) {
        std::string s = "{";
        bool first = true;
        for (int d = 0; d < dim; ++d)
            if (mask & (1u << d)) {
                if (!first) s += ",";
                s += std::to_string(d + 1);
                first = false;
            }
        return s + "}";
    }
};

struct MeasureExperimentResult {
    MeasureReport report;
    std::vector<TouchingRecord> records;
};

// The sliding experiment behind the measure estimate: enumerate vertex
// nodes of {u > M} inside the vertex cube, slide, classify by degenerate
// directions, and tally |V_I| against distinct touch nodes |T_I|.
inline MeasureExperimentResult measure_estimate_experiment(
    const ScalarField& u, const ScalarField& f, const ThresholdConfig& T,
    const ParaboloidParams& P, double vertex_halfwidth = -1.0) {
    const GridSpec& s = u.spec;
    if (!f.spec.same_layout(s)) throw InvalidInput("measure_estimate_experiment: u/f grid mismatch");
    const int n = s.dim;
    if (vertex_halfwidth <= 0.0) vertex_halfwidth = 1.0 / (4.0 * n);

    MeasureExperimentResult res;
    MeasureReport& rep = res.report;
    rep.mu = T.mu;
    rep.eps_deg = T.eps_deg;
    rep.M = T.M;
    rep.K = P.K;

    std::map<std::uint32_t, std::map<std::size_t, bool>> touch_nodes;  // mask -> linear touch index set

    MultiIndex idx(std::size_t(n), 0);
    std::size_t k = 0;
    do {
        const double uy = u.values[k++];
        if (!(uy > T.M)) continue;
        const Vec y = s.point(idx);
        bool inside = true;
        for (int d = 0; d < n; ++d)
            if (!(std::fabs(y[std::size_t(d)] - s.center[std::size_t(d)]) < vertex_halfwidth)) inside = false;
        if (!inside) continue;

        TouchingRecord rec = slide_vertex(u, y, P, T.eps_deg);
        const double u_touch = u.at(rec.touch_index);
        if (u_touch >= T.M) ++rep.touch_at_or_above_M;
        if (rec.touch_index == idx && u_touch > T.M) ++rep.case2_violations;
        if (s.interior_margin(rec.touch_index) >= 1) {
            const Vec g = fd_gradient(u, rec.touch_index);
            const SymMatrix h = fd_hessian(u, rec.touch_index);
            const SymMatrix a = touch_matrix_A(g, h, P);
            rec.jac_det = Matrix::from(a).determinant();
            rec.a_min_eig = sym_eigenvalues(a).front();
        }
        ++rep.vertex_counts[rec.nondeg_mask];
        ++rep.vertex_total;
        touch_nodes[rec.nondeg_mask][s.linear(rec.touch_index)] = true;
        res.records.push_back(std::move(rec));
    } while (s.next(idx));

    if (rep.vertex_total == 0) {
        rep.degenerate = true;
        return res;
    }

    const double volume = std::pow(2.0 * s.half_width, n);
    const double node_density = double(s.node_count()) / volume;
    const double mu_nodes = std::pow(T.mu, n) * node_density;
    double best = 0.0;
    for (const auto& [mask, nodes] : touch_nodes) {
        rep.touch_counts[mask] = nodes.size();
        best = std::max(best, double(rep.vertex_counts[mask]) / (double(nodes.size()) + mu_nodes));
    }
    rep.empirical_C = best;
    return res;
}

inline std::uint32_t remap_mask(std::uint32_t mask, const std::vector<int>& kept) {
    std::uint32_t full = 0;
    for (int d = 0; d < int(kept.size()); ++d)
        if (mask & (1u << d)) full |= (1u << kept[std::size_t(d)]);
    return full;
}

// Slice-and-sum variant: runs the reduced-dimension experiment on every
// slice with the given axes frozen at vertex-cube grid lines and aggregates
// the counts, mirroring the Fubini summation.
inline MeasureExperimentResult sliced_measure_experiment(
    const ScalarField& u, const ScalarField& f, const ThresholdConfig& T,
    const ParaboloidParams& P, const std::vector<int>& frozen_axes,
    double vertex_halfwidth = -1.0) {
    if (frozen_axes.empty()) return measure_estimate_experiment(u, f, T, P, vertex_halfwidth);

    const GridSpec& s = u.spec;
    const int n = s.dim;
    if (vertex_halfwidth <= 0.0) vertex_halfwidth = 1.0 / (4.0 * n);
    if (int(frozen_axes.size()) >= n)
        throw InvalidSlice("sliced_measure_experiment: must keep at least one axis");

    std::vector<int> kept;
    {
        std::vector<bool> frozen(std::size_t(n), false);
        for (int ax : frozen_axes) {
            if (ax < 0 || ax >= n || frozen[std::size_t(ax)])
                throw InvalidSlice("sliced_measure_experiment: bad frozen axis");
            frozen[std::size_t(ax)] = true;
        }
        for (int d = 0; d < n; ++d)
            if (!frozen[std::size_t(d)]) kept.push_back(d);
    }

    MeasureExperimentResult agg;
    MeasureReport& rep = agg.report;
    rep.mu = T.mu;
    rep.eps_deg = T.eps_deg;
    rep.M = T.M;
    rep.K = P.K;

    std::map<std::uint32_t, std::map<std::pair<std::size_t, std::size_t>, bool>> touch_nodes;

    // Frozen values run over grid lines inside the vertex cube, so slice
    // vertex sets partition the full vertex set.
    const int nf = int(frozen_axes.size());
    std::vector<int> fidx(std::size_t(nf), 0);
    std::size_t slice_id = 0;
    for (;;) {
        SliceSpec sl;
        sl.frozen_axes = frozen_axes;
        sl.frozen_values.resize(std::size_t(nf));
        bool inside = true;
        for (int q = 0; q < nf; ++q) {
            const int ax = frozen_axes[std::size_t(q)];
            const double a = s.coord(ax, fidx[std::size_t(q)]);
            sl.frozen_values[std::size_t(q)] = a;
            if (!(std::fabs(a - s.center[std::size_t(ax)]) < vertex_halfwidth)) inside = false;
        }
        if (inside) {
            const ScalarField us = restrict_slice(u, sl);
            const ScalarField fs = restrict_slice(f, sl);
            MeasureExperimentResult sub = measure_estimate_experiment(us, fs, T, P, vertex_halfwidth);
            for (const auto& [mask, cnt] : sub.report.vertex_counts)
                rep.vertex_counts[remap_mask(mask, kept)] += cnt;
            for (const auto& rec : sub.records)
                touch_nodes[remap_mask(rec.nondeg_mask, kept)][{slice_id, us.spec.linear(rec.touch_index)}] = true;
            rep.vertex_total += sub.report.vertex_total;
            rep.touch_at_or_above_M += sub.report.touch_at_or_above_M;
            rep.case2_violations += sub.report.case2_violations;
            for (auto& rec : sub.records) agg.records.push_back(std::move(rec));
            ++slice_id;
        }
        int q = 0;
        while (q < nf && ++fidx[std::size_t(q)] == s.points_per_axis) fidx[std::size_t(q++)] = 0;
        if (q == nf) break;
    }

    if (rep.vertex_total == 0) {
        rep.degenerate = true;
        return agg;
    }
    const double volume = std::pow(2.0 * s.half_width, n);
    const double node_density = double(s.node_count()) / volume;
    const double mu_nodes = std::pow(T.mu, n) * node_density;
    double best = 0.0;
    for (const auto& [mask, nodes] : touch_nodes) {
        rep.touch_counts[mask] = nodes.size();
        best = std::max(best, double(rep.vertex_counts[mask]) / (double(nodes.size()) + mu_nodes));
    }
    rep.empirical_C = best;
    return agg;
}

}  // namespace pplab
