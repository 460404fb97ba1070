#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "pplab/grid.hpp"
#include "pplab/pucci.hpp"

namespace pplab {

// ---------------------------------------------------------------------------
// Dyadic cubes over the unit cube [0,1)^n (level-l cells of side 2^-l).
// ---------------------------------------------------------------------------

struct DyadicCube {
    int level = 0;
    std::vector<int> index;  // per-axis cell index, 0 <= index_i < 2^level

    bool operator==(const DyadicCube& o) const { return level == o.level && index == o.index; }
};

inline void validate_cube(const DyadicCube& c, int dim) {
    if (c.level < 0 || int(c.index.size()) != dim) throw InvalidInput("DyadicCube: bad shape");
    for (int i : c.index)
        if (i < 0 || i >= (1 << c.level)) throw InvalidInput("DyadicCube: index out of range");
}

inline DyadicCube predecessor(const DyadicCube& c) {
    if (c.level < 1) throw InvalidInput("predecessor: root cube has no predecessor");
    DyadicCube p{c.level - 1, c.index};
    for (int& i : p.index) i >>= 1;
    return p;
}

inline std::vector<DyadicCube> children(const DyadicCube& c) {
    const int n = int(c.index.size());
    std::vector<DyadicCube> out;
    out.reserve(std::size_t(1) << n);
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        DyadicCube ch{c.level + 1, c.index};
        for (int d = 0; d < n; ++d) ch.index[std::size_t(d)] = 2 * c.index[std::size_t(d)] + ((bits >> d) & 1);
        out.push_back(std::move(ch));
    }
    return out;
}

inline DyadicCube cube_of_point(const Vec& unit_x, int level) {
    DyadicCube c{level, std::vector<int>(unit_x.size())};
    for (std::size_t d = 0; d < unit_x.size(); ++d) {
        int i = int(std::floor(unit_x[d] * (1 << level)));
        c.index[d] = std::clamp(i, 0, (1 << level) - 1);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Discrete Calderon-Zygmund check on a cell-centered 2^L lattice.
// ---------------------------------------------------------------------------

// Indicator sets over a dyadic lattice with 2^L cells per axis; every
// finest-level cell holds exactly one node, so node counting is the exact
// counting-measure analogue of the Lebesgue statement.
struct CzLattice {
    int dim;
    int levels;  // finest level L

    CzLattice(int n, int L) : dim(n), levels(L) {
        if (n < 1 || n > 4) throw InvalidInput("CzLattice: need 1 <= dim <= 4");
        if (L < 1 || L > 12) throw InvalidInput("CzLattice: need 1 <= levels <= 12");
    }

    std::size_t node_count() const {
        std::size_t c = 1;
        for (int d = 0; d < dim; ++d) c *= std::size_t(1) << levels;
        return c;
    }

    // nodes covered by a dyadic cube, as a linear index range walk
    template <typename Fn>
    void for_each_node(const DyadicCube& c, Fn&& fn) const {
        const int side = 1 << (levels - c.level);
        std::vector<int> off(std::size_t(dim), 0);
        for (;;) {
            std::size_t lin = 0;
            for (int d = 0; d < dim; ++d)
                lin = (lin << levels) | std::size_t(c.index[std::size_t(d)] * side + off[std::size_t(d)]);
            fn(lin);
            int d = dim - 1;
            while (d >= 0 && ++off[std::size_t(d)] == side) off[std::size_t(d--)] = 0;
            if (d < 0) break;
        }
    }
};

struct CzVerdict {
    bool hypotheses_hold = false;
    int violated_hypothesis = 0;  // 0 none, 1 or 2
    DyadicCube offending_cube;    // meaningful when violated_hypothesis == 2
    bool conclusion_holds = false;
    std::size_t count_E = 0;
    std::size_t count_F = 0;
    std::string message;
};

// Verifies both CZ hypotheses by exhaustive dyadic scan down to the lattice
// resolution, then asserts |E| <= delta |F|.  A conclusion failure with
// hypotheses intact signals an implementation bug, not a data problem.
inline CzVerdict cz_check(const CzLattice& lat, const std::vector<std::uint8_t>& E,
                          const std::vector<std::uint8_t>& F, double delta) {
    const std::size_t N = lat.node_count();
    if (E.size() != N || F.size() != N) throw InvalidInput("cz_check: indicator size mismatch");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("cz_check: need delta in (0,1)");
    for (std::size_t i = 0; i < N; ++i)
        if (E[i] && !F[i]) throw InvalidInput("cz_check: E not contained in F");

    CzVerdict v;
    for (std::size_t i = 0; i < N; ++i) {
        v.count_E += E[i] ? 1 : 0;
        v.count_F += F[i] ? 1 : 0;
    }

    // Hypothesis (1): |E| <= delta |Q_1|
    if (double(v.count_E) > delta * double(N)) {
        v.violated_hypothesis = 1;
        v.message = "hypothesis 1 violated: |E| > delta";
        return v;
    }

    // Hypothesis (2): every dyadic cube with |E cap Q| > delta |Q| has its
    // predecessor inside F.
    for (int level = 1; level <= lat.levels; ++level) {
        std::vector<int> idx(std::size_t(lat.dim), 0);
        for (;;) {
            DyadicCube c{level, idx};
            std::size_t inE = 0, cubeN = 0;
            lat.for_each_node(c, [&](std::size_t lin) {
                ++cubeN;
                inE += E[lin] ? 1 : 0;
            });
            if (double(inE) > delta * double(cubeN)) {
                bool pred_in_F = true;
                lat.for_each_node(predecessor(c), [&](std::size_t lin) {
                    if (!F[lin]) pred_in_F = false;
                });
                if (!pred_in_F) {
                    v.violated_hypothesis = 2;
                    v.offending_cube = c;
                    v.message = "hypothesis 2 violated at level " + std::to_string(level);
                    return v;
                }
            }
            int d = lat.dim - 1;
            while (d >= 0 && ++idx[std::size_t(d)] == (1 << level)) idx[std::size_t(d--)] = 0;
            if (d < 0) break;
        }
    }

    v.hypotheses_hold = true;
    v.conclusion_holds = double(v.count_E) <= delta * double(v.count_F) + 1e-12;
    v.message = v.conclusion_holds ? "conclusion holds" : "conclusion FAILED with hypotheses intact";
    return v;
}

// ---------------------------------------------------------------------------
// Empirical regularity metrics.
// ---------------------------------------------------------------------------

struct TailCurve {
    Vec thresholds;
    Vec fractions;  // node fraction of {u > t}
};

struct TailFit {
    bool defined = false;
    double epsilon = 0.0;  // decay exponent in |{u > t}| ~ C t^-epsilon
    double C = 0.0;
    double fit_residual = 0.0;  // RMS residual of the log-log regression
    int window_begin = 0;
    int window_end = 0;  // exclusive
};

inline TailCurve tail_distribution(const ScalarField& u, const Vec& thresholds) {
    double inf = std::numeric_limits<double>::infinity();
    for (double v : u.values) inf = std::min(inf, v);
    if (inf > 1.0 + 1e-12)
        throw InvalidInput("tail_distribution: field not normalized (inf > 1)");
    TailCurve c;
    c.thresholds = thresholds;
    c.fractions.resize(thresholds.size());
    const double N = double(u.values.size());
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        std::size_t cnt = 0;
        for (double v : u.values)
            if (v > thresholds[k]) ++cnt;
        c.fractions[k] = double(cnt) / N;
    }
    return c;
}

// Least-squares fit of log measure vs log t over the decaying range (flat
// head and empty tail are excluded automatically).
inline TailFit fit_tail(const TailCurve& curve) {
    TailFit fit;
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < curve.thresholds.size(); ++k)
        if (curve.fractions[k] > 0.0 && curve.thresholds[k] > 0.0) keep.push_back(k);
    // drop the leading plateau
    while (keep.size() > 1 && curve.fractions[keep[0]] == curve.fractions[keep[1]]) keep.erase(keep.begin());
    if (keep.size() < 3) return fit;  // fit-undefined notice

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k : keep) {
        const double x = std::log(curve.thresholds[k]);
        const double y = std::log(curve.fractions[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = double(keep.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / m;
    double rss = 0.0;
    for (std::size_t k : keep) {
        const double r = std::log(curve.fractions[k]) - (slope * std::log(curve.thresholds[k]) + icpt);
        rss += r * r;
    }
    fit.defined = true;
    fit.epsilon = -slope;
    fit.C = std::exp(icpt);
    fit.fit_residual = std::sqrt(rss / m);
    fit.window_begin = int(keep.front());
    fit.window_end = int(keep.back()) + 1;
    return fit;
}

struct HarnackResult {
    bool degenerate = false;  // u == 0 and f == 0
    double ratio = 0.0;
    double sup = 0.0;
    double inf = 0.0;
    double f_norm = 0.0;  // grid L^n norm of f
};

// sup over B_{1/2} nodes over (inf over B_{1/2} nodes + ||f||_{L^n}^{1/(1+p)})
inline HarnackResult harnack_report(const ScalarField& u, const ScalarField& f, DegeneracyExponent p) {
    const GridSpec& s = u.spec;
    if (!f.spec.same_layout(s)) throw InvalidInput("harnack_report: grid mismatch");
    HarnackResult r;
    r.sup = -std::numeric_limits<double>::infinity();
    r.inf = std::numeric_limits<double>::infinity();
    MultiIndex idx(std::size_t(s.dim), 0);
    std::size_t k = 0;
    do {
        const Vec x = s.point(idx);
        double d2 = 0.0;
        for (int d = 0; d < s.dim; ++d) {
            const double t = x[std::size_t(d)] - s.center[std::size_t(d)];
            d2 += t * t;
        }
        const double v = u.values[k++];
        if (v < 0.0) throw InvalidInput("harnack_report: field must be nonnegative");
        if (d2 < 0.25) {
            r.sup = std::max(r.sup, v);
            r.inf = std::min(r.inf, v);
        }
    } while (s.next(idx));

    const double h = s.spacing();
    const int n = s.dim;
    double fn = 0.0;
    for (double fv : f.values) fn += std::pow(std::fabs(fv), double(n));
    r.f_norm = std::pow(fn * std::pow(h, double(n)), 1.0 / double(n));
    const double denom = r.inf + std::pow(r.f_norm, 1.0 / (1.0 + p.p));
    if (denom == 0.0) {
        r.degenerate = true;
        return r;
    }
    r.ratio = r.sup / denom;
    return r;
}

struct HolderResult {
    bool defined = false;
    double alpha = 0.0;
    double fit_residual = 0.0;
    Vec radii;
    Vec oscillations;  // max over sample centers of sup-inf on B_r(center)
};

// Oscillation-decay exponent: alpha is the log-log slope of
// r -> max_c osc(u, B_r(c)) over dyadic radii, centers sampled in B_{1/2}.
inline HolderResult holder_report(const ScalarField& u, const Vec& radii_in = {}) {
    const GridSpec& s = u.spec;
    Vec radii = radii_in;
    if (radii.empty())
        radii = {s.half_width / 4.0, s.half_width / 8.0, s.half_width / 16.0, s.half_width / 32.0};

    // center sample: every k-th node inside B_{1/2 * half_width}; the center
    // spacing must not exceed the smallest radius or the worst-placed-ball
    // envelope loses its scale factor at the finest radii and the log-log
    // slope comes out inconsistent across scales
    double rmin = radii[0];
    for (double r : radii) rmin = std::min(rmin, r);
    const double h0 = s.spacing();
    int stride = std::max(1, int(std::floor(rmin / h0)));
    stride = std::min(stride, std::max(1, s.points_per_axis / 16));
    std::vector<MultiIndex> centers;
    MultiIndex idx(std::size_t(s.dim), 0);
    do {
        bool on_stride = true;
        for (int d = 0; d < s.dim; ++d)
            if (idx[std::size_t(d)] % stride != 0) on_stride = false;
        if (on_stride) {
            const Vec x = s.point(idx);
            double d2 = 0.0;
            for (int d = 0; d < s.dim; ++d) {
                const double t = x[std::size_t(d)] - s.center[std::size_t(d)];
                d2 += t * t;
            }
            if (d2 < 0.25 * s.half_width * s.half_width) centers.push_back(idx);
        }
    } while (s.next(idx));

    HolderResult res;
    res.radii = radii;
    const double h = s.spacing();
    for (double r : radii) {
        double worst = 0.0;
        const int reach = int(std::ceil(r / h));
        for (const MultiIndex& c : centers) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            MultiIndex j(std::size_t(s.dim), 0);
            std::vector<int> off(std::size_t(s.dim), -reach);
            for (;;) {
                bool in_grid = true;
                double d2 = 0.0;
                for (int d = 0; d < s.dim; ++d) {
                    const int jj = c[std::size_t(d)] + off[std::size_t(d)];
                    if (jj < 0 || jj >= s.points_per_axis) in_grid = false;
                    j[std::size_t(d)] = std::clamp(jj, 0, s.points_per_axis - 1);
                    d2 += double(off[std::size_t(d)]) * off[std::size_t(d)] * h * h;
                }
                if (in_grid && d2 <= r * r * (1.0 + 1e-12)) {
                    const double v = u.at(j);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                int d = s.dim - 1;
                while (d >= 0 && ++off[std::size_t(d)] > reach) off[std::size_t(d--)] = -reach;
                if (d < 0) break;
            }
            if (hi > lo) worst = std::max(worst, hi - lo);
        }
        res.oscillations.push_back(worst);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (res.oscillations[k] <= 0.0) continue;
        const double x = std::log(radii[k]);
        const double y = std::log(res.oscillations[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return res;  // constant field: oscillation zero, fit undefined
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / m;
    double rss = 0.0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (res.oscillations[k] <= 0.0) continue;
        const double r = std::log(res.oscillations[k]) - (slope * std::log(radii[k]) + icpt);
        rss += r * r;
    }
    res.defined = true;
    res.alpha = slope;
    res.fit_residual = std::sqrt(rss / m);
    return res;
}

}  // namespace pplab
