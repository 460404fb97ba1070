// pplab: batch experiment driver.
//
// Subcommands: solve | barrier-verify | slide | infconv | harnack | holder |
// tail | cz-check.  Every run reads a flat "key = value" config, executes one
// experiment, and writes deterministic JSON/CSV (and SVG for curve outputs)
// into --out.  Exit status: 0 success, 2 experiment assertion failure,
// 1 usage/config errors.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pplab/config.hpp"
#include "pplab/field_io.hpp"
#include "pplab/inf_convolution.hpp"
#include "pplab/profiles.hpp"
#include "pplab/regularity.hpp"
#include "pplab/report_io.hpp"
#include "pplab/sliding.hpp"
#include "pplab/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pplab;

namespace {

// ---------------------------------------------------------------------------
// Deterministic RNG (splitmix64); identical streams on every platform.
// ---------------------------------------------------------------------------

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }  // [0,1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

using pplab::config_require;

void require(bool ok, const std::string& key, const std::string& what) {
    config_require(ok, key, what);
}

// ---------------------------------------------------------------------------
// Shared pieces.
// ---------------------------------------------------------------------------

struct Common {
    fs::path out;
    std::uint64_t seed = 1;
    bool verbose = false;
};

GridSpec grid_from(Config& c, int dflt_points = 33) {
    const long dim = c.get_long("dim", 2);
    require(dim >= 1 && dim <= 4, "dim", "need 1 <= dim <= 4");
    const long ppa = c.get_long("points", long(dflt_points));
    require(ppa >= 9 && ppa % 2 == 1, "points", "need odd points >= 9");
    const double hw = c.get_double("half_width", 1.0);
    require(hw > 0.0, "half_width", "need half_width > 0");
    return GridSpec(int(dim), Vec(std::size_t(dim), 0.0), hw, int(ppa));
}

EllipticityParams ellipticity_from(Config& c) {
    const double lam = c.get_double("lambda", 1.0);
    const double Lam = c.get_double("Lambda", 1.0);
    if (!(lam > 0.0 && lam <= Lam))
        throw ConfigError("keys 'lambda'/'Lambda': constraint violation, need 0 < lambda <= Lambda");
    return EllipticityParams(lam, Lam);
}

void emit(const Common& cm, const json& report, const CsvTable& table,
          const std::string& svg = "") {
    fs::create_directories(cm.out);
    write_text_file((cm.out / "report.json").string(), report.dump(2) + "\n");
    write_text_file((cm.out / "table.csv").string(), table.to_string());
    if (!svg.empty()) write_text_file((cm.out / "plot.svg").string(), svg);
}

ScalarField random_field(const GridSpec& s, Rng& rng, double lo, double hi) {
    ScalarField u(s);
    for (double& v : u.values) v = rng.uniform(lo, hi);
    return u;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct Manufactured {
    std::function<double(const Vec&)> exact;  // nullptr-like when unknown
    std::function<double(const Vec&)> forcing;
};

Manufactured manufactured_problem(const std::string& name, int n, double p) {
    if (name == "affine") {
        return {[](const Vec& x) {
                    double s = 1.0;
                    for (std::size_t d = 0; d < x.size(); ++d) s += double(d + 1) * x[d];
                    return s;
                },
                [](const Vec&) { return 0.0; }};
    }
    if (name == "poisson") {
        // u = |x|^2, f = sum |2 x_i|^p * 2
        return {[](const Vec& x) {
                    double s = 0.0;
                    for (double xi : x) s += xi * xi;
                    return s;
                },
                [p](const Vec& x) {
                    double s = 0.0;
                    for (double xi : x) s += (p == 0.0 ? 1.0 : std::pow(std::fabs(2.0 * xi), p)) * 2.0;
                    return s;
                }};
    }
    if (name == "separable") {
        // u = sum x_i^2 / 2, f = sum |x_i|^p
        return {[](const Vec& x) {
                    double s = 0.0;
                    for (double xi : x) s += 0.5 * xi * xi;
                    return s;
                },
                [p](const Vec& x) {
                    double s = 0.0;
                    for (double xi : x) s += (p == 0.0 ? 1.0 : std::pow(std::fabs(xi), p));
                    return s;
                }};
    }
    if (name == "smooth") {
        // u = sin(x_1) + ... + sin(x_n); valid for p = 0 only
        return {[](const Vec& x) {
                    double s = 0.0;
                    for (double xi : x) s += std::sin(xi);
                    return s;
                },
                [](const Vec& x) {
                    double s = 0.0;
                    for (double xi : x) s -= std::sin(xi);
                    return s;
                }};
    }
    (void)n;
    throw ConfigError("key 'problem': constraint violation, unknown problem '" + name + "'");
}

int run_solve(Config& c, const Common& cm) {
    const double p = c.get_double("p", 0.0);
    require(p >= 0.0, "p", "need p >= 0");
    const std::string problem = c.get_string("problem", std::string("poisson"));
    const double tol = c.get_double("tol", 1e-8);
    require(tol > 0.0, "tol", "need tol > 0");
    const long max_steps = c.get_long("max_steps", 200000);
    require(max_steps >= 1, "max_steps", "need max_steps >= 1");
    const double safety = c.get_double("safety", 0.9);
    const double floor = c.get_double("floor", 0.0);
    const long refine = c.get_long("refine", 1);
    require(refine >= 1 && refine <= 4, "refine", "need 1 <= refine <= 4");
    GridSpec base = grid_from(c);
    c.finish();

    const Manufactured mp = manufactured_problem(problem, base.dim, p);
    const SolveConfig scfg(tol, max_steps, safety, floor);

    json rep;
    rep["experiment"] = "solve";
    rep["problem"] = problem;
    rep["p"] = p;
    CsvTable tab;
    tab.header = {"points", "h", "steps", "final_residual", "sup_error", "order"};
    std::vector<double> hs, errs;
    double prev_err = 0.0, prev_h = 0.0;
    bool all_converged = true;
    int ppa = base.points_per_axis;
    for (long k = 0; k < refine; ++k) {
        GridSpec s(base.dim, base.center, base.half_width, ppa);
        ScalarField f = ScalarField::sample(s, mp.forcing);
        ScalarField bc = ScalarField::sample(s, mp.exact);
        auto [u, r] = solve_dirichlet_warm(f, bc, p, scfg);
        all_converged = all_converged && r.converged;

        double sup_err = 0.0;
        {
            ScalarField ex = ScalarField::sample(s, mp.exact);
            for (std::size_t i = 0; i < u.values.size(); ++i)
                sup_err = std::max(sup_err, std::fabs(u.values[i] - ex.values[i]));
        }
        const double h = s.spacing();
        std::string order = "";
        if (k > 0 && sup_err > 0.0 && prev_err > 0.0)
            order = fmt_num(std::log(prev_err / sup_err) / std::log(prev_h / h));
        tab.add_row({std::to_string(ppa), fmt_num(h), std::to_string(r.steps),
                     fmt_num(r.final_residual), fmt_num(sup_err), order});
        hs.push_back(std::log(h));
        errs.push_back(sup_err > 0.0 ? std::log(sup_err) : std::log(1e-300));
        if (k + 1 == refine) {
            field_io_write(u, (cm.out / "solution.bin").string());
            rep["steps"] = r.steps;
            rep["initial_residual"] = r.initial_residual;
            rep["final_residual"] = r.final_residual;
            rep["converged"] = r.converged;
            rep["sup_error"] = sup_err;
            rep["dt_min"] = r.dt_min;
            rep["dt_max"] = r.dt_max;
            rep["floor"] = r.floor;
        }
        prev_err = sup_err;
        prev_h = h;
        ppa = 2 * (ppa - 1) + 1;
    }
    fs::create_directories(cm.out);
    emit(cm, rep, tab, svg_line_plot("convergence", "log h", "log sup error", hs, errs));
    return all_converged ? 0 : 2;
}

// ---------------------------------------------------------------------------
// barrier-verify
// ---------------------------------------------------------------------------

int run_barrier_verify(Config& c, const Common& cm) {
    const long n = c.get_long("dim", 2);
    require(n >= 1 && n <= 4, "dim", "need 1 <= dim <= 4");
    const double p = c.get_double("p", 0.0);
    require(p >= 0.0, "p", "need p >= 0");
    const EllipticityParams e = ellipticity_from(c);
    const double threshold = c.get_double("threshold", 1.0);
    c.finish();

    const auto pts = barrier_sample_points(int(n));
    json rep;
    rep["experiment"] = "barrier-verify";
    rep["dim"] = n;
    rep["p"] = p;
    rep["lambda"] = e.lambda;
    rep["Lambda"] = e.Lambda;
    rep["threshold"] = threshold;
    rep["sample_points"] = pts.size();
    CsvTable tab;
    tab.header = {"a", "min_residual", "passes"};

    double selected = -1.0;
    for (double a = 2.0; a <= double(1 << 20); a *= 2.0) {
        const BarrierParams B(a, 2.0, DegeneracyExponent(p));
        double mn = std::numeric_limits<double>::infinity();
        for (const Vec& x : pts) mn = std::min(mn, barrier_lower_residual(x, B, e));
        const bool pass = mn > threshold;
        tab.add_row({fmt_num(a), fmt_num(mn), pass ? "1" : "0"});
        if (pass) {
            selected = a;
            rep["min_residual"] = mn;
            break;
        }
    }
    rep["selected_a"] = selected;
    rep["search_failed"] = (selected < 0.0);
    emit(cm, rep, tab);
    if (selected < 0.0) {
        std::cerr << "barrier-verify: exponent ladder exhausted (threshold " << threshold << ")\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// slide
// ---------------------------------------------------------------------------

int run_slide(Config& c, const Common& cm) {
    GridSpec s = grid_from(c);
    const double p = c.get_double("p", 0.0);
    require(p >= 0.0, "p", "need p >= 0");
    const double K = c.get_double("K", default_paraboloid_amplitude(s.dim, p));
    require(K > 1.0, "K", "need K > 1");
    const double M = c.get_double("M", default_threshold_M(s.dim, p, K));
    require(M > 1.0, "M", "need M > 1");
    const double delta = c.get_double("delta", 0.5);
    const double mu = c.get_double("mu", 0.25);
    const double eps_deg = c.get_double("eps_deg", s.spacing());
    const std::string fixture = c.get_string("fixture", std::string("phi-bowl"));
    const double epsilon = c.get_double("epsilon", 0.05);
    const std::string u_in = c.get_string("u_in", std::string(""));
    c.finish();

    const ParaboloidParams P(K, DegeneracyExponent(p));
    const ThresholdConfig T(delta, mu, M, eps_deg);

    ScalarField u(s);
    if (!u_in.empty()) {
        u = field_io_read(u_in);
        s = u.spec;
    } else if (fixture == "phi-bowl") {
        const double lift = M + 1.0;
        u = ScalarField::sample(s, [&](const Vec& x) { return phi_eval(x, P) + lift; });
    } else if (fixture == "random-infconv") {
        Rng rng(cm.seed);
        ScalarField raw = random_field(s, rng, M + 0.5, M + 2.5);
        u = inf_convolution(raw, InfConvParams(epsilon));
    } else {
        throw ConfigError("key 'fixture': constraint violation, unknown fixture '" + fixture + "'");
    }
    ScalarField f(u.spec);  // zero forcing

    MeasureExperimentResult res = measure_estimate_experiment(u, f, T, P);
    const MeasureReport& r = res.report;

    json rep;
    rep["experiment"] = "slide";
    rep["fixture"] = u_in.empty() ? fixture : std::string("file");
    rep["degenerate"] = r.degenerate;
    rep["empirical_C"] = r.empirical_C;
    rep["vertex_total"] = r.vertex_total;
    rep["touch_at_or_above_M"] = r.touch_at_or_above_M;
    rep["case2_violations"] = r.case2_violations;
    rep["mu"] = r.mu;
    rep["M"] = r.M;
    rep["K"] = r.K;
    rep["eps_deg"] = r.eps_deg;
    json vc = json::object(), tc = json::object();
    for (const auto& [mask, cnt] : r.vertex_counts) vc[MeasureReport::mask_name(mask, u.spec.dim)] = cnt;
    for (const auto& [mask, cnt] : r.touch_counts) tc[MeasureReport::mask_name(mask, u.spec.dim)] = cnt;
    rep["vertex_counts"] = vc;
    rep["touch_counts"] = tc;

    CsvTable tab;
    tab.header = {"record", "mask", "offset", "touch_linear", "jac_det", "a_min_eig"};
    for (std::size_t i = 0; i < res.records.size(); ++i) {
        const TouchingRecord& rec = res.records[i];
        tab.add_row({std::to_string(i), MeasureReport::mask_name(rec.nondeg_mask, u.spec.dim),
                     fmt_num(rec.offset), std::to_string(u.spec.linear(rec.touch_index)),
                     rec.jac_det ? fmt_num(*rec.jac_det) : std::string(""),
                     rec.a_min_eig ? fmt_num(*rec.a_min_eig) : std::string("")});
    }
    fs::create_directories(cm.out);
    write_text_file((cm.out / "report.kv").string(), r.to_kv_text(u.spec.dim));
    emit(cm, rep, tab);
    return r.case2_violations == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// infconv
// ---------------------------------------------------------------------------

int run_infconv(Config& c, const Common& cm) {
    GridSpec s = grid_from(c);
    const double epsilon = c.get_double("epsilon", 0.1);
    require(epsilon > 0.0, "epsilon", "need epsilon > 0");
    const std::string u_in = c.get_string("u_in", std::string(""));
    c.finish();

    ScalarField u(s);
    if (!u_in.empty()) {
        u = field_io_read(u_in);
        s = u.spec;
    } else {
        Rng rng(cm.seed);
        u = random_field(s, rng, 0.0, 1.0);
    }
    ScalarField v = inf_convolution(u, InfConvParams(epsilon));
    field_io_write(v, (cm.out / "output.bin").string());

    double below = 0.0, max_second = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.values.size(); ++i) below = std::max(below, v.values[i] - u.values[i]);
    const double h = s.spacing();
    MultiIndex idx(std::size_t(s.dim), 1);
    if (s.points_per_axis >= 3) {
        for (;;) {
            MultiIndex j = idx;
            for (int d = 0; d < s.dim; ++d) {
                j[std::size_t(d)] = idx[std::size_t(d)] + 1;
                const double up = v.at(j);
                j[std::size_t(d)] = idx[std::size_t(d)] - 1;
                const double dn = v.at(j);
                j[std::size_t(d)] = idx[std::size_t(d)];
                max_second = std::max(max_second, up - 2.0 * v.at(idx) + dn);
            }
            int d = s.dim - 1;
            while (d >= 0 && ++idx[std::size_t(d)] == s.points_per_axis - 1) idx[std::size_t(d--)] = 1;
            if (d < 0) break;
        }
    }

    json rep;
    rep["experiment"] = "infconv";
    rep["epsilon"] = epsilon;
    rep["max_above_input"] = below;  // should be <= 0 (u_eps <= u)
    rep["max_second_difference"] = max_second;
    rep["semiconcavity_bound"] = 2.0 * h * h / epsilon;
    CsvTable tab;
    tab.header = {"epsilon", "max_above_input", "max_second_difference", "bound"};
    tab.add_row({fmt_num(epsilon), fmt_num(below), fmt_num(max_second), fmt_num(2.0 * h * h / epsilon)});
    emit(cm, rep, tab);
    return below <= 1e-12 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// harnack
// ---------------------------------------------------------------------------

int run_harnack(Config& c, const Common& cm) {
    GridSpec s = grid_from(c);
    const double p = c.get_double("p", 0.0);
    require(p >= 0.0, "p", "need p >= 0");
    const std::string u_in = c.get_string("u_in", std::string(""));
    const std::string f_in = c.get_string("f_in", std::string(""));
    const double base = c.get_double("boundary_base", 2.0);
    require(base > 1.0, "boundary_base", "need boundary_base > 1 so the data stay positive");
    const double tol = c.get_double("tol", 1e-8);
    const long max_steps = c.get_long("max_steps", 400000);
    c.finish();

    ScalarField u(s), f(s);
    if (!u_in.empty()) {
        u = field_io_read(u_in);
        f = f_in.empty() ? ScalarField(u.spec) : field_io_read(f_in);
    } else {
        // positive affine boundary data, zero forcing
        ScalarField bc = ScalarField::sample(s, [&](const Vec& x) { return base + 0.5 * x[0]; });
        f = ScalarField(s);
        auto [sol, r] = solve_dirichlet_warm(f, bc, p, SolveConfig(tol, max_steps));
        if (!r.converged) {
            std::cerr << "harnack: solver did not converge (residual " << r.final_residual << ")\n";
            return 2;
        }
        u = sol;
    }
    const HarnackResult hr = harnack_report(u, f, DegeneracyExponent(p));

    json rep;
    rep["experiment"] = "harnack";
    rep["degenerate"] = hr.degenerate;
    rep["ratio"] = hr.ratio;
    rep["sup"] = hr.sup;
    rep["inf"] = hr.inf;
    rep["f_norm"] = hr.f_norm;
    CsvTable tab;
    tab.header = {"ratio", "sup", "inf", "f_norm"};
    tab.add_row({fmt_num(hr.ratio), fmt_num(hr.sup), fmt_num(hr.inf), fmt_num(hr.f_norm)});
    emit(cm, rep, tab);
    return hr.degenerate ? 2 : 0;
}

// ---------------------------------------------------------------------------
// holder
// ---------------------------------------------------------------------------

int run_holder(Config& c, const Common& cm) {
    GridSpec s = grid_from(c, 129);
    const std::string model = c.get_string("model", std::string("abs_x1"));
    const std::string u_in = c.get_string("u_in", std::string(""));
    c.finish();

    ScalarField u(s);
    if (!u_in.empty()) {
        u = field_io_read(u_in);
    } else if (model == "abs_x1") {
        u = ScalarField::sample(s, [](const Vec& x) { return std::fabs(x[0]); });
    } else if (model == "sqrt_radial") {
        u = ScalarField::sample(s, [](const Vec& x) { return std::sqrt(euclidean_norm(x)); });
    } else if (model == "affine") {
        u = ScalarField::sample(s, [](const Vec& x) {
            double v = 0.0;
            for (std::size_t d = 0; d < x.size(); ++d) v += double(d + 1) * x[d];
            return v;
        });
    } else {
        throw ConfigError("key 'model': constraint violation, unknown model '" + model + "'");
    }

    const HolderResult hr = holder_report(u);
    json rep;
    rep["experiment"] = "holder";
    rep["model"] = u_in.empty() ? model : std::string("file");
    rep["defined"] = hr.defined;
    rep["alpha"] = hr.alpha;
    rep["fit_residual"] = hr.fit_residual;
    CsvTable tab;
    tab.header = {"radius", "oscillation"};
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < hr.radii.size(); ++k) {
        tab.add_row({fmt_num(hr.radii[k]), fmt_num(hr.oscillations[k])});
        if (hr.oscillations[k] > 0.0) {
            xs.push_back(std::log(hr.radii[k]));
            ys.push_back(std::log(hr.oscillations[k]));
        }
    }
    emit(cm, rep, tab, svg_line_plot("oscillation decay", "log r", "log osc", xs, ys));
    return 0;
}

// ---------------------------------------------------------------------------
// tail
// ---------------------------------------------------------------------------

int run_tail(Config& c, const Common& cm) {
    GridSpec s = grid_from(c, 65);
    const std::string u_in = c.get_string("u_in", std::string(""));
    const double beta = c.get_double("beta", 2.0);
    require(beta > 0.0, "beta", "need beta > 0");
    const double t_min = c.get_double("t_min", 1.0);
    const double t_max = c.get_double("t_max", 64.0);
    const long t_count = c.get_long("t_count", 13);
    require(t_min > 0.0 && t_max > t_min, "t_min", "need 0 < t_min < t_max");
    require(t_count >= 3, "t_count", "need t_count >= 3");
    c.finish();

    ScalarField u(s);
    if (!u_in.empty()) {
        u = field_io_read(u_in);
    } else {
        // power-law model: u = |x|_inf^{-beta}, capped at the center node
        u = ScalarField::sample(s, [&](const Vec& x) {
            double m = 0.0;
            for (double xi : x) m = std::max(m, std::fabs(xi));
            return m == 0.0 ? std::pow(s.spacing() / 2.0, -beta) : std::pow(m, -beta);
        });
    }
    Vec thresholds;
    for (long k = 0; k < t_count; ++k)
        thresholds.push_back(t_min * std::pow(t_max / t_min, double(k) / double(t_count - 1)));

    const TailCurve curve = tail_distribution(u, thresholds);
    const TailFit fit = fit_tail(curve);

    json rep;
    rep["experiment"] = "tail";
    rep["defined"] = fit.defined;
    rep["epsilon"] = fit.epsilon;
    rep["C"] = fit.C;
    rep["fit_residual"] = fit.fit_residual;
    CsvTable tab;
    tab.header = {"threshold", "fraction"};
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
        tab.add_row({fmt_num(curve.thresholds[k]), fmt_num(curve.fractions[k])});
        if (curve.fractions[k] > 0.0) {
            xs.push_back(std::log(curve.thresholds[k]));
            ys.push_back(std::log(curve.fractions[k]));
        }
    }
    emit(cm, rep, tab, svg_line_plot("tail distribution", "log t", "log fraction", xs, ys));
    return 0;
}

// ---------------------------------------------------------------------------
// cz-check
// ---------------------------------------------------------------------------

int run_cz_check(Config& c, const Common& cm) {
    const long dim = c.get_long("dim", 2);
    require(dim >= 1 && dim <= 4, "dim", "need 1 <= dim <= 4");
    const long levels = c.get_long("levels", 4);
    require(levels >= 2 && levels <= 8, "levels", "need 2 <= levels <= 8");
    const double delta = c.get_double("delta", 0.5);
    require(delta > 0.0 && delta < 1.0, "delta", "need delta in (0,1)");
    require(delta >= std::pow(0.5, double(dim)), "delta",
            "need delta >= 2^-dim for the randomized construction");
    const std::string mode = c.get_string("mode", std::string("random"));
    c.finish();

    const CzLattice lat{int(dim), int(levels)};
    const std::size_t N = lat.node_count();
    std::vector<std::uint8_t> E(N, 0), F(N, 0);
    Rng rng(cm.seed);

    if (mode == "random") {
        // F = union of random level-2 cubes; E fills one child of each,
        // so every dense cube has its predecessor inside F.
        const int lvl = 2;
        std::vector<int> idx(std::size_t(dim), 0);
        for (;;) {
            if (rng.uniform() < 0.4) {
                DyadicCube P{lvl, idx};
                lat.for_each_node(P, [&](std::size_t k) { F[k] = 1; });
                const auto kids = children(P);
                const DyadicCube& pick = kids[rng.next_u64() % kids.size()];
                lat.for_each_node(pick, [&](std::size_t k) { E[k] = 1; });
            }
            int d = int(dim) - 1;
            while (d >= 0 && ++idx[std::size_t(d)] == (1 << lvl)) idx[std::size_t(d--)] = 0;
            if (d < 0) break;
        }
    } else if (mode == "violation1") {
        for (std::size_t k = 0; k < N; ++k) E[k] = F[k] = 1;
    } else if (mode == "violation2") {
        // one fully dense deep cube whose predecessor leaks out of F
        DyadicCube c2{2, std::vector<int>(std::size_t(dim), 1)};
        lat.for_each_node(c2, [&](std::size_t k) { E[k] = F[k] = 1; });
    } else {
        throw ConfigError("key 'mode': constraint violation, unknown mode '" + mode + "'");
    }

    const CzVerdict v = cz_check(lat, E, F, delta);
    json rep;
    rep["experiment"] = "cz-check";
    rep["mode"] = mode;
    rep["hypotheses_hold"] = v.hypotheses_hold;
    rep["violated_hypothesis"] = v.violated_hypothesis;
    rep["conclusion_holds"] = v.conclusion_holds;
    rep["count_E"] = v.count_E;
    rep["count_F"] = v.count_F;
    rep["message"] = v.message;
    if (v.violated_hypothesis == 2) {
        rep["offending_level"] = v.offending_cube.level;
        rep["offending_index"] = v.offending_cube.index;
    }
    CsvTable tab;
    tab.header = {"count_E", "count_F", "delta", "hypotheses_hold", "conclusion_holds"};
    tab.add_row({std::to_string(v.count_E), std::to_string(v.count_F), fmt_num(delta),
                 v.hypotheses_hold ? "1" : "0", v.conclusion_holds ? "1" : "0"});
    emit(cm, rep, tab);
    return (v.hypotheses_hold && v.conclusion_holds) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pplab: degenerate pseudo-p-Laplacian experiment driver"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::uint64_t seed = 1;
    bool verbose = false;
    app.add_option("--config", config_path, "experiment config file (key = value)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for randomized fixtures");
    app.add_flag("--verbose", verbose, "chatty progress on stderr");
    for (const char* name : {"solve", "barrier-verify", "slide", "infconv", "harnack", "holder",
                             "tail", "cz-check"})
        app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);
    const std::string kind = app.get_subcommands().front()->get_name();

    try {
        Config cfg = config_path.empty() ? Config::parse_text("") : Config::parse_file(config_path);
        Common cm;
        cm.out = out_dir;
        cm.seed = seed;
        cm.verbose = verbose;
        fs::create_directories(cm.out);
        if (verbose) std::cerr << "pplab " << kind << " -> " << out_dir << "\n";

        if (kind == "solve") return run_solve(cfg, cm);
        if (kind == "barrier-verify") return run_barrier_verify(cfg, cm);
        if (kind == "slide") return run_slide(cfg, cm);
        if (kind == "infconv") return run_infconv(cfg, cm);
        if (kind == "harnack") return run_harnack(cfg, cm);
        if (kind == "holder") return run_holder(cfg, cm);
        if (kind == "tail") return run_tail(cfg, cm);
        if (kind == "cz-check") return run_cz_check(cfg, cm);
        std::cerr << "unknown subcommand " << kind << "\n";
        return 1;
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    } catch (const Divergence& ex) {
        std::cerr << "experiment failure: " << ex.what() << "\n";
        return 2;
    } catch (const SearchFailure& ex) {
        std::cerr << "experiment failure: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
