#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pplab/field_io.hpp"
#include "pplab/profiles.hpp"
#include "test_util.hpp"

using namespace pplab;
namespace fs = std::filesystem;

TEST_CASE("grid spec invariants") {
    CHECK_THROWS_AS(GridSpec(5, Vec(5, 0.0), 1.0, 9), InvalidInput);
    CHECK_THROWS_AS(GridSpec(2, Vec(2, 0.0), 1.0, 8), InvalidInput);   // even
    CHECK_THROWS_AS(GridSpec(2, Vec(2, 0.0), 1.0, 7), InvalidInput);   // too small
    CHECK_THROWS_AS(GridSpec(2, Vec(2, 0.0), -1.0, 9), InvalidInput);  // bad width

    GridSpec s = GridSpec::unit_cube(2, 9);
    CHECK(s.spacing() == doctest::Approx(0.25));
    CHECK(s.node_count() == 81);
    // odd points: the center is a node
    MultiIndex mid = {4, 4};
    Vec c = s.point(mid);
    CHECK(c[0] == doctest::Approx(0.0));
    CHECK(c[1] == doctest::Approx(0.0));
    // linear/unravel round trip
    for (std::size_t k = 0; k < s.node_count(); k += 7) CHECK(s.linear(s.unravel(k)) == k);
}

TEST_CASE("fd exactness on affine and bilinear fields") {
    GridSpec s = GridSpec::unit_cube(2, 17);
    ScalarField aff = ScalarField::sample(s, [](const Vec& x) { return 3.0 + 2.0 * x[0] - x[1]; });
    MultiIndex idx = {8, 8};
    Vec g = fd_gradient(aff, idx);
    CHECK(g[0] == doctest::Approx(2.0));
    CHECK(g[1] == doctest::Approx(-1.0));
    SymMatrix h = fd_hessian(aff, idx);
    CHECK(h.max_abs() < 1e-12);

    ScalarField bil = ScalarField::sample(s, [](const Vec& x) { return x[0] * x[1]; });
    h = fd_hessian(bil, idx);
    CHECK(h(0, 1) == doctest::Approx(1.0));
    CHECK(h(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("fd operators are linear and refuse boundary nodes") {
    GridSpec s = GridSpec::unit_cube(2, 9);
    TestRng rng(41);
    ScalarField u(s), v(s);
    for (std::size_t k = 0; k < u.values.size(); ++k) {
        u.values[k] = rng.uniform(-1, 1);
        v.values[k] = rng.uniform(-1, 1);
    }
    ScalarField w(s);
    for (std::size_t k = 0; k < u.values.size(); ++k) w.values[k] = 2.0 * u.values[k] - 3.0 * v.values[k];
    MultiIndex idx = {4, 3};
    const Vec gu = fd_gradient(u, idx), gv = fd_gradient(v, idx), gw = fd_gradient(w, idx);
    for (std::size_t d = 0; d < 2; ++d)
        CHECK(gw[d] == doctest::Approx(2.0 * gu[d] - 3.0 * gv[d]).epsilon(1e-12));

    MultiIndex edge = {0, 4};
    CHECK_THROWS_AS(fd_gradient(u, edge), BoundaryProximity);
}

TEST_CASE("fd derivatives of sampled phi converge at order >= 1.8") {
    ParaboloidParams P(2.0, DegeneracyExponent(1.0));
    Vec probe = {0.37, -0.61};
    double errs[2];
    int k = 0;
    for (int ppa : {65, 129}) {
        GridSpec s(2, probe, 0.25, ppa);  // grid centered at the probe point
        ScalarField u = ScalarField::sample(s, [&](const Vec& x) { return phi_eval(x, P); });
        MultiIndex mid = {(ppa - 1) / 2, (ppa - 1) / 2};
        const Vec g = fd_gradient(u, mid);
        const Vec gx = phi_grad(probe, P);
        double e = 0.0;
        for (std::size_t d = 0; d < 2; ++d) e = std::max(e, std::fabs(g[d] - gx[d]));
        const SymMatrix h = fd_hessian(u, mid);
        const SymMatrix hx = phi_hess(probe, P);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) e = std::max(e, std::fabs(h(i, j) - hx(i, j)));
        errs[k++] = e;
    }
    CHECK(std::log2(errs[0] / errs[1]) >= 1.8);
}

TEST_CASE("slices: parabola, partition count, phi restriction") {
    GridSpec s = GridSpec::unit_cube(3, 9);
    ScalarField u = ScalarField::sample(s, [](const Vec& x) {
        return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    });

    SliceSpec sl;
    sl.frozen_axes = {1, 2};
    sl.frozen_values = {0.25, -0.5};
    ScalarField line = restrict_slice(u, sl);
    CHECK(line.spec.dim == 1);
    for (std::size_t k = 0; k < line.values.size(); ++k) {
        const double x0 = line.spec.coord(0, int(k));
        CHECK(line.values[k] == doctest::Approx(x0 * x0 + 0.0625 + 0.25));
    }

    // summed slice counts = full count
    std::size_t total = 0;
    for (int i = 0; i < s.points_per_axis; ++i) {
        SliceSpec one;
        one.frozen_axes = {0};
        one.frozen_values = {s.coord(0, i)};
        total += restrict_slice(u, one).values.size();
    }
    CHECK(total == s.node_count());

    // slice of sampled phi equals the closed-form restriction
    ParaboloidParams P(2.0, DegeneracyExponent(1.0));
    ScalarField up = ScalarField::sample(s, [&](const Vec& x) { return phi_eval(x, P); });
    SliceSpec sp;
    sp.frozen_axes = {2};
    sp.frozen_values = {0.25};
    ScalarField up2 = restrict_slice(up, sp);
    MultiIndex idx(2, 0);
    std::size_t k = 0;
    do {
        Vec x = up2.spec.point(idx);
        x.push_back(0.25);
        CHECK(up2.values[k++] == doctest::Approx(phi_eval(x, P)).epsilon(1e-12));
    } while (up2.spec.next(idx));

    SliceSpec off;
    off.frozen_axes = {0};
    off.frozen_values = {0.3};  // not a grid line at h = 0.25
    CHECK_THROWS_AS(restrict_slice(u, off), InvalidSlice);
}

TEST_CASE("field io: round trip, corruption, byte length") {
    const fs::path dir = fs::temp_directory_path() / "pplab_fields_test";
    fs::create_directories(dir);
    const std::string path = (dir / "f.bin").string();

    GridSpec s(3, {0.5, -1.0, 0.0}, 2.0, 11);
    TestRng rng(42);
    ScalarField u(s);
    for (double& v : u.values) v = rng.uniform(-10, 10);

    field_io_write(u, path);
    ScalarField r = field_io_read(path);
    CHECK(r.spec.same_layout(s));
    for (std::size_t k = 0; k < u.values.size(); ++k) CHECK(r.values[k] == u.values[k]);

    CHECK(fs::file_size(path) == 16 + 8 * 3 + 8 * u.values.size());

    // corrupt the magic
    {
        std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
        f.put('X');
    }
    CHECK_THROWS_AS(field_io_read(path), IoError);

    // rewrite, then truncate the payload
    field_io_write(u, path);
    fs::resize_file(path, fs::file_size(path) - 9);
    CHECK_THROWS_AS(field_io_read(path), IoError);

    CHECK_THROWS_AS(field_io_read((dir / "missing.bin").string()), IoError);
    fs::remove_all(dir);
}
