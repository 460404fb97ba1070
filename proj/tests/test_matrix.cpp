#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pplab/matrix.hpp"
#include "test_util.hpp"

using namespace pplab;

namespace {

// closed-form 2x2 symmetric eigenvalues
std::pair<double, double> eig2(double a, double b, double c) {
    const double t = (a + c) / 2.0;
    const double d = std::sqrt((a - c) * (a - c) / 4.0 + b * b);
    return {t - d, t + d};
}

}  // namespace

TEST_CASE("eigenvalues: identity, swap, diagonal") {
    SymMatrix id = SymMatrix::identity(2);
    auto e = sym_eigenvalues(id);
    CHECK(e[0] == doctest::Approx(1.0));
    CHECK(e[1] == doctest::Approx(1.0));

    SymMatrix sw(2);
    sw.set(0, 1, 1.0);
    e = sym_eigenvalues(sw);
    CHECK(e[0] == doctest::Approx(-1.0));
    CHECK(e[1] == doctest::Approx(1.0));

    e = sym_eigenvalues(SymMatrix::diagonal({2.0, -3.0}));
    CHECK(e[0] == doctest::Approx(-3.0));
    CHECK(e[1] == doctest::Approx(2.0));
}

TEST_CASE("eigenvalues: 2x2 closed form oracle") {
    TestRng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const double a = rng.uniform(-5, 5), b = rng.uniform(-5, 5), c = rng.uniform(-5, 5);
        SymMatrix m(2);
        m.set(0, 0, a);
        m.set(0, 1, b);
        m.set(1, 1, c);
        const auto [lo, hi] = eig2(a, b, c);
        const auto e = sym_eigenvalues(m);
        CHECK(e[0] == doctest::Approx(lo).epsilon(1e-10));
        CHECK(e[1] == doctest::Approx(hi).epsilon(1e-10));
    }
}

TEST_CASE("eigenvalues: 3x3 via characteristic polynomial residual") {
    TestRng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        SymMatrix m = random_sym(rng, 3, 4.0);
        const auto e = sym_eigenvalues(m);
        CHECK(e[0] <= e[1]);
        CHECK(e[1] <= e[2]);
        // det(M - e I) should vanish for each eigenvalue
        for (double ev : e) {
            Matrix shifted = Matrix::from(m);
            for (int i = 0; i < 3; ++i) shifted(i, i) -= ev;
            CHECK(std::fabs(shifted.determinant()) < 1e-8);
        }
        // trace and determinant invariants
        CHECK(e[0] + e[1] + e[2] == doctest::Approx(m.trace()).epsilon(1e-10));
        CHECK(e[0] * e[1] * e[2] == doctest::Approx(Matrix::from(m).determinant()).epsilon(1e-8));
    }
}

TEST_CASE("eigensystem reconstructs the matrix") {
    TestRng rng(13);
    for (int n : {2, 3, 5, 8}) {
        SymMatrix m = random_sym(rng, n, 3.0);
        EigenSystem es = jacobi_eigensystem(m);
        const double tol = 1e-10 * (1.0 + m.max_abs());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += es.vectors(i, k) * es.values[std::size_t(k)] * es.vectors(j, k);
                CHECK(std::fabs(s - m(i, j)) < tol);
            }
    }
}

TEST_CASE("non-finite entries rejected") {
    SymMatrix m(2);
    m.set(0, 1, std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS_AS(sym_eigenvalues(m), InvalidInput);
}

TEST_CASE("SymMatrix symmetry by construction; dim bounds") {
    SymMatrix m(3);
    m.set(0, 2, 4.5);
    CHECK(m(2, 0) == 4.5);
    CHECK_THROWS_AS(SymMatrix(0), InvalidInput);
    CHECK_THROWS_AS(SymMatrix(17), InvalidInput);
}

TEST_CASE("Matrix determinant and inverse") {
    TestRng rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + int(rng.next_u64() % 3);
        Matrix a(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-2, 2);
        if (std::fabs(a.determinant()) < 1e-3) continue;
        Matrix prod = a * a.inverse();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::fabs(prod(i, j) - (i == j ? 1.0 : 0.0)) < 1e-9);
    }
    // triangular determinant
    Matrix t(3);
    t(0, 0) = 2.0;
    t(0, 1) = 5.0;
    t(1, 1) = -1.0;
    t(2, 2) = 3.0;
    CHECK(t.determinant() == doctest::Approx(-6.0));
}
