#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pplab/errors.hpp"

namespace pplab {

using Vec = std::vector<double>;

inline double euclidean_norm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline constexpr int kMaxDim = 16;

// Dense symmetric matrix, full row-major storage.  set() writes both
// mirror entries so the invariant holds by construction.
class SymMatrix {
public:
    explicit SymMatrix(int dim) : dim_(dim), a_(std::size_t(dim) * dim, 0.0) {
        if (dim < 1 || dim > kMaxDim) throw InvalidInput("SymMatrix: dim out of range");
    }

    static SymMatrix identity(int dim) {
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
        return m;
    }

    static SymMatrix diagonal(const Vec& d) {
        SymMatrix m(int(d.size()));
        for (int i = 0; i < m.dim(); ++i) m.set(i, i, d[std::size_t(i)]);
        return m;
    }

    int dim() const { return dim_; }

    double operator()(int i, int j) const { return a_[std::size_t(i) * dim_ + j]; }

    void set(int i, int j, double v) {
        a_[std::size_t(i) * dim_ + j] = v;
        a_[std::size_t(j) * dim_ + i] = v;
    }

    void add(int i, int j, double v) { set(i, j, (*this)(i, j) + v); }

    double max_abs() const {
        double m = 0.0;
        for (double x : a_) m = std::max(m, std::fabs(x));
        return m;
    }

    bool all_finite() const {
        for (double x : a_) {
            if (!std::isfinite(x)) return false;
        }
        return true;
    }

    SymMatrix& operator+=(const SymMatrix& o) {
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }

    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }

    friend SymMatrix operator*(double c, SymMatrix m) {
        for (double& x : m.a_) x *= c;
        return m;
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

private:
    int dim_;
    std::vector<double> a_;
};

// General dense square matrix; only what the Jacobian-determinant paths need.
class Matrix {
public:
    explicit Matrix(int dim) : dim_(dim), a_(std::size_t(dim) * dim, 0.0) {}

    static Matrix identity(int dim) {
        Matrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from(const SymMatrix& s) {
        Matrix m(s.dim());
        for (int i = 0; i < s.dim(); ++i)
            for (int j = 0; j < s.dim(); ++j) m(i, j) = s(i, j);
        return m;
    }

    int dim() const { return dim_; }
    double& operator()(int i, int j) { return a_[std::size_t(i) * dim_ + j]; }
    double operator()(int i, int j) const { return a_[std::size_t(i) * dim_ + j]; }

    Matrix operator*(const Matrix& o) const {
        Matrix r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int k = 0; k < dim_; ++k) {
                const double aik = (*this)(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < dim_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        Matrix r(dim_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
        return r;
    }

    friend Matrix operator*(double c, Matrix m) {
        for (double& x : m.a_) x *= c;
        return m;
    }

    // LU with partial pivoting.
    double determinant() const {
        Matrix lu = *this;
        const int n = dim_;
        double det = 1.0;
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::fabs(lu(r, col)) > std::fabs(lu(piv, col))) piv = r;
            if (lu(piv, col) == 0.0) return 0.0;
            if (piv != col) {
                for (int j = 0; j < n; ++j) std::swap(lu(piv, j), lu(col, j));
                det = -det;
            }
            det *= lu(col, col);
            for (int r = col + 1; r < n; ++r) {
                const double f = lu(r, col) / lu(col, col);
                for (int j = col; j < n; ++j) lu(r, j) -= f * lu(col, j);
            }
        }
        return det;
    }

    Matrix inverse() const {
        const int n = dim_;
        Matrix aug = *this;
        Matrix inv = Matrix::identity(n);
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::fabs(aug(r, col)) > std::fabs(aug(piv, col))) piv = r;
            if (aug(piv, col) == 0.0) throw Singularity("Matrix::inverse: singular matrix");
            if (piv != col)
                for (int j = 0; j < n; ++j) {
                    std::swap(aug(piv, j), aug(col, j));
                    std::swap(inv(piv, j), inv(col, j));
                }
            const double d = aug(col, col);
            for (int j = 0; j < n; ++j) {
                aug(col, j) /= d;
                inv(col, j) /= d;
            }
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                const double f = aug(r, col);
                if (f == 0.0) continue;
                for (int j = 0; j < n; ++j) {
                    aug(r, j) -= f * aug(col, j);
                    inv(r, j) -= f * inv(col, j);
                }
            }
        }
        return inv;
    }

private:
    int dim_;
    std::vector<double> a_;
};

struct EigenSystem {
    Vec values;      // ascending
    Matrix vectors;  // column k is the eigenvector of values[k]
};

// Cyclic Jacobi rotations.  Small dense matrices only; convergence when the
// off-diagonal Frobenius norm drops below 1e-13 * scale.
inline EigenSystem jacobi_eigensystem(const SymMatrix& m) {
    if (!m.all_finite()) throw InvalidInput("jacobi_eigensystem: non-finite entries");
    const int n = m.dim();
    Matrix a = Matrix::from(m);
    Matrix v = Matrix::identity(n);

    const double scale = std::max(1.0, m.max_abs());
    const double tol = 1e-13 * scale;

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    EigenSystem es{Vec(std::size_t(n)), Matrix(n)};
    std::vector<int> order(std::size_t(n), 0);
    for (int i = 0; i < n; ++i) order[std::size_t(i)] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });
    es.vectors = Matrix(n);
    for (int k = 0; k < n; ++k) {
        es.values[std::size_t(k)] = a(order[std::size_t(k)], order[std::size_t(k)]);
        for (int r = 0; r < n; ++r) es.vectors(r, k) = v(r, order[std::size_t(k)]);
    }
    return es;
}

inline Vec sym_eigenvalues(const SymMatrix& m) { return jacobi_eigensystem(m).values; }

}  // namespace pplab
