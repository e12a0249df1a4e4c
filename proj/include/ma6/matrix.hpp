/// @file matrix.hpp
/// Small dense matrices over any of the scalar modes. Sizes here are tiny
/// (6x6 endomorphisms, 15x6 annihilator systems, m x m ODE states), so
/// everything is plain Gaussian elimination with exact division when the
/// scalar is a field with exact arithmetic.

#pragma once

#include <algorithm>
#include <array>
#include <utility>
#include <vector>

#include "ma6/scalars.hpp"

namespace ma6 {

template <typename S>
using Vec6 = std::array<S, 6>;

inline int sign_of(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }
inline int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

template <typename S>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols), ScalarTraits<S>::zero()) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = ScalarTraits<S>::one();
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    S& operator()(int i, int j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
    const S& operator()(int i, int j) const { return a_[static_cast<size_t>(i * cols_ + j)]; }

    friend Matrix operator+(const Matrix& x, const Matrix& y) {
        Matrix r(x.rows_, x.cols_);
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = x.a_[i] + y.a_[i];
        return r;
    }
    friend Matrix operator-(const Matrix& x, const Matrix& y) {
        Matrix r(x.rows_, x.cols_);
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = x.a_[i] - y.a_[i];
        return r;
    }
    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        if (x.cols_ != y.rows_) throw Error("matrix product dimension mismatch");
        Matrix r(x.rows_, y.cols_);
        for (int i = 0; i < x.rows_; ++i)
            for (int k = 0; k < x.cols_; ++k) {
                const S& v = x(i, k);
                if (ScalarTraits<S>::is_zero(v)) continue;
                for (int j = 0; j < y.cols_; ++j) r(i, j) += v * y(k, j);
            }
        return r;
    }
    friend Matrix operator*(const S& c, const Matrix& x) {
        Matrix r(x.rows_, x.cols_);
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = c * x.a_[i];
        return r;
    }
    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }

    Matrix transposed() const {
        Matrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    S trace() const {
        S t = ScalarTraits<S>::zero();
        for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    bool is_symmetric(double eps = 0.0) const {
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if (!ScalarTraits<S>::is_zero((*this)(i, j) - (*this)(j, i), eps)) return false;
        return true;
    }

    bool is_zero(double eps = 0.0) const {
        for (const auto& v : a_)
            if (!ScalarTraits<S>::is_zero(v, eps)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, ScalarTraits<S>::abs_approx(v));
        return m;
    }

    std::vector<S> apply(const std::vector<S>& x) const {
        std::vector<S> y(static_cast<size_t>(rows_), ScalarTraits<S>::zero());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) y[static_cast<size_t>(i)] += (*this)(i, j) * x[static_cast<size_t>(j)];
        return y;
    }

    Vec6<S> apply6(const Vec6<S>& x) const {
        Vec6<S> y;
        for (int i = 0; i < 6; ++i) {
            y[static_cast<size_t>(i)] = ScalarTraits<S>::zero();
            for (int j = 0; j < 6; ++j) y[static_cast<size_t>(i)] += (*this)(i, j) * x[static_cast<size_t>(j)];
        }
        return y;
    }

    template <typename T, typename F>
    Matrix<T> map(F&& f) const {
        Matrix<T> r(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
        return r;
    }

private:
    int rows_, cols_;
    std::vector<S> a_;
};

namespace detail {

/// Pivot choice: eligibility is an (exact or eps) nonzero test, ranking is
/// by approximate magnitude. Returns -1 if no eligible entry.
template <typename S, typename Get>
int pick_pivot(int lo, int hi, double threshold, Get&& get) {
    int piv = -1;
    double best = -1.0;
    for (int i = lo; i < hi; ++i) {
        const S& v = get(i);
        if (ScalarTraits<S>::is_zero(v, threshold)) continue;
        double a = ScalarTraits<S>::abs_approx(v);
        if (a > best) { best = a; piv = i; }
    }
    return piv;
}

template <typename S>
double zero_threshold(const Matrix<S>& m, double eps) {
    return ScalarTraits<S>::exact ? 0.0 : eps * std::max(1.0, m.max_abs());
}

}  // namespace detail

template <typename S>
S det(Matrix<S> m, double eps = 1e-12) {
    if (m.rows() != m.cols()) throw Error("determinant of non-square matrix");
    const int n = m.rows();
    const double threshold = detail::zero_threshold(m, eps);
    S d = ScalarTraits<S>::one();
    for (int k = 0; k < n; ++k) {
        int piv = detail::pick_pivot<S>(k, n, threshold, [&](int i) -> const S& { return m(i, k); });
        if (piv < 0) return ScalarTraits<S>::zero();
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            d = -d;
        }
        d *= m(k, k);
        for (int i = k + 1; i < n; ++i) {
            if (ScalarTraits<S>::is_zero(m(i, k))) continue;
            S f = m(i, k) / m(k, k);
            for (int j = k; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return d;
}

template <typename S>
Matrix<S> inverse(Matrix<S> m, double eps = 1e-12) {
    if (m.rows() != m.cols()) throw Error("inverse of non-square matrix");
    const int n = m.rows();
    const double threshold = detail::zero_threshold(m, eps);
    Matrix<S> inv = Matrix<S>::identity(n);
    for (int k = 0; k < n; ++k) {
        int piv = detail::pick_pivot<S>(k, n, threshold, [&](int i) -> const S& { return m(i, k); });
        if (piv < 0) throw Error("singular matrix");
        if (piv != k)
            for (int j = 0; j < n; ++j) {
                std::swap(m(k, j), m(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        S d = m(k, k);
        for (int j = 0; j < n; ++j) {
            m(k, j) = m(k, j) / d;
            inv(k, j) = inv(k, j) / d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            S f = m(i, k);
            if (ScalarTraits<S>::is_zero(f)) continue;
            for (int j = 0; j < n; ++j) {
                m(i, j) -= f * m(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

/// Row echelon rank; `eps` is the float-mode pivot threshold relative to the
/// largest entry, ignored in exact modes.
template <typename S>
int rank(Matrix<S> m, double eps = 1e-10) {
    const int rows = m.rows(), cols = m.cols();
    const double threshold = detail::zero_threshold(m, eps);
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = detail::pick_pivot<S>(r, rows, threshold, [&](int i) -> const S& { return m(i, c); });
        if (piv < 0) continue;
        for (int j = 0; j < cols; ++j) std::swap(m(r, j), m(piv, j));
        for (int i = r + 1; i < rows; ++i) {
            if (ScalarTraits<S>::is_zero(m(i, c))) continue;
            S f = m(i, c) / m(r, c);
            for (int j = c; j < cols; ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

/// Basis of the right nullspace { x : M x = 0 }.
template <typename S>
std::vector<std::vector<S>> nullspace(Matrix<S> m, double eps = 1e-10) {
    const int rows = m.rows(), cols = m.cols();
    const double threshold = detail::zero_threshold(m, eps);
    std::vector<int> col_pivot_row(static_cast<size_t>(cols), -1);
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = detail::pick_pivot<S>(r, rows, threshold, [&](int i) -> const S& { return m(i, c); });
        if (piv < 0) continue;
        for (int j = 0; j < cols; ++j) std::swap(m(r, j), m(piv, j));
        S d = m(r, c);
        for (int j = c; j < cols; ++j) m(r, j) = m(r, j) / d;
        for (int i = 0; i < rows; ++i) {
            if (i == r || ScalarTraits<S>::is_zero(m(i, c))) continue;
            S f = m(i, c);
            for (int j = c; j < cols; ++j) m(i, j) -= f * m(r, j);
        }
        col_pivot_row[static_cast<size_t>(c)] = r;
        ++r;
    }
    std::vector<std::vector<S>> basis;
    for (int c = 0; c < cols; ++c) {
        if (col_pivot_row[static_cast<size_t>(c)] >= 0) continue;
        std::vector<S> x(static_cast<size_t>(cols), ScalarTraits<S>::zero());
        x[static_cast<size_t>(c)] = ScalarTraits<S>::one();
        for (int pc = 0; pc < cols; ++pc) {
            int prow = col_pivot_row[static_cast<size_t>(pc)];
            if (prow >= 0) x[static_cast<size_t>(pc)] = -m(prow, c);
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

struct Signature {
    int pos = 0, neg = 0, zero = 0;
    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Sylvester inertia of a symmetric matrix by congruence reduction, exact in
/// exact mode. A zero diagonal with some nonzero off-diagonal entry a_ij is
/// handled by the congruence X_i <- X_i + X_j, which makes the diagonal
/// entry 2*a_ij (the hyperbolic block then contributes (+1,-1)).
template <typename S>
Signature signature(Matrix<S> a, double eps = 1e-10) {
    if (a.rows() != a.cols()) throw Error("signature: matrix not square");
    const double threshold = detail::zero_threshold(a, eps);
    if (!a.is_symmetric(threshold)) throw Error("signature: matrix not symmetric");
    const int n = a.rows();
    std::vector<bool> done(static_cast<size_t>(n), false);
    Signature sig;
    for (;;) {
        int k = -1;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            if (done[static_cast<size_t>(i)] || ScalarTraits<S>::is_zero(a(i, i), threshold)) continue;
            double v = ScalarTraits<S>::abs_approx(a(i, i));
            if (v > best) { best = v; k = i; }
        }
        if (k < 0) {
            int bi = -1, bj = -1;
            best = -1.0;
            for (int i = 0; i < n; ++i) {
                if (done[static_cast<size_t>(i)]) continue;
                for (int j = i + 1; j < n; ++j) {
                    if (done[static_cast<size_t>(j)] || ScalarTraits<S>::is_zero(a(i, j), threshold)) continue;
                    double v = ScalarTraits<S>::abs_approx(a(i, j));
                    if (v > best) { best = v; bi = i; bj = j; }
                }
            }
            if (bi < 0) break;  // remaining block is zero
            for (int c = 0; c < n; ++c) a(bi, c) += a(bj, c);
            for (int r = 0; r < n; ++r) a(r, bi) += a(r, bj);
            k = bi;
        }
        S d = a(k, k);
        if (sign_of(d) > 0)
            ++sig.pos;
        else
            ++sig.neg;
        for (int i = 0; i < n; ++i) {
            if (i == k || done[static_cast<size_t>(i)]) continue;
            if (ScalarTraits<S>::is_zero(a(i, k))) continue;
            S f = a(i, k) / d;
            for (int j = 0; j < n; ++j) {
                if (done[static_cast<size_t>(j)]) continue;
                a(i, j) -= f * a(k, j);
            }
        }
        for (int j = 0; j < n; ++j) {
            a(k, j) = ScalarTraits<S>::zero();
            a(j, k) = ScalarTraits<S>::zero();
        }
        done[static_cast<size_t>(k)] = true;
    }
    sig.zero = n - sig.pos - sig.neg;
    return sig;
}

template <typename S>
double frobenius(const Matrix<S>& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            double v = ScalarTraits<S>::abs_approx(m(i, j));
            s += v * v;
        }
    return std::sqrt(s);
}

}  // namespace ma6
