/// @file form.hpp
/// Exact multilinear algebra of exterior forms on a fixed 6-dimensional
/// real vector space with basis (e1,e2,e3,f1,f2,f3). Index convention used
/// everywhere: 1..3 are the e (base) directions, 4..6 the f (fiber)
/// directions. A basis monomial e_{i1}* ^ ... ^ e_{ik}* with strictly
/// increasing indices is stored as a 6-bit mask, so canonical sorted order
/// and absence of repeated indices are structural.

#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ma6/matrix.hpp"
#include "ma6/scalars.hpp"

namespace ma6 {

using Mask = std::uint8_t;

namespace mask {

inline int degree(Mask m) { return std::popcount(static_cast<unsigned>(m)); }

inline Mask bit(int index1) { return static_cast<Mask>(1u << (index1 - 1)); }

/// Parity sign of concatenating two sorted disjoint index tuples a,b and
/// resorting: (-1)^{# of pairs (x in a, y in b) with x > y}.
inline int merge_sign(Mask a, Mask b) {
    int inversions = 0;
    for (int i = 0; i < 6; ++i)
        if (b & (1u << i)) inversions += std::popcount(static_cast<unsigned>(a) >> (i + 1));
    return (inversions & 1) ? -1 : 1;
}

/// Sign of removing index `index1` from sorted tuple m: (-1)^{position}.
inline int removal_sign(Mask m, int index1) {
    int below = std::popcount(static_cast<unsigned>(m & (bit(index1) - 1)));
    return (below & 1) ? -1 : 1;
}

inline std::vector<int> indices(Mask m) {
    std::vector<int> v;
    for (int i = 1; i <= 6; ++i)
        if (m & bit(i)) v.push_back(i);
    return v;
}

inline Mask from_indices(const std::vector<int>& idx) {
    Mask m = 0;
    for (int i : idx) {
        if (i < 1 || i > 6) throw Error("form index out of range 1..6");
        if (m & bit(i)) throw Error("repeated index in form term");
        m = static_cast<Mask>(m | bit(i));
    }
    return m;
}

constexpr Mask full = 0x3f;

}  // namespace mask

/// Degree-k exterior form with sparse coefficients over sorted basis
/// monomials. Immutable in spirit: all operations return new values.
template <typename S>
class Form {
public:
    explicit Form(int degree = 0) : degree_(degree) {
        if (degree < 0 || degree > 6) throw Error("form degree must be in 0..6");
    }

    static Form basis_covector(int index1) {
        Form f(1);
        f.terms_[mask::bit(index1)] = ScalarTraits<S>::one();
        return f;
    }

    /// Monomial c * e_{i1}* ^ ... with 1-based, strictly increasing indices.
    static Form monomial(std::vector<int> idx, S c) {
        for (size_t i = 1; i < idx.size(); ++i)
            if (idx[i] <= idx[i - 1]) throw Error("monomial indices must be strictly increasing");
        Form f(static_cast<int>(idx.size()));
        if (!ScalarTraits<S>::is_zero(c)) f.terms_[mask::from_indices(idx)] = std::move(c);
        return f;
    }

    static Form scalar(S c) {
        Form f(0);
        if (!ScalarTraits<S>::is_zero(c)) f.terms_[0] = std::move(c);
        return f;
    }

    int degree() const { return degree_; }
    const std::map<Mask, S>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    S coeff(Mask m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? ScalarTraits<S>::zero() : it->second;
    }

    void add_term(Mask m, const S& c) {
        if (mask::degree(m) != degree_) throw Error("term degree mismatch");
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!ScalarTraits<S>::is_zero(c)) terms_[m] = c;
        } else {
            it->second += c;
            if (ScalarTraits<S>::is_zero(it->second)) terms_.erase(it);
        }
    }

    friend Form operator+(const Form& a, const Form& b) {
        if (a.degree_ != b.degree_) throw Error("cannot add forms of different degree");
        Form r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend Form operator-(const Form& a, const Form& b) {
        if (a.degree_ != b.degree_) throw Error("cannot subtract forms of different degree");
        Form r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }
    Form operator-() const {
        Form r(degree_);
        for (const auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }
    friend Form operator*(const S& c, const Form& a) {
        Form r(a.degree_);
        if (ScalarTraits<S>::is_zero(c)) return r;
        for (const auto& [m, v] : a.terms_) {
            S w = c * v;
            if (!ScalarTraits<S>::is_zero(w)) r.terms_[m] = std::move(w);
        }
        return r;
    }
    friend Form operator/(const Form& a, const S& c) {
        Form r(a.degree_);
        for (const auto& [m, v] : a.terms_) r.terms_[m] = v / c;
        return r;
    }
    friend bool operator==(const Form& a, const Form& b) {
        return a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }

    double max_abs_coeff() const {
        double r = 0.0;
        for (const auto& [m, c] : terms_) r = std::max(r, ScalarTraits<S>::abs_approx(c));
        return r;
    }

    bool is_zero_within(double eps) const { return max_abs_coeff() <= eps; }

    Form conjugated() const {
        Form r(degree_);
        for (const auto& [m, c] : terms_) r.terms_[m] = ScalarTraits<S>::conj(c);
        return r;
    }

    template <typename T, typename F>
    Form<T> map(F&& f) const {
        Form<T> r(degree_);
        for (const auto& [m, c] : terms_) {
            T v = f(c);
            if (!ScalarTraits<T>::is_zero(v)) r.set_term_unchecked(m, std::move(v));
        }
        return r;
    }

    // escape hatch for map(); callers must preserve the degree invariant
    void set_term_unchecked(Mask m, S c) { terms_[m] = std::move(c); }

private:
    int degree_;
    std::map<Mask, S> terms_;
};

template <typename S>
Form<S> wedge(const Form<S>& a, const Form<S>& b) {
    if (a.degree() + b.degree() > 6)
        throw Error("wedge degree overflow: " + std::to_string(a.degree()) + " + " + std::to_string(b.degree()) + " > 6");
    Form<S> r(a.degree() + b.degree());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            if (ma & mb) continue;  // repeated index
            S c = ca * cb;
            if (mask::merge_sign(ma, mb) < 0) c = -c;
            r.add_term(static_cast<Mask>(ma | mb), c);
        }
    return r;
}

/// Contraction with the j-th basis vector (1-based index into e1..f3).
template <typename S>
Form<S> interior_basis(int index1, const Form<S>& a) {
    if (a.degree() == 0) throw Error("cannot contract scalar");
    Form<S> r(a.degree() - 1);
    Mask b = mask::bit(index1);
    for (const auto& [m, c] : a.terms()) {
        if (!(m & b)) continue;
        S v = c;
        if (mask::removal_sign(m, index1) < 0) v = -v;
        r.add_term(static_cast<Mask>(m & ~b), v);
    }
    return r;
}

template <typename S>
Form<S> interior(const Vec6<S>& x, const Form<S>& a) {
    if (a.degree() == 0) throw Error("cannot contract scalar");
    Form<S> r(a.degree() - 1);
    for (int j = 1; j <= 6; ++j) {
        const S& xj = x[static_cast<size_t>(j - 1)];
        if (ScalarTraits<S>::is_zero(xj)) continue;
        Form<S> part = interior_basis(j, a);
        for (const auto& [m, c] : part.terms()) r.add_term(m, xj * c);
    }
    return r;
}

/// Pullback M*a with (M*a)(X1,..,Xk) = a(M X1,..,M Xk); on basis covectors
/// M*(b_i*) = sum_j M(i,j) b_j*.
template <typename S>
Form<S> pullback(const Matrix<S>& m, const Form<S>& a) {
    if (m.rows() != 6 || m.cols() != 6) throw Error("pullback expects a 6x6 matrix");
    Form<S> r(a.degree());
    for (const auto& [mk, c] : a.terms()) {
        Form<S> prod = Form<S>::scalar(c);
        for (int i : mask::indices(mk)) {
            Form<S> row(1);
            for (int j = 1; j <= 6; ++j) {
                const S& v = m(i - 1, j - 1);
                if (!ScalarTraits<S>::is_zero(v)) row.add_term(mask::bit(j), v);
            }
            prod = wedge(prod, row);
        }
        r = r + prod;
    }
    return r;
}

/// Fully antisymmetric multilinear evaluation a(X1,...,Xk).
template <typename S>
S evaluate(const Form<S>& a, std::span<const Vec6<S>> xs) {
    if (static_cast<int>(xs.size()) != a.degree())
        throw Error("evaluate arity mismatch: degree " + std::to_string(a.degree()) + ", got " + std::to_string(xs.size()) + " vectors");
    const int k = a.degree();
    if (k == 0) return a.coeff(0);
    S total = ScalarTraits<S>::zero();
    for (const auto& [m, c] : a.terms()) {
        Matrix<S> sub(k, k);
        auto idx = mask::indices(m);
        for (int r = 0; r < k; ++r)
            for (int j = 0; j < k; ++j) sub(r, j) = xs[static_cast<size_t>(j)][static_cast<size_t>(idx[static_cast<size_t>(r)] - 1)];
        total += c * det(sub);
    }
    return total;
}

template <typename S>
S evaluate(const Form<S>& a, std::initializer_list<Vec6<S>> xs) {
    std::vector<Vec6<S>> v(xs);
    return evaluate(a, std::span<const Vec6<S>>(v));
}

inline Form<double> to_float(const Form<Rational>& a) {
    return a.template map<double>([](const Rational& c) { return to_double(c); });
}

inline Form<std::complex<double>> to_complex_form(const Form<Gaussian>& a) {
    return a.template map<std::complex<double>>([](const Gaussian& c) { return to_complex(c); });
}

inline Form<std::complex<double>> to_complex_form(const Form<double>& a) {
    return a.template map<std::complex<double>>([](double c) { return std::complex<double>(c, 0.0); });
}

inline Form<double> real_part(const Form<std::complex<double>>& a) {
    return a.template map<double>([](const std::complex<double>& c) { return c.real(); });
}

inline Form<double> imag_part(const Form<std::complex<double>>& a) {
    return a.template map<double>([](const std::complex<double>& c) { return c.imag(); });
}

inline Form<Rational> real_part(const Form<Gaussian>& a) {
    return a.template map<Rational>([](const Gaussian& c) { return c.re; });
}

inline Form<Rational> imag_part(const Form<Gaussian>& a) {
    return a.template map<Rational>([](const Gaussian& c) { return c.im; });
}

inline Form<Gaussian> to_gaussian(const Form<Rational>& a) {
    return a.template map<Gaussian>([](const Rational& c) { return Gaussian(c); });
}

/// Human-readable rendering, mostly for reports and error messages.
template <typename S, typename Fmt>
std::string render(const Form<S>& a, Fmt&& fmt) {
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : a.terms()) {
        if (!first) out += " + ";
        first = false;
        out += "(" + fmt(c) + ")";
        for (int i : mask::indices(m)) {
            out += i <= 3 ? "^e" + std::to_string(i) : "^f" + std::to_string(i - 3);
        }
    }
    return out;
}

}  // namespace ma6
