/// @file symplectic.hpp
/// The standard symplectic structure on R^6, the raising (top) and lowering
/// (bot) operators, effectiveness tests and the Hodge-Lepage-Lychagin
/// decomposition. Conventions, pinned by the identities they must satisfy:
///
///   Omega  = e1*^f1* + e2*^f2* + e3*^f3*
///   theta  = -Omega^3/6 = e1*^e2*^e3*^f1*^f2*^f3*
///   X_Omega = sum_i e_i ^ f_i, contracted termwise as i_{X^Y} = i_Y o i_X,
///             which gives bot(Omega) = +3 and [bot,top] = (3-k) Id on
///             degree-k forms.

#pragma once

#include <vector>

#include "ma6/form.hpp"
#include "ma6/rng.hpp"

namespace ma6 {

template <typename S>
Form<S> omega_form() {
    Form<S> w(2);
    for (int i = 1; i <= 3; ++i) w.add_term(static_cast<Mask>(mask::bit(i) | mask::bit(i + 3)), ScalarTraits<S>::one());
    return w;
}

template <typename S>
Form<S> theta_form() {
    Form<S> t(6);
    t.add_term(mask::full, ScalarTraits<S>::one());
    return t;
}

/// Ratio of a 6-form against theta (its single coefficient).
template <typename S>
S theta_ratio(const Form<S>& top6) {
    if (top6.degree() != 6) throw Error("theta_ratio expects a 6-form");
    return top6.coeff(mask::full);
}

template <typename S>
Form<S> top(const Form<S>& a) {
    if (a.degree() > 4) throw Error("top degree overflow: input degree " + std::to_string(a.degree()));
    return wedge(a, omega_form<S>());
}

/// bot = i_{X_Omega}; extended by 0 on degrees 0 and 1.
template <typename S>
Form<S> bot(const Form<S>& a) {
    if (a.degree() < 2) return Form<S>(0);
    Form<S> r(a.degree() - 2);
    for (int i = 1; i <= 3; ++i) {
        Form<S> t = interior_basis(i + 3, interior_basis(i, a));
        r = r + t;
    }
    return r;
}

/// Effectiveness defect: max |coefficient| of bot(a), and of a^Omega when
/// deg(a) = 3 (the two characterizations must agree; for middle degree both
/// are checked).
template <typename S>
double effectiveness_defect(const Form<S>& a) {
    double d = bot(a).max_abs_coeff();
    if (a.degree() == 3) d = std::max(d, wedge(a, omega_form<S>()).max_abs_coeff());
    return d;
}

template <typename S>
bool is_effective(const Form<S>& a, double eps = 1e-10) {
    if constexpr (ScalarTraits<S>::exact) {
        bool by_bot = bot(a).is_zero();
        if (a.degree() == 3) {
            bool by_wedge = wedge(a, omega_form<S>()).is_zero();
            if (by_bot != by_wedge) throw Error("effectiveness cross-check failed (internal)");
        }
        return by_bot;
    } else {
        return effectiveness_defect(a) <= eps;
    }
}

namespace detail {

/// bot^j top^j on an effective form of degree d multiplies by
/// mu(j,d) = prod_{i=1..j} i*(3 - d - i + 1); derived from repeated use of
/// [bot,top] = (n-k) Id with n = 3.
inline long long hodge_mu(int j, int d) {
    long long mu = 1;
    for (int i = 1; i <= j; ++i) mu *= static_cast<long long>(i) * (3 - d - i + 1);
    return mu;
}

}  // namespace detail

/// Hodge-Lepage-Lychagin decomposition a = sum_i top^i(w_i) with every w_i
/// effective. Solved by triangular back-substitution on the bot-filtration:
/// peel the deepest component first via bot^m(a) = mu(m, d_m) w_m. When
/// mu = 0 (degrees 5 and 6, where top annihilates effective middle forms)
/// the corresponding residual must vanish and the component is zero.
template <typename S>
std::vector<Form<S>> hodge_lepage(const Form<S>& a, double eps = 1e-10) {
    const int k = a.degree();
    const int m_max = k / 2;
    std::vector<Form<S>> comps(static_cast<size_t>(m_max) + 1, Form<S>(0));
    Form<S> acc = a;  // a minus the already-peeled top^j(w_j), j > m
    for (int m = m_max; m >= 1; --m) {
        Form<S> r = acc;
        for (int i = 0; i < m; ++i) r = bot(r);
        long long mu = detail::hodge_mu(m, k - 2 * m);
        if (mu == 0) {
            if constexpr (ScalarTraits<S>::exact) {
                if (!r.is_zero()) throw Error("hodge_lepage: nonzero residual at vanishing mu (internal)");
            } else if (!r.is_zero_within(eps * std::max(1.0, a.max_abs_coeff()))) {
                throw Error("hodge_lepage: nonzero residual at vanishing mu");
            }
            comps[static_cast<size_t>(m)] = Form<S>(k - 2 * m);
            continue;
        }
        S inv_mu = ScalarTraits<S>::one() / ScalarTraits<S>::from_int(mu);
        Form<S> w = inv_mu * r;
        comps[static_cast<size_t>(m)] = w;
        Form<S> lifted = w;
        for (int i = 0; i < m; ++i) lifted = top(lifted);
        acc = acc - lifted;
    }
    comps[0] = acc;
    return comps;
}

/// Effective part of a 3-form: w - top(bot(w)/2).
template <typename S>
Form<S> effective_part(const Form<S>& a) {
    if (a.degree() != 3) throw Error("effective_part expects a 3-form");
    S half = ScalarTraits<S>::one() / ScalarTraits<S>::from_int(2);
    return a - top(half * bot(a));
}

/// Random exact symplectic matrix: a product of `depth` symplectic
/// transvections X -> X + c*Omega(X,u)*u with small rational parameters.
/// depth 0 gives the identity. pullback(M, Omega) = Omega holds exactly.
inline Matrix<Rational> random_symplectic(Rng& rng, int depth = 4) {
    Matrix<Rational> m = Matrix<Rational>::identity(6);
    // J(i,j) = Omega(b_i, b_j)
    Matrix<Rational> j6(6, 6);
    for (int i = 0; i < 3; ++i) {
        j6(i, i + 3) = 1;
        j6(i + 3, i) = -1;
    }
    const Rational c_choices[] = {Rational(1), Rational(-1), Rational(1, 2), Rational(-1, 2), Rational(1, 3), Rational(-1, 3)};
    for (int d = 0; d < depth; ++d) {
        Vec6<Rational> u;
        bool nonzero = false;
        for (auto& ui : u) {
            ui = Rational(rng.uniform_int(-2, 2));
            if (ui != 0) nonzero = true;
        }
        if (!nonzero) u[static_cast<size_t>(rng.uniform_int(0, 5))] = 1;
        Rational c = c_choices[rng.uniform_int(0, 5)];
        // t(X) = X + c * u * (J u)^T X
        Vec6<Rational> ju = j6.apply6(u);
        Matrix<Rational> t = Matrix<Rational>::identity(6);
        for (int r = 0; r < 6; ++r)
            for (int s = 0; s < 6; ++s) t(r, s) += c * u[static_cast<size_t>(r)] * ju[static_cast<size_t>(s)];
        m = m * t;
    }
    return m;
}

}  // namespace ma6
