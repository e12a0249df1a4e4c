#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "ma6/hitchin.hpp"

using namespace ma6;
using test::random_effective3;
using test::random_form;
using test::random_rational;
using test::random_vector;

namespace {

Form<Rational> mono(std::vector<int> idx, Rational c = 1) { return Form<Rational>::monomial(std::move(idx), std::move(c)); }

Form<Rational> omega_wedge_e1() { return top(Form<Rational>::basis_covector(1)); }

/// Im(dz1 ^ dz2 ^ dz3) built independently over the Gaussian rationals.
Form<Rational> special_lagrangian_form() {
    Form<Gaussian> dz1(1), dz2(1), dz3(1);
    Gaussian i(Rational(0), Rational(1));
    dz1.add_term(mask::bit(1), Gaussian(Rational(1)));
    dz1.add_term(mask::bit(4), i);
    dz2.add_term(mask::bit(2), Gaussian(Rational(1)));
    dz2.add_term(mask::bit(5), i);
    dz3.add_term(mask::bit(3), Gaussian(Rational(1)));
    dz3.add_term(mask::bit(6), i);
    return imag_part(wedge(wedge(dz1, dz2), dz3));
}

}  // namespace

TEST_CASE("K on the hyperbolic normal form") {
    Rational g(1);
    SECTION("gamma = 1") { g = 1; }
    SECTION("gamma = 5/3") { g = Rational(5, 3); }
    Matrix<Rational> k = k_endomorphism(table1_representative(1, g));
    Matrix<Rational> expect(6, 6);
    for (int i = 0; i < 3; ++i) {
        expect(i, i) = g;
        expect(i + 3, i + 3) = -g;
    }
    CHECK(k == expect);
}

TEST_CASE("K of zero and of a decomposable form vanish") {
    CHECK(k_endomorphism(Form<Rational>(3)).is_zero());
    CHECK(k_endomorphism(mono({1, 2, 3})).is_zero());
    CHECK_THROWS_AS(k_endomorphism(mono({1, 2})), Error);
}

TEST_CASE("K obeys the contraction law xi(K X) theta = xi ^ i_X w ^ w") {
    Rng rng(31);
    for (int it = 0; it < 40; ++it) {
        Form<Rational> w = random_form(rng, 3);
        Matrix<Rational> k = k_endomorphism(w);
        Vec6<Rational> x = random_vector(rng);
        Form<Rational> xi = random_form(rng, 1);
        Vec6<Rational> kx = k.apply6(x);
        Rational xi_of_kx = 0;
        for (int i = 0; i < 6; ++i) xi_of_kx += xi.coeff(mask::bit(i + 1)) * kx[static_cast<size_t>(i)];
        Form<Rational> rhs = wedge(xi, wedge(interior(x, w), w));
        CHECK(xi_of_kx == theta_ratio(rhs));
    }
}

TEST_CASE("pfaffian: frozen values of the Table-1 representatives") {
    // lambda = Tr(K^2)/6 with theta = -Omega^3/6; the table's column lists
    // gamma^4 and -4 gamma^4, a fixed gamma^2 away from these. Only the
    // sign is used downstream.
    for (Rational g : {Rational(1), Rational(2), Rational(1, 2), Rational(7, 5)}) {
        CHECK(pfaffian(table1_representative(1, g)) == g * g);
        CHECK(pfaffian(table1_representative(2, g)) == -4 * g * g);
        CHECK(pfaffian(table1_representative(3, g)) == -4 * g * g);
    }
    for (int row = 4; row <= 9; ++row) CHECK(pfaffian(table1_representative(row)) == 0);
    CHECK(pfaffian(Form<Rational>(3)) == 0);
}

TEST_CASE("pfaffian is quartic and symplectically invariant") {
    Rng rng(32);
    for (int it = 0; it < 25; ++it) {
        Form<Rational> w = random_effective3(rng);
        Rational lam = pfaffian(w);
        Rational t = random_rational(rng);
        CHECK(pfaffian(t * w) == t * t * t * t * lam);
        Matrix<Rational> f = random_symplectic(rng, 4);
        CHECK(pfaffian(pullback(f, w)) == lam);
    }
}

TEST_CASE("quadratic invariants of worked examples") {
    SECTION("row 1 is the hyperbolic pairing") {
        Rational g(3);
        auto q = quadratic_invariants(table1_representative(1, g));
        Matrix<Rational> pairing(6, 6);
        for (int i = 0; i < 3; ++i) {
            pairing(i, i + 3) = g;
            pairing(i + 3, i) = g;
        }
        CHECK(q.qK == pairing);
        CHECK(signature(q.qK) == Signature{3, 3, 0});
    }
    SECTION("zero form") {
        auto q = quadratic_invariants(Form<Rational>(3));
        CHECK(q.qK.is_zero());
        CHECK(q.qLR.is_zero());
    }
    SECTION("special Lagrangian is negative definite") {
        auto q = quadratic_invariants(special_lagrangian_form());
        CHECK(signature(q.qK) == Signature{0, 6, 0});
    }
    SECTION("defined only for effective forms") {
        CHECK_THROWS_WITH(quadratic_invariants(omega_wedge_e1()), "q_omega defined for effective forms only");
    }
}

TEST_CASE("signature on closed-form inputs") {
    Matrix<Rational> pairing(6, 6);
    for (int i = 0; i < 3; ++i) {
        pairing(i, i + 3) = 1;
        pairing(i + 3, i) = 1;
    }
    CHECK(signature(pairing) == Signature{3, 3, 0});
    CHECK(signature(Matrix<Rational>(6, 6)) == Signature{0, 0, 6});
    Matrix<Rational> d(6, 6);
    d(0, 0) = 1;
    d(1, 1) = -1;
    d(2, 2) = 1;
    CHECK(signature(d) == Signature{2, 1, 3});
    Matrix<Rational> ns(2, 2);
    ns(0, 1) = 1;
    CHECK_THROWS_AS(signature(ns), Error);
}

TEST_CASE("effective iff K in sp(6), i.e. qK symmetric") {
    // The converse direction needs genericity: sparse non-effective forms
    // can land in sp(6) anyway (below). Dense coefficients keep the random
    // check off that degenerate locus.
    Rng rng(33);
    Matrix<Rational> j6 = detail::omega_gram<Rational>();
    auto in_sp6 = [&j6](const Form<Rational>& w) {
        return (k_endomorphism(w).transposed() * j6).is_symmetric();
    };
    for (int it = 0; it < 40; ++it) {
        CHECK(in_sp6(test::random_effective3(rng)));
        Form<Rational> dense(3);
        for (unsigned m = 0; m < 64; ++m)
            if (mask::degree(static_cast<Mask>(m)) == 3)
                dense.add_term(static_cast<Mask>(m), Rational(rng.uniform_int(1, 9), rng.uniform_int(1, 3)) *
                                                         Rational(rng.uniform_int(0, 1) ? 1 : -1));
        if (!is_effective(dense)) CHECK_FALSE(in_sp6(dense));
    }
    // boundary of the equivalence: a non-effective decomposable form has
    // K = 0, which is in sp(6) trivially
    Form<Rational> decomposable_noneff = mono({1, 2, 4});  // e1*^e2*^f1*
    REQUIRE_FALSE(is_effective(decomposable_noneff));
    CHECK(k_endomorphism(decomposable_noneff).is_zero());
}

TEST_CASE("K^2 = lambda Id and qK = 2 qLR on random effective forms") {
    Rng rng(34);
    for (int it = 0; it < 100; ++it) {
        Form<Rational> w = random_effective3(rng);
        Matrix<Rational> k = k_endomorphism(w);
        Rational lam = pfaffian(w);
        CHECK(k * k == lam * Matrix<Rational>::identity(6));
        auto q = quadratic_invariants(w);
        CHECK(q.qK.is_symmetric());
        CHECK(q.qK == Rational(kQKOverQLR) * q.qLR);
    }
}

TEST_CASE("equivariance under symplectic pullback") {
    Rng rng(35);
    for (int it = 0; it < 20; ++it) {
        Form<Rational> w = random_effective3(rng);
        Matrix<Rational> f = random_symplectic(rng, 4);
        Form<Rational> fw = pullback(f, w);
        CHECK(k_endomorphism(fw) == inverse(f) * k_endomorphism(w) * f);
        auto q = quadratic_invariants(w);
        auto qf = quadratic_invariants(fw);
        CHECK(qf.qK == f.transposed() * q.qK * f);
    }
}

TEST_CASE("characteristic polynomial identity, algebraic q without absolute value") {
    Rng rng(36);
    auto om = omega_form<Rational>();
    Form<Rational> om3 = wedge(wedge(om, om), om);
    bool negative_q_seen = false;
    for (int it = 0; it < 40; ++it) {
        Form<Rational> w = random_effective3(rng);
        auto q = quadratic_invariants(w);
        Vec6<Rational> x = random_vector(rng);
        Rational qxx = 0;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) qxx += x[static_cast<size_t>(i)] * q.qLR(i, j) * x[static_cast<size_t>(j)];
        Form<Rational> a = interior(x, w);
        // (i_X w - xi Omega)^3 = -xi (xi^2 - qLR(X,X)) Omega^3, coefficientwise:
        CHECK(wedge(wedge(a, a), a).is_zero());              // xi^0
        CHECK(Rational(-3) * theta_ratio(wedge(wedge(a, a), om)) == qxx * theta_ratio(om3));  // xi^1
        CHECK(wedge(a, wedge(om, om)).is_zero());            // xi^2
        if (qxx < 0) {
            negative_q_seen = true;
            // the |q| variant would flip this coefficient's sign: it fails
            CHECK(Rational(-3) * theta_ratio(wedge(wedge(a, a), om)) != -qxx * theta_ratio(om3));
        }
    }
    CHECK(negative_q_seen);
}

TEST_CASE("decompose: hyperbolic normal forms") {
    auto d = decompose(table1_representative(1, 1));
    CHECK(d.hyperbolic);
    CHECK(d.alpha == mono({1, 2, 3}));
    CHECK(d.beta == mono({4, 5, 6}));
    CHECK(d.orientation == 1);

    auto d8 = decompose(mono({1, 2, 3}) + mono({4, 5, 6}, 8));
    CHECK(d8.alpha == mono({1, 2, 3}));
    CHECK(d8.beta == mono({4, 5, 6}, 8));

    CHECK_THROWS_WITH(decompose(mono({1, 2, 3})), "degenerate form, no Hitchin decomposition");
}

TEST_CASE("decompose: special Lagrangian and its annihilators") {
    Form<Rational> slag = special_lagrangian_form();
    auto d = decompose(slag);
    CHECK_FALSE(d.hyperbolic);
    // w = alpha + conj(alpha) = 2 Re(alpha)
    CHECK(Rational(2) * d.alpha == slag);
    Form<Gaussian> alpha = to_gaussian(d.alpha) + Gaussian(Rational(0), Rational(1)) * to_gaussian(d.beta);
    CHECK(annihilator_dim(alpha) == 3);
    // annihilator must be the (0,1)-subspace span{ e_j + i f_j }
    auto basis = annihilator_basis(alpha);
    REQUIRE(basis.size() == 3);
    Matrix<Gaussian> joint(3 + 6, 6);
    Gaussian i(Rational(0), Rational(1));
    for (int j = 0; j < 3; ++j) {
        joint(j, j) = Gaussian(Rational(1));
        joint(j, j + 3) = i;
    }
    for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 6; ++c) joint(6 + b, c) = basis[static_cast<size_t>(b)][static_cast<size_t>(c)];
    // 9 x 6 stack of the expected span and the computed one still has rank 3
    CHECK(rank(joint) == 3);
}

TEST_CASE("decompose on random pullbacks: sums, annihilators, Lagrangian property") {
    Rng rng(37);
    for (int it = 0; it < 30; ++it) {
        bool hyper = it % 2 == 0;
        Rational g(rng.uniform_int(1, 3), rng.uniform_int(1, 2));
        Form<Rational> w0 = table1_representative(hyper ? 1 : 3, g);
        Form<Rational> w = pullback(random_symplectic(rng, 4), w0);
        auto d = decompose(w);
        CHECK(d.hyperbolic == hyper);
        CHECK(sign_of(d.orientation) > 0);
        if (hyper) {
            CHECK(d.alpha + d.beta == w);
            CHECK(annihilator_dim(d.alpha) == 3);
            CHECK(annihilator_dim(d.beta) == 3);
            CHECK(lagrangian_defect(annihilator_basis(d.alpha)) == 0.0);
            CHECK(lagrangian_defect(annihilator_basis(d.beta)) == 0.0);
        } else {
            CHECK(Rational(2) * d.alpha == w);
            Form<Gaussian> alpha = to_gaussian(d.alpha) + Gaussian(Rational(0), Rational(1)) * to_gaussian(d.beta);
            Form<Gaussian> conj_alpha = alpha.conjugated();
            CHECK(alpha + conj_alpha == to_gaussian(w));
            CHECK(annihilator_dim(alpha) == 3);
            CHECK(lagrangian_defect(annihilator_basis(alpha)) == 0.0);
        }
    }
}

TEST_CASE("dual form identities") {
    Form<Rational> r1 = table1_representative(1, 1);
    CHECK(dual(r1) == mono({1, 2, 3}) + mono({4, 5, 6}, -1));
    // dual of dual flips the sign for hyperbolic normalized forms
    CHECK(dual(dual(r1)) == -r1);

    Form<Rational> slag = special_lagrangian_form();
    Form<Rational> ds = dual(slag);
    // proportional to Re(dz1^dz2^dz3); cross-check through the elliptic
    // identity w^dual = -2 sqrt(|lambda|) theta
    CHECK(theta_ratio(wedge(slag, ds)) == -4);

    Rng rng(38);
    for (int it = 0; it < 20; ++it) {
        Rational g(rng.uniform_int(1, 4));
        Form<Rational> w = pullback(random_symplectic(rng, 4), table1_representative(it % 2 ? 1 : 3, g));
        Rational lam = pfaffian(w);
        Rational s = *exact_sqrt(lam < 0 ? Rational(-lam) : lam);
        CHECK(theta_ratio(wedge(w, dual(w))) == Rational(-2) * s);
    }
}

TEST_CASE("normalize") {
    Form<Rational> w = table1_representative(1, 4);  // lambda = 16
    auto n = normalize(w);
    CHECK(n.residual_quartic == 1);
    CHECK(n.form == Rational(1, 2) * w);
    CHECK(pfaffian(n.form) == 1);

    auto n1 = normalize(table1_representative(1, 1));
    CHECK(n1.form == table1_representative(1, 1));

    // irrational fourth root: the scaling is carried separately
    auto n2 = normalize(table1_representative(1, 2));  // lambda = 4
    CHECK(n2.residual_quartic == 4);
    CHECK(n2.form == table1_representative(1, 2));

    // homogeneity: normalize(t w) = normalize(w) for t > 0 with exact roots
    Form<Rational> w3 = table1_representative(1, Rational(1));
    CHECK(normalize(Rational(16) * w3).form == normalize(w3).form);

    CHECK_THROWS_AS(normalize(mono({1, 2, 3})), Error);
}

TEST_CASE("classification of representatives and worked examples") {
    CHECK(classify(table1_representative(1, 2)).orbit == Orbit::Row1);
    auto oc5 = classify(table1_representative(5));
    CHECK(oc5.orbit == Orbit::Row5);
    CHECK(oc5.sig == Signature{0, 3, 3});
    CHECK(classify(mono({1, 2, 3})).orbit == Orbit::Row8);
    CHECK(classify(Form<Rational>(3)).orbit == Orbit::Row9);
    for (int row = 1; row <= 9; ++row) {
        auto oc = classify(table1_representative(row, Rational(1, 2)));
        CHECK(oc.orbit == static_cast<Orbit>(row - 1));
        CHECK_FALSE(oc.sign_variant);
    }
    CHECK_THROWS_AS(classify(omega_wedge_e1()), Error);
    CHECK_THROWS_AS(classify(mono({1, 2})), Error);
}

TEST_CASE("classification is a symplectic invariant") {
    Rng rng(39);
    for (int row = 1; row <= 9; ++row)
        for (int it = 0; it < 12; ++it) {
            Form<Rational> w = table1_representative(row, Rational(rng.uniform_int(1, 3)));
            auto oc = classify(pullback(random_symplectic(rng, 4), w));
            CHECK(oc.orbit == static_cast<Orbit>(row - 1));
        }
}

TEST_CASE("negation preserves every invariant (K and q are quadratic in omega)") {
    // -w realizes exactly the same (lambda, signature, annihilator) tuple,
    // so negating a representative can never force the sign-variant branch
    Rng rng(40);
    for (int row = 1; row <= 9; ++row) {
        Form<Rational> w = table1_representative(row, Rational(2));
        CHECK(k_endomorphism(-w) == k_endomorphism(w));
        auto oc = classify(-w);
        CHECK(oc.orbit == static_cast<Orbit>(row - 1));
        CHECK_FALSE(oc.sign_variant);
    }
}
