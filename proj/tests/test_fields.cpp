#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "ma6/monge_ampere.hpp"

using namespace ma6;
using test::Poly6;
using test::random_poly_field;

TEST_CASE("exterior derivative of constants and linear fields") {
    Rng rng(61);
    FormField c = constant_field(to_float(test::random_form(rng, 2)));
    Point6 x{0.1, -0.2, 0.3, 0.4, -0.5, 0.6};
    CHECK(exterior_derivative(c, x).max_abs_coeff() <= 1e-12);

    // x1 dx2 -> dx1 ^ dx2 (exact under central differences)
    FormField lin;
    lin.degree = 1;
    lin.value = [](const Point6& p) {
        Form<double> w(1);
        w.add_term(mask::bit(2), p[0]);
        return w;
    };
    Form<double> d = exterior_derivative(lin, x);
    Form<double> expect(2);
    expect.add_term(static_cast<Mask>(mask::bit(1) | mask::bit(2)), 1.0);
    CHECK((d - expect).max_abs_coeff() < 1e-10);
}

TEST_CASE("domain margin is enforced") {
    FormField f = constant_field(Form<double>(2));
    Box6 box;
    for (auto& b : box.bounds) b = {-1.0, 1.0};
    f.domain = box;
    CHECK_THROWS_AS(exterior_derivative(f, Point6{0.99999, 0, 0, 0, 0, 0}), Error);
    CHECK_NOTHROW(exterior_derivative(f, Point6{0.9, 0, 0, 0, 0, 0}));
}

TEST_CASE("FD and exact derivatives agree to O(h^2) on polynomial fields") {
    Rng rng(62);
    double worst_c = 0.0;
    for (int it = 0; it < 10; ++it) {
        FormField f = random_poly_field(rng, 2);
        FormField fd = f;
        fd.partial = nullptr;  // force central differences
        Point6 x;
        for (auto& xi : x) xi = rng.uniform(-0.5, 0.5);
        double diff = (exterior_derivative(f, x) - exterior_derivative(fd, x)).max_abs_coeff();
        worst_c = std::max(worst_c, diff / (f.h * f.h));
    }
    INFO("measured FD constant C = " << worst_c);
    CHECK(worst_c < 50.0);
}

TEST_CASE("d(dF) vanishes within the FD budget") {
    Rng rng(63);
    for (int it = 0; it < 6; ++it) {
        FormField f = random_poly_field(rng, 1);
        FormField df;
        df.degree = 2;
        df.h = f.h;
        df.value = [f](const Point6& y) { return exterior_derivative(f, y); };
        Point6 x;
        for (auto& xi : x) xi = rng.uniform(-0.5, 0.5);
        CHECK(exterior_derivative(df, x).max_abs_coeff() < 10.0 * f.h * f.h);
    }
}

TEST_CASE("christoffel symbols of flat metrics vanish") {
    MetricField g;
    g.value = [](const Point6&) { return Matrix<double>::identity(6); };
    Point6 x{0.1, 0.2, 0.3, 0.1, 0.2, 0.3};
    Christoffel gamma = christoffel(g, x);
    double worst = 0.0;
    for (double v : gamma.a) worst = std::max(worst, std::fabs(v));
    CHECK(worst < 1e-12);

    MetricField g2;
    g2.value = [](const Point6&) { return 2.0 * Matrix<double>::identity(6); };
    gamma = christoffel(g2, x);
    worst = 0.0;
    for (double v : gamma.a) worst = std::max(worst, std::fabs(v));
    CHECK(worst < 1e-12);

    MetricField sing;
    sing.value = [](const Point6&) { return Matrix<double>(6, 6); };
    CHECK_THROWS_AS(christoffel(sing, x), Error);
}

TEST_CASE("potential metrics: block structure of the Christoffel matrices") {
    // g from phi = sum u_l(x) v_l(y): Gamma_j has the dA/dx_j A^{-1} block
    Rng rng(64);
    std::vector<Cubic3> us, vs;
    for (int l = 0; l < 3; ++l) {
        Cubic3 u = Cubic3::random(rng, 0.2);
        u.terms.push_back({1.0, {l == 0, l == 1, l == 2}});
        Cubic3 v = Cubic3::random(rng, 0.2);
        v.terms.push_back({1.0, {l == 0, l == 1, l == 2}});
        us.push_back(u);
        vs.push_back(v);
    }
    MetricField g = potential_metric(us, vs);
    Point6 p{0.1, -0.2, 0.15, 0.05, 0.2, -0.1};
    Christoffel gamma = christoffel(g, p);

    // A and dA/dx_j from the same data
    std::array<double, 3> xx{p[0], p[1], p[2]}, yy{p[3], p[4], p[5]};
    Matrix<double> a(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) a(i, j) += us[static_cast<size_t>(l)].d(i, xx) * vs[static_cast<size_t>(l)].d(j, yy);
    for (int j = 0; j < 3; ++j) {
        Matrix<double> da(3, 3);
        double hh = 1e-5;
        auto xp = xx, xm = xx;
        xp[static_cast<size_t>(j)] += hh;
        xm[static_cast<size_t>(j)] -= hh;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                for (int l = 0; l < 3; ++l)
                    da(r, c) += (us[static_cast<size_t>(l)].d(r, xp) - us[static_cast<size_t>(l)].d(r, xm)) *
                                vs[static_cast<size_t>(l)].d(c, yy) / (2 * hh);
        // Gamma^l_{jk} = (dA/dx_j A^{-1})_{kl}; the proof's display is the
        // (k,l) layout of the same block
        Matrix<double> block = da * inverse(a);
        for (int l = 0; l < 3; ++l)
            for (int k = 0; k < 3; ++k) {
                CHECK(gamma(l, j, k) == Catch::Approx(block(k, l)).margin(2e-4));
                // off-blocks vanish
                CHECK(std::fabs(gamma(l + 3, j, k)) < 2e-4);
            }
    }
}

TEST_CASE("riemann: flat cases and the sphere negative control") {
    Point6 x{0.1, 0.2, -0.1, 0.15, -0.2, 0.1};
    MetricField flat;
    flat.value = [](const Point6&) {
        Matrix<double> m(6, 6);
        for (int i = 0; i < 3; ++i) {
            m(i, i + 3) = 1;
            m(i + 3, i) = 1;
        }
        return m;
    };
    CHECK(riemann(flat, x).max_abs() < 1e-12);

    // separable potential: exactly flat, measured through the full pipeline
    Rng rng(65);
    std::vector<Cubic3> us, vs;
    for (int l = 0; l < 3; ++l) {
        Cubic3 u = Cubic3::random(rng, 0.25);
        u.terms.push_back({1.0, {l == 0, l == 1, l == 2}});
        Cubic3 v = Cubic3::random(rng, 0.25);
        v.terms.push_back({1.0, {l == 0, l == 1, l == 2}});
        us.push_back(u);
        vs.push_back(v);
    }
    MetricField sep = potential_metric(us, vs);
    double scale = sep.value(x).max_abs();
    double flat_r = riemann(sep, x).max_abs();
    CHECK(flat_r < 1e-4 * std::max(1.0, scale));

    // non-separable control: an x1^2 y1^2 term must produce curvature
    MetricField warped = potential_metric(us, vs, 1.0);
    double warped_r = riemann(warped, x).max_abs();
    CHECK(warped_r > 10.0 * flat_r);

    // sphere block: ds^2 = dtheta^2 + sin^2(theta) dphi^2 has |R| ~ sin^2
    MetricField sphere;
    sphere.value = [](const Point6& p) {
        Matrix<double> m = Matrix<double>::identity(6);
        double th = 1.0 + p[0];
        m(1, 1) = std::sin(th) * std::sin(th);
        return m;
    };
    CHECK(riemann(sphere, x).max_abs() > 0.1);
}

TEST_CASE("optional Richardson extrapolation stays consistent") {
    Rng rng(69);
    std::vector<Cubic3> us, vs;
    for (int l = 0; l < 3; ++l) {
        Cubic3 u = Cubic3::random(rng, 0.3);
        u.terms.push_back({1.0, {l == 0, l == 1, l == 2}});
        Cubic3 v = Cubic3::random(rng, 0.3);
        v.terms.push_back({1.0, {l == 0, l == 1, l == 2}});
        us.push_back(u);
        vs.push_back(v);
    }
    MetricField g = potential_metric(us, vs, 0.5);
    Point6 x{0.1, 0.05, -0.1, 0.05, -0.05, 0.1};
    Riemann plain = riemann(g, x, false);
    Riemann extrap = riemann(g, x, true);
    double diff = 0.0;
    for (size_t t = 0; t < plain.a.size(); ++t) diff = std::max(diff, std::fabs(plain.a[t] - extrap.a[t]));
    CHECK(diff < 1e-3 * std::max(1.0, plain.max_abs()));  // same tensor up to the truncation order
    CHECK(extrap.max_abs() > 0.01);                        // still sees the curvature
}

TEST_CASE("riemann symmetries and first Bianchi identity") {
    Rng rng(66);
    std::vector<Cubic3> us, vs;
    for (int l = 0; l < 3; ++l) {
        Cubic3 u = Cubic3::random(rng, 0.3);
        u.terms.push_back({1.0, {l == 0, l == 1, l == 2}});
        Cubic3 v = Cubic3::random(rng, 0.3);
        v.terms.push_back({1.0, {l == 0, l == 1, l == 2}});
        us.push_back(u);
        vs.push_back(v);
    }
    MetricField g = potential_metric(us, vs, 0.7);
    Point6 x{0.05, 0.1, -0.1, 0.1, -0.05, 0.05};
    Christoffel gamma = christoffel(g, x);
    for (int l = 0; l < 6; ++l)
        for (int j = 0; j < 6; ++j)
            for (int k = j; k < 6; ++k) CHECK(gamma(l, j, k) == gamma(l, k, j));
    Riemann r = riemann(g, x);
    double worst_antisym = 0.0, worst_bianchi = 0.0;
    for (int l = 0; l < 6; ++l)
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                for (int k = 0; k < 6; ++k) {
                    worst_antisym = std::max(worst_antisym, std::fabs(r(l, i, j, k) + r(l, j, i, k)));
                    worst_bianchi =
                        std::max(worst_bianchi, std::fabs(r(l, i, j, k) + r(l, j, k, i) + r(l, k, i, j)));
                }
    CHECK(worst_antisym < 1e-10);  // exact antisymmetry of the formula
    CHECK(worst_bianchi < 1e-3);   // within the FD budget
}

TEST_CASE("local constancy: constant structures give LocallyConstant with zero defects") {
    std::vector<Point6> samples;
    Rng rng(67);
    for (int i = 0; i < 5; ++i) {
        Point6 p;
        for (auto& xi : p) xi = rng.uniform(-1.0, 1.0);
        samples.push_back(p);
    }
    for (const char* name : {"hess", "special-lagrangian", "pseudo"}) {
        FormField f = constant_field(to_float(builtin_equation(name, 1).omega));
        auto rep = local_constancy_report(f, samples);
        CHECK(rep.verdict == Verdict::LocallyConstant);
        CHECK(rep.max_d_omega < 1e-10);
        CHECK(rep.max_d_dual < 1e-10);
        CHECK(rep.max_riemann < 1e-10);
    }
}

TEST_CASE("local constancy: symplectic pullbacks of normal forms stay LocallyConstant") {
    Rng rng(68);
    std::vector<Point6> samples;
    for (int i = 0; i < 4; ++i) {
        Point6 p;
        for (auto& xi : p) xi = rng.uniform(-1.0, 1.0);
        samples.push_back(p);
    }
    for (int it = 0; it < 4; ++it) {
        Form<Rational> w0 = table1_representative(it % 2 ? 1 : 3, Rational(it + 1));
        Form<Rational> w = pullback(random_symplectic(rng, 4), w0);
        auto rep = local_constancy_report(constant_field(to_float(w)), samples);
        CHECK(rep.verdict == Verdict::LocallyConstant);
    }
}

TEST_CASE("local constancy: degenerate samples yield Inconclusive") {
    FormField f = constant_field(to_float(table1_representative(8)));  // lambda = 0
    std::vector<Point6> samples{Point6{0, 0, 0, 0, 0, 0}};
    auto rep = local_constancy_report(f, samples);
    CHECK(rep.verdict == Verdict::Inconclusive);
    CHECK(rep.degenerate_points.size() == 1);
}
