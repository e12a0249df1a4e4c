// Shared test utilities: random exact forms, random polynomial fields.

#pragma once

#include "ma6/fields.hpp"
#include "ma6/symplectic.hpp"

namespace ma6::test {

inline Rational random_rational(Rng& rng) {
    long long num = rng.uniform_int(-9, 9);
    long long den = rng.uniform_int(1, 3);
    return Rational(num, den);
}

inline Form<Rational> random_form(Rng& rng, int degree, int max_terms = 8) {
    Form<Rational> w(degree);
    std::vector<Mask> masks;
    for (unsigned m = 0; m < 64; ++m)
        if (mask::degree(static_cast<Mask>(m)) == degree) masks.push_back(static_cast<Mask>(m));
    int terms = static_cast<int>(rng.uniform_int(1, max_terms));
    for (int t = 0; t < terms; ++t)
        w.add_term(masks[static_cast<size_t>(rng.uniform_int(0, static_cast<long long>(masks.size()) - 1))],
                   random_rational(rng));
    return w;
}

inline Form<Rational> random_effective3(Rng& rng) {
    for (;;) {
        Form<Rational> w = effective_part(random_form(rng, 3, 10));
        if (!w.is_zero()) return w;
    }
}

inline Vec6<Rational> random_vector(Rng& rng) {
    Vec6<Rational> x;
    for (auto& c : x) c = random_rational(rng);
    return x;
}

inline Vec6<double> random_vector_d(Rng& rng) {
    Vec6<double> x;
    for (auto& c : x) c = rng.uniform(-1.0, 1.0);
    return x;
}

/// Polynomial in six variables of bounded total degree, with exact partial
/// derivatives; drives the FD-vs-exact and d(dF) tests.
struct Poly6 {
    struct Term {
        double c;
        std::array<int, 6> e;
    };
    std::vector<Term> terms;

    double eval(const Point6& x) const {
        double s = 0.0;
        for (const auto& t : terms) {
            double v = t.c;
            for (int i = 0; i < 6; ++i)
                for (int k = 0; k < t.e[static_cast<size_t>(i)]; ++k) v *= x[static_cast<size_t>(i)];
            s += v;
        }
        return s;
    }

    double d(int i, const Point6& x) const {
        double s = 0.0;
        for (const auto& t : terms) {
            int ei = t.e[static_cast<size_t>(i)];
            if (ei == 0) continue;
            double v = t.c * ei;
            for (int m = 0; m < 6; ++m) {
                int reps = t.e[static_cast<size_t>(m)] - (m == i ? 1 : 0);
                for (int k = 0; k < reps; ++k) v *= x[static_cast<size_t>(m)];
            }
            s += v;
        }
        return s;
    }

    static Poly6 random(Rng& rng, int max_degree, double amplitude, int n_terms) {
        Poly6 p;
        for (int t = 0; t < n_terms; ++t) {
            Term term;
            term.c = amplitude * rng.uniform(-1.0, 1.0);
            int budget = static_cast<int>(rng.uniform_int(0, max_degree));
            term.e = {0, 0, 0, 0, 0, 0};
            for (int b = 0; b < budget; ++b) ++term.e[static_cast<size_t>(rng.uniform_int(0, 5))];
            p.terms.push_back(term);
        }
        return p;
    }
};

/// Degree-k form field with random polynomial coefficients and exact
/// derivative callbacks.
inline FormField random_poly_field(Rng& rng, int degree, int poly_degree = 3) {
    auto coeffs = std::make_shared<std::map<Mask, Poly6>>();
    for (unsigned m = 0; m < 64; ++m)
        if (mask::degree(static_cast<Mask>(m)) == degree)
            (*coeffs)[static_cast<Mask>(m)] = Poly6::random(rng, poly_degree, 1.0, 4);
    FormField f;
    f.degree = degree;
    f.value = [coeffs, degree](const Point6& x) {
        Form<double> w(degree);
        for (const auto& [m, p] : *coeffs) {
            double v = p.eval(x);
            if (v != 0.0) w.add_term(m, v);
        }
        return w;
    };
    f.partial = [coeffs, degree](int j, const Point6& x) {
        Form<double> w(degree);
        for (const auto& [m, p] : *coeffs) {
            double v = p.d(j, x);
            if (v != 0.0) w.add_term(m, v);
        }
        return w;
    };
    return f;
}

}  // namespace ma6::test
