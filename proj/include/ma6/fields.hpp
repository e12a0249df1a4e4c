/// @file fields.hpp
/// Point-sampled differential geometry on open boxes in R^6: exterior
/// derivative of form fields, metrics, Christoffel symbols, Riemann
/// curvature and the local-constancy verdict (closedness of the normalized
/// form and its dual plus flatness of q). Derivatives come either from
/// user-supplied exact callbacks or from central differences of step h
/// (error O(h^2)); curvature differentiates Christoffel symbols with step
/// 10 h, optionally Richardson-extrapolated.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ma6/hitchin.hpp"

namespace ma6 {

using Point6 = std::array<double, 6>;

struct Box6 {
    std::array<std::array<double, 2>, 6> bounds;

    bool interior(const Point6& p, double margin) const {
        for (int i = 0; i < 6; ++i)
            if (p[static_cast<size_t>(i)] < bounds[static_cast<size_t>(i)][0] + margin ||
                p[static_cast<size_t>(i)] > bounds[static_cast<size_t>(i)][1] - margin)
                return false;
        return true;
    }
};

inline Point6 shifted(Point6 p, int j, double dh) {
    p[static_cast<size_t>(j)] += dh;
    return p;
}

/// A degree-k form field on (a box in) R^6. `partial`, when set, must
/// return the form of coefficient partial derivatives along axis j
/// (0-based); otherwise central differences with step h are used.
struct FormField {
    int degree = 3;
    std::function<Form<double>(const Point6&)> value;
    std::function<Form<double>(int, const Point6&)> partial;
    double h = 1e-4;
    std::optional<Box6> domain;
};

inline FormField constant_field(const Form<double>& w) {
    FormField f;
    f.degree = w.degree();
    f.value = [w](const Point6&) { return w; };
    f.partial = [deg = w.degree()](int, const Point6&) { return Form<double>(deg); };
    return f;
}

inline Form<double> field_partial(const FormField& f, int j, const Point6& x) {
    if (f.partial) return f.partial(j, x);
    Form<double> hi = f.value(shifted(x, j, f.h));
    Form<double> lo = f.value(shifted(x, j, -f.h));
    return (1.0 / (2.0 * f.h)) * (hi - lo);
}

/// dF at x: sum_j dx_j ^ (partial_j of the coefficient form).
inline Form<double> exterior_derivative(const FormField& f, const Point6& x) {
    if (f.domain && !f.domain->interior(x, f.h))
        throw Error("exterior derivative: point too close to the domain boundary");
    Form<double> d(f.degree + 1);
    for (int j = 0; j < 6; ++j) {
        Form<double> dj = field_partial(f, j, x);
        d = d + wedge(Form<double>::basis_covector(j + 1), dj);
    }
    return d;
}

struct MetricField {
    std::function<Matrix<double>(const Point6&)> value;
    std::function<Matrix<double>(int, const Point6&)> partial;
    double h = 1e-4;
};

inline Matrix<double> metric_partial(const MetricField& g, int j, const Point6& x) {
    if (g.partial) return g.partial(j, x);
    return (1.0 / (2.0 * g.h)) * (g.value(shifted(x, j, g.h)) - g.value(shifted(x, j, -g.h)));
}

/// Gamma^l_{jk}, symmetric in (j,k).
struct Christoffel {
    std::array<double, 216> a{};
    double& operator()(int l, int j, int k) { return a[static_cast<size_t>((l * 6 + j) * 6 + k)]; }
    double operator()(int l, int j, int k) const { return a[static_cast<size_t>((l * 6 + j) * 6 + k)]; }
};

/// R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik} + Gamma^l_{im}
/// Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}.
struct Riemann {
    std::array<double, 1296> a{};
    double& operator()(int l, int i, int j, int k) { return a[static_cast<size_t>(((l * 6 + i) * 6 + j) * 6 + k)]; }
    double operator()(int l, int i, int j, int k) const { return a[static_cast<size_t>(((l * 6 + i) * 6 + j) * 6 + k)]; }
    double max_abs() const {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::fabs(v));
        return m;
    }
};

inline Christoffel christoffel(const MetricField& g, const Point6& x) {
    Matrix<double> gx = g.value(x);
    Matrix<double> ginv;
    try {
        ginv = inverse(gx);
    } catch (const Error&) {
        throw Error("christoffel: singular metric at sample point");
    }
    std::array<Matrix<double>, 6> dg;
    for (int m = 0; m < 6; ++m) dg[static_cast<size_t>(m)] = metric_partial(g, m, x);
    Christoffel gamma;
    for (int l = 0; l < 6; ++l)
        for (int j = 0; j < 6; ++j)
            for (int k = j; k < 6; ++k) {
                double s = 0.0;
                for (int m = 0; m < 6; ++m)
                    s += ginv(l, m) * (dg[static_cast<size_t>(j)](m, k) + dg[static_cast<size_t>(k)](m, j) - dg[static_cast<size_t>(m)](j, k));
                gamma(l, j, k) = 0.5 * s;
                gamma(l, k, j) = 0.5 * s;
            }
    return gamma;
}

inline Riemann riemann(const MetricField& g, const Point6& x, bool richardson = false) {
    auto assemble = [&g, &x](double big_h) {
        std::array<Christoffel, 6> dgamma;
        for (int i = 0; i < 6; ++i) {
            Christoffel hi = christoffel(g, shifted(x, i, big_h));
            Christoffel lo = christoffel(g, shifted(x, i, -big_h));
            for (size_t t = 0; t < hi.a.size(); ++t) dgamma[static_cast<size_t>(i)].a[t] = (hi.a[t] - lo.a[t]) / (2.0 * big_h);
        }
        Christoffel gamma = christoffel(g, x);
        Riemann r;
        for (int l = 0; l < 6; ++l)
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j)
                    for (int k = 0; k < 6; ++k) {
                        double v = dgamma[static_cast<size_t>(i)](l, j, k) - dgamma[static_cast<size_t>(j)](l, i, k);
                        for (int m = 0; m < 6; ++m)
                            v += gamma(l, i, m) * gamma(m, j, k) - gamma(l, j, m) * gamma(m, i, k);
                        r(l, i, j, k) = v;
                    }
        return r;
    };
    double big_h = 10.0 * g.h;
    Riemann r = assemble(big_h);
    if (richardson) {
        Riemann r2 = assemble(big_h / 2.0);
        for (size_t t = 0; t < r.a.size(); ++t) r.a[t] = (4.0 * r2.a[t] - r.a[t]) / 3.0;
    }
    return r;
}

enum class Verdict { LocallyConstant, NotLocallyConstant, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::LocallyConstant: return "LocallyConstant";
        case Verdict::NotLocallyConstant: return "NotLocallyConstant";
        default: return "Inconclusive";
    }
}

struct ConstancyTolerances {
    double closedness = 1e-3;       // 1e-6 is appropriate with exact callbacks
    double curvature_rel = 1e-3;    // scaled by (metric scale)^2
    double lambda_min = 1e-8;
    double effectiveness = 1e-6;
};

struct CurvatureReport {
    std::vector<Point6> samples;
    std::size_t sample_count = 0;
    double max_riemann = 0.0;
    double max_d_omega = 0.0;
    double max_d_dual = 0.0;
    double metric_scale = 0.0;
    double curvature_tolerance = 0.0;
    double lambda_min_abs = std::numeric_limits<double>::infinity();
    double lambda_low = std::numeric_limits<double>::infinity();
    double lambda_high = -std::numeric_limits<double>::infinity();
    std::vector<Point6> degenerate_points;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

/// The local-constancy verdict for a Monge-Ampere structure (Omega0, w):
/// normalize w pointwise, measure max |d w_n|, |d dual(w_n)| and the
/// curvature of q(X,Y) = Omega0(K X, Y) of the normalized field over the
/// samples. This is a sampled necessary-condition check at the stated
/// tolerances, not a proof of local constancy.
inline CurvatureReport local_constancy_report(const FormField& wf, const std::vector<Point6>& samples,
                                              const ConstancyTolerances& tol = {}) {
    if (wf.degree != 3) throw Error("local constancy expects a 3-form field");
    CurvatureReport rep;
    rep.samples = samples;
    rep.sample_count = samples.size();

    auto normalized_at = [&wf, &tol](const Point6& p) {
        Form<double> w = wf.value(p);
        double lam = pfaffian(w);
        double alam = std::fabs(lam);
        if (alam < tol.lambda_min) throw Error("degenerate lambda");
        return (1.0 / std::pow(alam, 0.25)) * w;
    };

    FormField norm_field;
    norm_field.degree = 3;
    norm_field.h = wf.h;
    norm_field.value = normalized_at;

    FormField dual_field;
    dual_field.degree = 3;
    dual_field.h = wf.h;
    dual_field.value = [normalized_at, &tol](const Point6& p) { return dual(normalized_at(p), tol.lambda_min); };

    MetricField q_field;
    q_field.h = wf.h;
    q_field.value = [normalized_at](const Point6& p) {
        Form<double> w = normalized_at(p);
        Matrix<double> k = k_endomorphism(w);
        return k.transposed() * detail::omega_gram<double>();
    };

    bool all_ok = true;
    for (const Point6& p : samples) {
        Form<double> w = wf.value(p);
        double scale = std::max(1.0, w.max_abs_coeff());
        double lam = pfaffian(w);
        rep.lambda_low = std::min(rep.lambda_low, lam);
        rep.lambda_high = std::max(rep.lambda_high, lam);
        rep.lambda_min_abs = std::min(rep.lambda_min_abs, std::fabs(lam));
        if (effectiveness_defect(w) > tol.effectiveness * scale || std::fabs(lam) < tol.lambda_min) {
            rep.degenerate_points.push_back(p);
            all_ok = false;
            continue;
        }
        rep.max_d_omega = std::max(rep.max_d_omega, exterior_derivative(norm_field, p).max_abs_coeff());
        rep.max_d_dual = std::max(rep.max_d_dual, exterior_derivative(dual_field, p).max_abs_coeff());
        rep.metric_scale = std::max(rep.metric_scale, q_field.value(p).max_abs());
        rep.max_riemann = std::max(rep.max_riemann, riemann(q_field, p).max_abs());
    }
    rep.curvature_tolerance = tol.curvature_rel * std::max(1.0, rep.metric_scale * rep.metric_scale);
    if (!all_ok) {
        rep.verdict = Verdict::Inconclusive;
        rep.note = "degenerate or non-effective samples encountered; see degenerate_points";
        return rep;
    }
    bool flat = rep.max_riemann <= rep.curvature_tolerance && rep.max_d_omega <= tol.closedness &&
                rep.max_d_dual <= tol.closedness;
    rep.verdict = flat ? Verdict::LocallyConstant : Verdict::NotLocallyConstant;
    rep.note = "sampled necessary-condition check at " + std::to_string(samples.size()) +
               " points within stated tolerances; LocallyConstant means no violation was detected, not a proof";
    return rep;
}

/// Cubic polynomial in three variables, for potential-metric test fields.
struct Cubic3 {
    struct Term {
        double c;
        std::array<int, 3> e;
    };
    std::vector<Term> terms;

    double eval(const std::array<double, 3>& x) const {
        double s = 0.0;
        for (const auto& t : terms) {
            double v = t.c;
            for (int i = 0; i < 3; ++i)
                for (int k = 0; k < t.e[static_cast<size_t>(i)]; ++k) v *= x[static_cast<size_t>(i)];
            s += v;
        }
        return s;
    }

    double d(int i, const std::array<double, 3>& x) const {
        double s = 0.0;
        for (const auto& t : terms) {
            int ei = t.e[static_cast<size_t>(i)];
            if (ei == 0) continue;
            double v = t.c * ei;
            for (int m = 0; m < 3; ++m) {
                int reps = t.e[static_cast<size_t>(m)] - (m == i ? 1 : 0);
                for (int k = 0; k < reps; ++k) v *= x[static_cast<size_t>(m)];
            }
            s += v;
        }
        return s;
    }

    static Cubic3 random(Rng& rng, double amplitude) {
        Cubic3 c;
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; i + j <= 3; ++j)
                for (int k = 0; i + j + k <= 3; ++k) {
                    if (i + j + k == 0) continue;
                    c.terms.push_back({amplitude * rng.uniform(-1.0, 1.0), {i, j, k}});
                }
        return c;
    }
};

/// Metric of a potential phi(x,y) = sum_l u_l(x) v_l(y) on R^3 x R^3:
/// g = [[0, A],[A^T, 0]] with A_ij = d_i u_l d_j v_l summed over l. This
/// family is exactly flat (A = G(x) F(y)); `extra` adds a non-separable
/// x1^2 y1^2 term to break flatness for negative controls.
inline MetricField potential_metric(std::vector<Cubic3> u, std::vector<Cubic3> v, double extra = 0.0) {
    MetricField g;
    g.value = [u = std::move(u), v = std::move(v), extra](const Point6& p) {
        std::array<double, 3> x{p[0], p[1], p[2]}, y{p[3], p[4], p[5]};
        Matrix<double> m(6, 6);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double a = 0.0;
                for (size_t l = 0; l < u.size(); ++l) a += u[l].d(i, x) * v[l].d(j, y);
                if (extra != 0.0 && i == 0 && j == 0) a += extra * 4.0 * x[0] * y[0];
                m(i, j + 3) = a;
                m(j + 3, i) = a;
            }
        return m;
    };
    return g;
}

}  // namespace ma6
