/// @file stenzel.hpp
/// The Stenzel Calabi-Yau structure on T*S^3, realized on the complex
/// quadric Q^3 = { z in C^4 : z1^2+..+z4^2 = 1 } in the chart z4 != 0.
/// The Kahler potential is phi = f(tau), tau = |z1|^2+..+|z4|^2 restricted
/// to the quadric, with g = f' solving x g^3 + g' g^2 (x^2-1) = c. On
/// T*S^3 = {(u,v): |u|=1, <u,v>=0 } the identification is
/// xi(x+iy) = (x/sqrt(1+|y|^2), y), under which tau = 1 + 2|v|^2 (the
/// displayed 2+2|v|^2 is off by one; the Darboux agreement check pins it).
/// Darboux coordinates on u4 != 0:
///   w_k = 2 f'(tau) sqrt(1+|v|^2) (u_k v4 - v_k u4)/u4,
/// with Omega = sum dw_k ^ du_k; the fields module therefore sees the
/// ordering (w1,w2,w3,u1,u2,u3).

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "ma6/fields.hpp"

namespace ma6 {

using Cx = std::complex<double>;

// ---------------------------------------------------------------------------
// potential ODE

struct StenzelODE {
    double c = 1.0;
    double tau_max = 3.0;
    double step = 1e-4;
    std::vector<double> x, g, gp, f;  // nodes, f' values, f'' values, f values
    double residual_max = 0.0;        // independent FD residual of the relation

    /// Piecewise cubic Hermite interpolation (C^1).
    double f_at(double tau) const { return hermite(f, g, tau); }
    double g_at(double tau) const { return hermite(g, gp, tau); }

    std::function<double(double)> potential() const {
        return [this](double tau) { return f_at(tau); };
    }

private:
    double hermite(const std::vector<double>& val, const std::vector<double>& slope, double tau) const {
        if (tau < x.front() - 1e-12 || tau > x.back() + 1e-12)
            throw Error("tau outside the solved ODE range");
        double s = std::clamp((tau - x.front()) / step, 0.0, static_cast<double>(x.size() - 2));
        auto i = static_cast<size_t>(s);
        double t = (tau - x[i]) / step;
        double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
        double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
        return h00 * val[i] + h10 * step * slope[i] + h01 * val[i + 1] + h11 * step * slope[i + 1];
    }
};

/// Solve x g^3 + g' g^2 (x^2-1) = c from the singular point x = 1. The
/// relation forces g(1) = c^{1/3}; differentiating it repeatedly at x = 1
/// gives g'(1+) = -g/5, g''(1+) = 26 g/175, g'''(1+) = -14 g/75, which
/// feed one explicit series step off the singular point (carried to eps^3
/// so the start-up error stays below the 1e-8 residual budget). Classical
/// RK4 advances the pair (g, f) afterwards.
inline StenzelODE solve_ode(double c, double tau_max, double step = 1e-4) {
    if (c <= 0) throw Error("stenzel ODE requires c > 0");
    if (tau_max <= 1 + 2 * step) throw Error("stenzel ODE requires tau_max > 1");
    StenzelODE ode;
    ode.c = c;
    ode.tau_max = tau_max;
    ode.step = step;
    auto rhs_g = [c](double xx, double gg) { return (c - xx * gg * gg * gg) / (gg * gg * (xx * xx - 1.0)); };

    double g0 = std::cbrt(c);
    ode.x.push_back(1.0);
    ode.g.push_back(g0);
    ode.gp.push_back(-g0 / 5.0);
    ode.f.push_back(0.0);

    // series step off x = 1
    double gpp = 26.0 * g0 / 175.0, gppp = -14.0 * g0 / 75.0;
    double g1 = g0 - (g0 / 5.0) * step + 0.5 * gpp * step * step + gppp * step * step * step / 6.0;
    double f1 = g0 * step - (g0 / 5.0) * step * step / 2.0 + gpp * step * step * step / 6.0;
    ode.x.push_back(1.0 + step);
    ode.g.push_back(g1);
    ode.gp.push_back(rhs_g(1.0 + step, g1));
    ode.f.push_back(f1);

    int n = static_cast<int>(std::ceil((tau_max - 1.0) / step));
    if (n < 5) throw Error("stenzel ODE: tau range too short for the grid step");
    for (int i = 1; i < n; ++i) {
        double xx = ode.x.back(), gg = ode.g.back(), ff = ode.f.back();
        double k1g = rhs_g(xx, gg), k1f = gg;
        double k2g = rhs_g(xx + step / 2, gg + step / 2 * k1g), k2f = gg + step / 2 * k1g;
        double k3g = rhs_g(xx + step / 2, gg + step / 2 * k2g), k3f = gg + step / 2 * k2g;
        double k4g = rhs_g(xx + step, gg + step * k3g), k4f = gg + step * k3g;
        double gn = gg + step / 6 * (k1g + 2 * k2g + 2 * k3g + k4g);
        double fn = ff + step / 6 * (k1f + 2 * k2f + 2 * k3f + k4f);
        if (!std::isfinite(gn) || gn <= 0)
            throw Error("stenzel ODE: g left (0, inf) near x = " + std::to_string(xx + step));
        ode.x.push_back(xx + step);
        ode.g.push_back(gn);
        ode.gp.push_back(rhs_g(xx + step, gn));
        ode.f.push_back(fn);
    }

    // independent residual: fourth-order FD derivative of the stored g
    auto n_nodes = ode.x.size();
    for (size_t i = 0; i < n_nodes; ++i) {
        double d;
        auto gv = [&](size_t j) { return ode.g[j]; };
        if (i >= 2 && i + 2 < n_nodes)
            d = (gv(i - 2) - 8 * gv(i - 1) + 8 * gv(i + 1) - gv(i + 2)) / (12 * step);
        else if (i == 0)
            d = (-25 * gv(0) + 48 * gv(1) - 36 * gv(2) + 16 * gv(3) - 3 * gv(4)) / (12 * step);
        else if (i == 1)
            d = (-3 * gv(0) - 10 * gv(1) + 18 * gv(2) - 6 * gv(3) + gv(4)) / (12 * step);
        else if (i + 1 == n_nodes)
            d = (25 * gv(i) - 48 * gv(i - 1) + 36 * gv(i - 2) - 16 * gv(i - 3) + 3 * gv(i - 4)) / (12 * step);
        else
            d = (3 * gv(i + 1) + 10 * gv(i) - 18 * gv(i - 1) + 6 * gv(i - 2) - gv(i - 3)) / (12 * step);
        double xx = ode.x[i], gg = ode.g[i];
        ode.residual_max = std::max(ode.residual_max, std::fabs(xx * gg * gg * gg + d * gg * gg * (xx * xx - 1.0) - c));
    }
    return ode;
}

// ---------------------------------------------------------------------------
// chart geometry

/// Point of the quadric in the z4 != 0 chart; z4 is the principal square
/// root of 1 - z1^2 - z2^2 - z3^2 (Re z4 >= 0).
struct ChartPoint {
    std::array<Cx, 3> z;
    Cx z4;
    double tau = 0.0;

    double quadric_defect() const {
        Cx s = z4 * z4;
        for (const auto& zk : z) s += zk * zk;
        return std::abs(s - 1.0);
    }
};

inline ChartPoint chart_point(const std::array<Cx, 3>& z, double delta = 0.1) {
    ChartPoint p;
    p.z = z;
    Cx s = 1.0;
    for (const auto& zk : z) s -= zk * zk;
    p.z4 = std::sqrt(s);
    if (std::abs(p.z4) <= delta) throw Error("chart point too close to z4 = 0");
    p.tau = std::norm(p.z4);
    for (const auto& zk : z) p.tau += std::norm(zk);
    return p;
}

inline ChartPoint chart_point(const Point6& real_coords, double delta = 0.1) {
    return chart_point({Cx(real_coords[0], real_coords[3]), Cx(real_coords[1], real_coords[4]),
                        Cx(real_coords[2], real_coords[5])},
                       delta);
}

/// Real chart coordinates (a1,a2,a3,b1,b2,b3) of z = a + i b.
inline Point6 chart_coords(const ChartPoint& p) {
    return {p.z[0].real(), p.z[1].real(), p.z[2].real(), p.z[0].imag(), p.z[1].imag(), p.z[2].imag()};
}

/// Kahler form i d dbar phi with phi = f(tau), assembled from the
/// second-order central-difference Hessian of phi in the 6 real chart
/// coordinates. Returned as a complex form; its imaginary part is a
/// numerical defect.
inline Form<Cx> kahler_form_complex(const ChartPoint& p, const std::function<double(double)>& f_of_tau,
                                    double h = 1e-3, double delta = 0.05) {
    Point6 base = chart_coords(p);
    auto phi = [&](const Point6& q) { return f_of_tau(chart_point(q, delta).tau); };
    // real 6x6 Hessian by central differences
    Matrix<double> hess(6, 6);
    double phi0 = phi(base);
    for (int i = 0; i < 6; ++i) {
        hess(i, i) = (phi(shifted(base, i, h)) - 2 * phi0 + phi(shifted(base, i, -h))) / (h * h);
        for (int j = i + 1; j < 6; ++j) {
            double pp = phi(shifted(shifted(base, i, h), j, h));
            double pm = phi(shifted(shifted(base, i, h), j, -h));
            double mp = phi(shifted(shifted(base, i, -h), j, h));
            double mm = phi(shifted(shifted(base, i, -h), j, -h));
            double v = (pp - pm - mp + mm) / (4 * h * h);
            hess(i, j) = v;
            hess(j, i) = v;
        }
    }
    Form<Cx> omega(2);
    for (int j = 1; j <= 3; ++j) {
        Form<Cx> dz_j(1);
        dz_j.add_term(mask::bit(j), Cx(1, 0));
        dz_j.add_term(mask::bit(j + 3), Cx(0, 1));
        for (int k = 1; k <= 3; ++k) {
            // phi_{j kbar} = ((H_aa + H_bb) + i (H_ab - H_ba))/4
            Cx pjk(0.25 * (hess(j - 1, k - 1) + hess(j + 2, k + 2)),
                   0.25 * (hess(j - 1, k + 2) - hess(j + 2, k - 1)));
            Form<Cx> dzbar_k(1);
            dzbar_k.add_term(mask::bit(k), Cx(1, 0));
            dzbar_k.add_term(mask::bit(k + 3), Cx(0, -1));
            omega = omega + (Cx(0, 1) * pjk) * wedge(dz_j, dzbar_k);
        }
    }
    return omega;
}

inline Form<double> kahler_form(const ChartPoint& p, const StenzelODE& ode, double h = 1e-3) {
    return real_part(kahler_form_complex(p, ode.potential(), h));
}

/// alpha = -(1/z4) dz1 ^ dz2 ^ dz3 on the chart.
inline Form<Cx> holomorphic_volume(const ChartPoint& p, double delta = 1e-6) {
    if (std::abs(p.z4) < delta) throw Error("holomorphic volume undefined at z4 = 0");
    std::array<Form<Cx>, 3> dz;
    for (int j = 1; j <= 3; ++j) {
        dz[static_cast<size_t>(j - 1)] = Form<Cx>(1);
        dz[static_cast<size_t>(j - 1)].add_term(mask::bit(j), Cx(1, 0));
        dz[static_cast<size_t>(j - 1)].add_term(mask::bit(j + 3), Cx(0, 1));
    }
    return (Cx(-1, 0) / p.z4) * wedge(wedge(dz[0], dz[1]), dz[2]);
}

/// alpha as det_C(z, Z1, Z2, Z3) on chart tangents Z'_i in C^3, lifted to
/// the quadric by Z4 = -<z', Z'>/z4. The two formulas must agree.
inline Cx alpha_by_determinant(const ChartPoint& p, const std::array<std::array<Cx, 3>, 3>& chart_tangents) {
    Matrix<Cx> m(4, 4);
    for (int r = 0; r < 3; ++r) m(r, 0) = p.z[static_cast<size_t>(r)];
    m(3, 0) = p.z4;
    for (int c = 0; c < 3; ++c) {
        Cx z4_comp = 0.0;
        for (int r = 0; r < 3; ++r) {
            m(r, c + 1) = chart_tangents[static_cast<size_t>(c)][static_cast<size_t>(r)];
            z4_comp -= p.z[static_cast<size_t>(r)] * chart_tangents[static_cast<size_t>(c)][static_cast<size_t>(r)];
        }
        m(3, c + 1) = z4_comp / p.z4;
    }
    return det(m);
}

/// Complex-multilinear evaluation of the chart form on chart tangents.
inline Cx alpha_by_chart(const ChartPoint& p, const std::array<std::array<Cx, 3>, 3>& chart_tangents) {
    Matrix<Cx> m(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = chart_tangents[static_cast<size_t>(c)][static_cast<size_t>(r)];
    return -det(m) / p.z4;
}

/// r with Omega^3 = r * (i alpha ^ conj(alpha)); Stenzel's Monge-Ampere
/// condition is that r is constant over the chart.
inline double cy_ratio(const ChartPoint& p, const std::function<double(double)>& f_of_tau, double h = 1e-3) {
    Form<Cx> omega = kahler_form_complex(p, f_of_tau, h);
    Form<double> omega_re = real_part(omega);
    double c_top = theta_ratio(wedge(wedge(omega_re, omega_re), omega_re));
    Form<Cx> alpha = holomorphic_volume(p);
    Cx aa = theta_ratio(wedge(alpha, alpha.conjugated()));
    Cx denom = Cx(0, 1) * aa;
    if (std::fabs(denom.imag()) > 1e-6 * std::abs(denom))
        throw Error("alpha ^ conj(alpha) not purely imaginary");
    return c_top / denom.real();
}

inline double cy_ratio(const ChartPoint& p, const StenzelODE& ode, double h = 1e-3) {
    return cy_ratio(p, ode.potential(), h);
}

// ---------------------------------------------------------------------------
// T*S^3 and Darboux coordinates

struct CotangentPoint {
    std::array<double, 4> u;  // |u| = 1
    std::array<double, 4> v;  // <u,v> = 0
};

inline double dot4(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

/// xi^{-1}: (u,v) -> z = x + i y with x = u sqrt(1+|v|^2), y = v.
inline ChartPoint uv_to_chart(const CotangentPoint& q, double delta = 0.05) {
    double s = std::sqrt(1.0 + dot4(q.v, q.v));
    std::array<Cx, 3> z{Cx(q.u[0] * s, q.v[0]), Cx(q.u[1] * s, q.v[1]), Cx(q.u[2] * s, q.v[2])};
    ChartPoint p = chart_point(z, delta);
    // consistency: the principal-branch z4 must match u4, v4 (u4 > 0 side)
    Cx z4_direct(q.u[3] * s, q.v[3]);
    if (std::abs(p.z4 - z4_direct) > 1e-8 * std::max(1.0, std::abs(z4_direct)))
        throw Error("uv_to_chart: point is not on the u4 > 0 chart branch");
    return p;
}

inline double tau_of_uv(const CotangentPoint& q) { return 1.0 + 2.0 * dot4(q.v, q.v); }

/// Darboux chart (w1,w2,w3,u1,u2,u3) on u4 != 0:
/// w_k = 2 f'(tau) sqrt(1+|v|^2) (u_k v4 - v_k u4)/u4 with tau = 1+2|v|^2.
inline Point6 darboux_coords(const CotangentPoint& q, const StenzelODE& ode, double tol = 1e-10) {
    if (std::fabs(dot4(q.u, q.u) - 1.0) > tol) throw Error("darboux_coords: |u| != 1");
    if (std::fabs(dot4(q.u, q.v)) > tol) throw Error("darboux_coords: <u,v> != 0");
    if (std::fabs(q.u[3]) < 1e-8) throw Error("darboux_coords: u4 = 0 is outside the chart");
    double vv = dot4(q.v, q.v);
    double factor = 2.0 * ode.g_at(1.0 + 2.0 * vv) * std::sqrt(1.0 + vv) / q.u[3];
    Point6 out{};
    for (int k = 0; k < 3; ++k)
        out[static_cast<size_t>(k)] =
            factor * (q.u[static_cast<size_t>(k)] * q.v[3] - q.v[static_cast<size_t>(k)] * q.u[3]);
    out[3] = q.u[0];
    out[4] = q.u[1];
    out[5] = q.u[2];
    return out;
}

/// Inverse Darboux chart on the u4 > 0 branch: recover (u,v) from
/// (w1,w2,w3,u1,u2,u3) by a bracketed scalar solve for rho = |v|.
inline CotangentPoint inverse_darboux(const Point6& q, const StenzelODE& ode, double tol = 1e-13) {
    CotangentPoint r;
    double uu = q[3] * q[3] + q[4] * q[4] + q[5] * q[5];
    if (uu >= 1.0 - 1e-10) throw Error("inverse_darboux: |u123| >= 1");
    r.u = {q[3], q[4], q[5], std::sqrt(1.0 - uu)};
    std::array<double, 3> w{q[0], q[1], q[2]};
    double wnorm = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (wnorm < 1e-15) {
        r.v = {0, 0, 0, 0};
        return r;
    }
    auto v_of_rho = [&](double rho, std::array<double, 4>& v) {
        double denom = 2.0 * ode.g_at(1.0 + 2.0 * rho * rho) * std::sqrt(1.0 + rho * rho);
        std::array<double, 3> m;
        for (int k = 0; k < 3; ++k) m[static_cast<size_t>(k)] = w[static_cast<size_t>(k)] * r.u[3] / denom;
        double v4 = r.u[0] * m[0] + r.u[1] * m[1] + r.u[2] * m[2];
        for (int k = 0; k < 3; ++k)
            v[static_cast<size_t>(k)] = (r.u[static_cast<size_t>(k)] * v4 - m[static_cast<size_t>(k)]) / r.u[3];
        v[3] = v4;
        return std::sqrt(dot4(v, v));
    };
    double rho_max = std::sqrt((ode.tau_max - 1.0) / 2.0) - 2.0 * ode.step;
    std::array<double, 4> v{};
    auto fun = [&](double rho) { return v_of_rho(rho, v) - rho; };
    // f(0) >= 0; scan for a sign change, then bisect
    double lo = 0.0, f_lo = fun(lo);
    double hi = rho_max, f_hi = fun(hi);
    if (f_lo < 0) throw Error("inverse_darboux: no bracket at rho = 0 (internal)");
    if (f_hi > 0) throw Error("inverse_darboux: |v| exceeds the solved tau range");
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double f_mid = fun(mid);
        if (f_mid >= 0)
            lo = mid;
        else
            hi = mid;
    }
    v_of_rho(0.5 * (lo + hi), v);
    r.v = v;
    return r;
}

/// The effective 3-form Re(alpha) expressed in the Darboux coordinates
/// (w,u): pull back through the composite (w,u) -> (u,v) -> chart, with a
/// finite-difference Jacobian.
inline FormField stenzel_omega_field(const StenzelODE& ode, double field_h = 1e-3, double jac_h = 1e-5) {
    FormField f;
    f.degree = 3;
    f.h = field_h;
    f.value = [ode, jac_h](const Point6& q) {
        auto chart_of = [&ode](const Point6& qq) { return chart_coords(uv_to_chart(inverse_darboux(qq, ode))); };
        ChartPoint center = uv_to_chart(inverse_darboux(q, ode));
        Form<Cx> alpha = holomorphic_volume(center);
        std::vector<Vec6<Cx>> cols(6);
        for (int c = 0; c < 6; ++c) {
            Point6 hi = chart_of(shifted(q, c, jac_h)), lo = chart_of(shifted(q, c, -jac_h));
            for (int r = 0; r < 6; ++r)
                cols[static_cast<size_t>(c)][static_cast<size_t>(r)] =
                    Cx((hi[static_cast<size_t>(r)] - lo[static_cast<size_t>(r)]) / (2 * jac_h), 0.0);
        }
        Form<double> out(3);
        for (unsigned m = 0; m < 64; ++m) {
            if (mask::degree(static_cast<Mask>(m)) != 3) continue;
            auto idx = mask::indices(static_cast<Mask>(m));
            std::vector<Vec6<Cx>> sel{cols[static_cast<size_t>(idx[0] - 1)], cols[static_cast<size_t>(idx[1] - 1)],
                                      cols[static_cast<size_t>(idx[2] - 1)]};
            Cx v = evaluate(alpha, std::span<const Vec6<Cx>>(sel));
            if (v.real() != 0.0) out.add_term(static_cast<Mask>(m), v.real());
        }
        return out;
    };
    return f;
}

// ---------------------------------------------------------------------------
// report

struct StenzelReport {
    double c = 1.0;
    double ode_residual = 0.0;
    double cy_spread = 0.0;  // (max-min)/median of the CY ratio over chart points
    double lambda_low = 0.0, lambda_high = 0.0;
    CurvatureReport constancy;
    double flat_noise_floor = 0.0;
    bool nonflat_verdict = false;  // curvature exceeds 10x the flat noise floor
    std::size_t chart_samples = 0, darboux_samples = 0;
};

inline CotangentPoint random_cotangent_point(Rng& rng, double v_lo = 0.15, double v_hi = 0.7) {
    CotangentPoint q;
    for (;;) {
        double u4 = rng.uniform(0.55, 0.95);
        double rest = std::sqrt(1.0 - u4 * u4);
        std::array<double, 3> dir{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        double n = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
        if (n < 1e-3) continue;
        q.u = {rest * dir[0] / n, rest * dir[1] / n, rest * dir[2] / n, u4};
        break;
    }
    for (;;) {
        std::array<double, 4> raw{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                  rng.uniform(-1.0, 1.0)};
        double proj = dot4(raw, q.u);
        for (int i = 0; i < 4; ++i) raw[static_cast<size_t>(i)] -= proj * q.u[static_cast<size_t>(i)];
        double n = std::sqrt(dot4(raw, raw));
        if (n < 1e-3) continue;
        double target = rng.uniform(v_lo, v_hi);
        for (int i = 0; i < 4; ++i) q.v[static_cast<size_t>(i)] = raw[static_cast<size_t>(i)] * target / n;
        break;
    }
    return q;
}

inline ChartPoint random_chart_point(Rng& rng, double box = 0.35, double delta = 0.1) {
    for (;;) {
        std::array<Cx, 3> z;
        for (auto& zk : z) zk = Cx(rng.uniform(-box, box), rng.uniform(-box, box));
        try {
            return chart_point(z, delta);
        } catch (const Error&) {
            continue;  // too close to the chart boundary; redraw
        }
    }
}

/// End-to-end Stenzel verdict: the structure is closed (closedness defects
/// at FD noise level) but q_omega is curved, so the report must come back
/// NotLocallyConstant with curvature well above the flat-pipeline noise
/// floor.
inline StenzelReport stenzel_report(double c, double tau_max, std::size_t samples, std::uint64_t seed,
                                    double ode_step = 1e-4, double field_h = 1e-3) {
    StenzelODE ode = solve_ode(c, tau_max, ode_step);
    StenzelReport rep;
    rep.c = c;
    rep.ode_residual = ode.residual_max;

    Rng rng(seed);
    // CY ratio constancy over chart points
    std::vector<double> ratios;
    rep.chart_samples = samples;
    for (std::size_t i = 0; i < samples; ++i) ratios.push_back(cy_ratio(random_chart_point(rng), ode, field_h));
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted[sorted.size() / 2];
    rep.cy_spread = (sorted.back() - sorted.front()) / std::fabs(median);

    // local constancy in Darboux coordinates
    std::size_t n_darboux = std::min<std::size_t>(samples, 12);
    rep.darboux_samples = n_darboux;
    std::vector<Point6> pts;
    for (std::size_t i = 0; i < n_darboux; ++i)
        pts.push_back(darboux_coords(random_cotangent_point(rng), ode));
    FormField wf = stenzel_omega_field(ode, field_h);
    ConstancyTolerances tol;
    tol.closedness = 1e-3;
    tol.curvature_rel = 1e-3;
    tol.effectiveness = 1e-4;
    rep.constancy = local_constancy_report(wf, pts, tol);
    rep.lambda_low = rep.constancy.lambda_low;
    rep.lambda_high = rep.constancy.lambda_high;

    // flat-pipeline noise floor: a separable (exactly flat) potential
    // metric pushed through the same FD steps
    Rng flat_rng(7);
    std::vector<Cubic3> us, vs;
    for (int l = 0; l < 3; ++l) {
        Cubic3 ul = Cubic3::random(flat_rng, 0.15);
        ul.terms.push_back({1.0, {l == 0, l == 1, l == 2}});
        Cubic3 vl = Cubic3::random(flat_rng, 0.15);
        vl.terms.push_back({1.0, {l == 0, l == 1, l == 2}});
        us.push_back(ul);
        vs.push_back(vl);
    }
    MetricField flat = potential_metric(us, vs);
    flat.h = field_h;
    for (std::size_t i = 0; i < n_darboux; ++i) {
        Point6 p;
        for (auto& xi : p) xi = flat_rng.uniform(-0.3, 0.3);
        rep.flat_noise_floor = std::max(rep.flat_noise_floor, riemann(flat, p).max_abs());
    }
    rep.nonflat_verdict = rep.constancy.max_riemann > 10.0 * rep.flat_noise_floor &&
                          rep.constancy.verdict == Verdict::NotLocallyConstant;
    return rep;
}

}  // namespace ma6
