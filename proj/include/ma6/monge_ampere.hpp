/// @file monge_ampere.hpp
/// Monge-Ampere equations on T*R^3 seen as effective 3-forms on R^6 with
/// coordinates (x1,x2,x3,p1,p2,p3) mapped to basis indices (1..3, 4..6).
/// Residual evaluation on candidate solutions pulls the form back under
/// x -> (x, grad f(x)); generalized solutions are parametrized surfaces on
/// which both Omega and omega pull back to zero. The printable PDE of a
/// constant-coefficient equation is derived by pulling the form back with
/// an indeterminate symmetric Hessian, never hard-coded.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "ma6/fields.hpp"

namespace ma6 {

using Point3 = std::array<double, 3>;

// ---------------------------------------------------------------------------
// equations

struct MAEquation {
    std::string name;
    Rational gamma = Rational(0);
    Form<Rational> omega{3};
    /// Pointwise evaluation on T*R^3; constant for the built-ins.
    std::function<Form<double>(const Point6&)> omega_at;

    Form<double> omega_float() const { return to_float(omega); }
};

inline MAEquation make_constant_equation(std::string name, Form<Rational> w, Rational gamma = Rational(0)) {
    MAEquation eq;
    eq.name = std::move(name);
    eq.gamma = std::move(gamma);
    eq.omega = std::move(w);
    Form<double> wf = to_float(eq.omega);
    eq.omega_at = [wf](const Point6&) { return wf; };
    return eq;
}

/// The linear symplectic change of variables carrying the Chynoweth-Sewell
/// form to dp^dq^dh - dx^dy^dz: phi(x,y,z,p,q,h) = (x,y,h,p,q,gamma*h - z).
inline Matrix<Rational> chynoweth_sewell_phi(const Rational& gamma) {
    Matrix<Rational> m(6, 6);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 5) = 1;
    m(3, 3) = 1;
    m(4, 4) = 1;
    m(5, 2) = -1;
    m(5, 5) = gamma;
    return m;
}

/// Built-in constant-coefficient equations. gamma = 0 is allowed only for
/// chynoweth-sewell (the original equation); elsewhere it degenerates the
/// structure.
inline MAEquation builtin_equation(const std::string& name, const Rational& gamma) {
    using F = Form<Rational>;
    auto mono = [](std::vector<int> idx, Rational c) { return F::monomial(std::move(idx), std::move(c)); };
    if (name == "hess") {
        if (gamma == 0) throw Error("builtin hess requires gamma != 0");
        return make_constant_equation(name, mono({4, 5, 6}, 1) + mono({1, 2, 3}, -gamma), gamma);
    }
    if (name == "special-lagrangian") {
        if (gamma == 0) throw Error("builtin special-lagrangian requires gamma != 0");
        return make_constant_equation(name, table1_representative(3, gamma), gamma);
    }
    if (name == "pseudo") {
        if (gamma == 0) throw Error("builtin pseudo requires gamma != 0");
        return make_constant_equation(name, table1_representative(2, gamma), gamma);
    }
    if (name == "chynoweth-sewell") {
        return make_constant_equation(name, mono({3, 4, 5}, 1) + mono({1, 2, 6}, 1) + mono({1, 2, 3}, -gamma), gamma);
    }
    throw Error("unknown built-in equation: " + name);
}

// ---------------------------------------------------------------------------
// candidate solutions and parametrized surfaces

struct CandidateSolution {
    std::function<double(const Point3&)> value;  // optional, not used by the residual
    std::function<std::array<double, 3>(const Point3&)> grad;
    std::function<Matrix<double>(const Point3&)> hess;  // 3x3 symmetric
};

/// Derivative access by central differences when only values are known.
inline CandidateSolution solution_from_value(std::function<double(const Point3&)> value, double h = 1e-4) {
    CandidateSolution s;
    s.value = value;
    auto at = [value](Point3 p, int i, double dh) {
        p[static_cast<size_t>(i)] += dh;
        return value(p);
    };
    s.grad = [value, at, h](const Point3& p) {
        std::array<double, 3> g;
        for (int i = 0; i < 3; ++i) g[static_cast<size_t>(i)] = (at(p, i, h) - at(p, i, -h)) / (2 * h);
        return g;
    };
    s.hess = [value, at, h](const Point3& p) {
        Matrix<double> m(3, 3);
        for (int i = 0; i < 3; ++i) {
            m(i, i) = (at(p, i, h) - 2 * value(p) + at(p, i, -h)) / (h * h);
            for (int j = i + 1; j < 3; ++j) {
                Point3 pp = p, pm = p, mp = p, mm = p;
                pp[static_cast<size_t>(i)] += h; pp[static_cast<size_t>(j)] += h;
                pm[static_cast<size_t>(i)] += h; pm[static_cast<size_t>(j)] -= h;
                mp[static_cast<size_t>(i)] -= h; mp[static_cast<size_t>(j)] += h;
                mm[static_cast<size_t>(i)] -= h; mm[static_cast<size_t>(j)] -= h;
                double v = (value(pp) - value(pm) - value(mp) + value(mm)) / (4 * h * h);
                m(i, j) = v;
                m(j, i) = v;
            }
        }
        return m;
    };
    return s;
}

/// Residual of (df)*(omega) at x: pull omega back under x -> (x, grad f),
/// i.e. substitute dp_i = sum_j H_ij dx_j and read the dx1^dx2^dx3
/// coefficient. For the hess equation this is det(Hess f) - gamma.
inline double residual(const MAEquation& eq, const CandidateSolution& f, const Point3& x) {
    auto g = f.grad(x);
    Matrix<double> h = f.hess(x);
    Point6 p{x[0], x[1], x[2], g[0], g[1], g[2]};
    Form<double> w = eq.omega_at ? eq.omega_at(p) : eq.omega_float();
    std::vector<Vec6<double>> cols(3);
    for (int j = 0; j < 3; ++j) {
        Vec6<double> c{0, 0, 0, 0, 0, 0};
        c[static_cast<size_t>(j)] = 1.0;
        for (int i = 0; i < 3; ++i) c[static_cast<size_t>(i + 3)] = h(i, j);
        cols[static_cast<size_t>(j)] = c;
    }
    return evaluate(w, std::span<const Vec6<double>>(cols));
}

struct ParamSurface {
    std::function<Point6(const Point3&)> map;
    std::function<Matrix<double>(const Point3&)> jacobian;  // 6x3; empty -> central differences
    double h = 1e-5;
};

inline Matrix<double> surface_jacobian(const ParamSurface& l, const Point3& s) {
    if (l.jacobian) return l.jacobian(s);
    Matrix<double> j(6, 3);
    for (int c = 0; c < 3; ++c) {
        Point3 sp = s, sm = s;
        sp[static_cast<size_t>(c)] += l.h;
        sm[static_cast<size_t>(c)] -= l.h;
        Point6 hi = l.map(sp), lo = l.map(sm);
        for (int r = 0; r < 6; ++r) j(r, c) = (hi[static_cast<size_t>(r)] - lo[static_cast<size_t>(r)]) / (2 * l.h);
    }
    return j;
}

/// Graph of df: the canonical generalized solution of an explicit solution.
inline ParamSurface graph_surface(const CandidateSolution& f) {
    ParamSurface l;
    l.map = [f](const Point3& s) {
        auto g = f.grad(s);
        return Point6{s[0], s[1], s[2], g[0], g[1], g[2]};
    };
    l.jacobian = [f](const Point3& s) {
        Matrix<double> j(6, 3);
        Matrix<double> h = f.hess(s);
        for (int c = 0; c < 3; ++c) {
            j(c, c) = 1.0;
            for (int r = 0; r < 3; ++r) j(r + 3, c) = h(r, c);
        }
        return j;
    };
    return l;
}

struct GeneralizedReport {
    std::size_t sample_count = 0;
    double max_symplectic_pullback = 0.0;  // max |Omega(J_i, J_j)|
    double max_omega_pullback = 0.0;       // max |omega(J_1,J_2,J_3)|
    std::vector<Point3> rank_deficient;
    double tolerance = 0.0;
    bool pass = false;
};

/// A generalized solution is a Lagrangian surface on which omega vanishes:
/// both pullbacks must be ~0 at every sample. Rank-deficient Jacobians are
/// flagged, not fatal.
inline GeneralizedReport check_generalized(const MAEquation& eq, const ParamSurface& l,
                                           const std::vector<Point3>& samples, double tol = 1e-6) {
    GeneralizedReport rep;
    rep.sample_count = samples.size();
    rep.tolerance = tol;
    for (const Point3& s : samples) {
        Matrix<double> j = surface_jacobian(l, s);
        if (rank(j, 1e-8) < 3) {
            rep.rank_deficient.push_back(s);
            continue;
        }
        std::vector<Vec6<double>> cols(3);
        for (int c = 0; c < 3; ++c)
            for (int r = 0; r < 6; ++r) cols[static_cast<size_t>(c)][static_cast<size_t>(r)] = j(r, c);
        Point6 p = l.map(s);
        Form<double> omega0 = omega_form<double>();
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                std::vector<Vec6<double>> pair{cols[static_cast<size_t>(a)], cols[static_cast<size_t>(b)]};
                double v = evaluate(omega0, std::span<const Vec6<double>>(pair));
                rep.max_symplectic_pullback = std::max(rep.max_symplectic_pullback, std::fabs(v));
            }
        Form<double> w = eq.omega_at ? eq.omega_at(p) : eq.omega_float();
        double v = evaluate(w, std::span<const Vec6<double>>(cols));
        rep.max_omega_pullback = std::max(rep.max_omega_pullback, std::fabs(v));
    }
    rep.pass = rep.rank_deficient.empty() && rep.max_symplectic_pullback < tol && rep.max_omega_pullback < tol;
    return rep;
}

// ---------------------------------------------------------------------------
// built-in solutions from the worked examples

/// f(x,y,z) = sqrt((x^2+2y)^3)/3 - z^2/2, regular solution of the
/// Chynoweth-Sewell equation with gamma = 0 on x^2 + 2y > 0.
inline CandidateSolution cs_regular_solution() {
    CandidateSolution s;
    auto u_of = [](const Point3& p) {
        double u = p[0] * p[0] + 2.0 * p[1];
        if (u <= 0) throw Error("cs-regular solution evaluated outside x^2+2y > 0");
        return u;
    };
    s.value = [u_of](const Point3& p) { return std::pow(u_of(p), 1.5) / 3.0 - 0.5 * p[2] * p[2]; };
    s.grad = [u_of](const Point3& p) {
        double su = std::sqrt(u_of(p));
        return std::array<double, 3>{p[0] * su, su, -p[2]};
    };
    s.hess = [u_of](const Point3& p) {
        double u = u_of(p), su = std::sqrt(u);
        Matrix<double> h(3, 3);
        h(0, 0) = su + p[0] * p[0] / su;
        h(0, 1) = h(1, 0) = p[0] / su;
        h(1, 1) = 1.0 / su;
        h(2, 2) = -1.0;
        return h;
    };
    return s;
}

/// f(x,y,z) = int_a^{sqrt(xy+yz+zx)} (b + 4 t^3)^{1/3} dt, regular solution
/// of hess(f) = 1 on xy+yz+zx > 0.
inline CandidateSolution hess_integral_solution(double a, double b) {
    CandidateSolution s;
    auto sigma_of = [](const Point3& p) {
        double v = p[0] * p[1] + p[1] * p[2] + p[2] * p[0];
        if (v <= 0) throw Error("hess-integral solution evaluated outside xy+yz+zx > 0");
        return v;
    };
    auto phi = [b](double t) { return std::cbrt(b + 4.0 * t * t * t); };
    auto dphi = [b](double t) {
        double w = b + 4.0 * t * t * t;
        return 4.0 * t * t * std::pow(w, -2.0 / 3.0);
    };
    s.value = [sigma_of, phi, a](const Point3& p) {
        // composite Simpson; the value is informational only
        double hi = std::sqrt(sigma_of(p));
        int n = 64;
        double step = (hi - a) / n, acc = phi(a) + phi(hi);
        for (int i = 1; i < n; ++i) acc += phi(a + i * step) * (i % 2 ? 4.0 : 2.0);
        return acc * step / 3.0;
    };
    s.grad = [sigma_of, phi](const Point3& p) {
        double sg = sigma_of(p), sq = std::sqrt(sg);
        double c = phi(sq) / (2.0 * sq);
        return std::array<double, 3>{c * (p[1] + p[2]), c * (p[0] + p[2]), c * (p[0] + p[1])};
    };
    s.hess = [sigma_of, phi, dphi](const Point3& p) {
        double sg = sigma_of(p), sq = std::sqrt(sg);
        std::array<double, 3> ds{p[1] + p[2], p[0] + p[2], p[0] + p[1]};  // grad sigma
        Matrix<double> h(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double si = ds[static_cast<size_t>(i)] / (2.0 * sq);
                double sj = ds[static_cast<size_t>(j)] / (2.0 * sq);
                double sij = (i == j ? 0.0 : 1.0) / (2.0 * sq) -
                             ds[static_cast<size_t>(i)] * ds[static_cast<size_t>(j)] / (4.0 * sg * sq);
                h(i, j) = dphi(sq) * si * sj + phi(sq) * sij;
            }
        return h;
    };
    return s;
}

/// The explicit generalized solution of the Chynoweth-Sewell equation:
/// L = (x, y, (x+y)a, (y+z)a, (z+x)a, gamma (x+y)a - z) with
/// a = ((b/(xy+yz+zx)^{3/2} + 4)^{1/3})/2.
inline ParamSurface chynoweth_sewell_surface(double b, double gamma) {
    ParamSurface l;
    l.map = [b, gamma](const Point3& s) {
        double sg = s[0] * s[1] + s[1] * s[2] + s[2] * s[0];
        if (sg <= 0) throw Error("chynoweth-sewell surface parameter outside xy+yz+zx > 0");
        double a = 0.5 * std::cbrt(b / std::pow(sg, 1.5) + 4.0);
        return Point6{s[0], s[1], (s[0] + s[1]) * a, (s[1] + s[2]) * a, (s[2] + s[0]) * a,
                      gamma * (s[0] + s[1]) * a - s[2]};
    };
    return l;
}

// ---------------------------------------------------------------------------
// symbolic Hessian pullback: the printable PDE

/// Polynomial over Q in the six Hessian entries H11,H12,H13,H22,H23,H33
/// (variable ids 0..5, monomials as sorted id lists).
struct HessPolynomial {
    std::map<std::vector<int>, Rational> terms;

    void add(const std::vector<int>& mono, const Rational& c) {
        if (c == 0) return;
        auto it = terms.find(mono);
        if (it == terms.end())
            terms[mono] = c;
        else {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    friend HessPolynomial operator*(const HessPolynomial& x, const HessPolynomial& y) {
        HessPolynomial r;
        for (const auto& [mx, cx] : x.terms)
            for (const auto& [my, cy] : y.terms) {
                std::vector<int> m = mx;
                m.insert(m.end(), my.begin(), my.end());
                std::sort(m.begin(), m.end());
                r.add(m, cx * cy);
            }
        return r;
    }
    friend HessPolynomial operator+(const HessPolynomial& x, const HessPolynomial& y) {
        HessPolynomial r = x;
        for (const auto& [m, c] : y.terms) r.add(m, c);
        return r;
    }
    friend HessPolynomial operator-(const HessPolynomial& x, const HessPolynomial& y) {
        HessPolynomial r = x;
        for (const auto& [m, c] : y.terms) r.add(m, -c);
        return r;
    }

    static HessPolynomial constant(const Rational& c) {
        HessPolynomial p;
        p.add({}, c);
        return p;
    }
    static HessPolynomial variable(int i, int j) {  // 1-based, symmetric
        if (i > j) std::swap(i, j);
        static const int id[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
        HessPolynomial p;
        p.add({id[i - 1][j - 1]}, Rational(1));
        return p;
    }

    double eval(const Matrix<double>& h) const {
        static const std::pair<int, int> var_of[6] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
        double s = 0.0;
        for (const auto& [m, c] : terms) {
            double v = to_double(c);
            for (int id : m) v *= h(var_of[id].first, var_of[id].second);
            s += v;
        }
        return s;
    }
};

/// Pull the constant form back with an indeterminate symmetric Hessian:
/// the dx1^dx2^dx3 coefficient as a polynomial in the H_ij. The printed
/// PDE (and any derived sign pattern) comes from here mechanically.
inline HessPolynomial residual_polynomial(const Form<Rational>& w) {
    if (w.degree() != 3) throw Error("residual polynomial expects a 3-form");
    HessPolynomial total;
    for (const auto& [m, c] : w.terms()) {
        auto idx = mask::indices(m);
        // rows of the 3x3 minor: row for dx_i is the unit row e_i, row for
        // dp_i is (H_i1, H_i2, H_i3)
        std::array<std::array<HessPolynomial, 3>, 3> rows;
        for (int r = 0; r < 3; ++r) {
            int id = idx[static_cast<size_t>(r)];
            for (int col = 1; col <= 3; ++col)
                rows[static_cast<size_t>(r)][static_cast<size_t>(col - 1)] =
                    id <= 3 ? HessPolynomial::constant(Rational(id == col ? 1 : 0))
                            : HessPolynomial::variable(id - 3, col);
        }
        HessPolynomial detp;
        for (int a = 0; a < 3; ++a) {
            int b = (a + 1) % 3, d = (a + 2) % 3;
            HessPolynomial cof = rows[1][static_cast<size_t>(b)] * rows[2][static_cast<size_t>(d)] -
                                 rows[1][static_cast<size_t>(d)] * rows[2][static_cast<size_t>(b)];
            HessPolynomial signed_cof = rows[0][static_cast<size_t>(a)] * cof;
            detp = detp + signed_cof;
        }
        total = total + HessPolynomial::constant(c) * detp;
    }
    return total;
}

/// Render the residual polynomial as "... = 0" with f_ij for the second
/// partials of f.
inline std::string pde_string(const HessPolynomial& p) {
    static const char* names[6] = {"f_11", "f_12", "f_13", "f_22", "f_23", "f_33"};
    if (p.terms.empty()) return "0 = 0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms) {
        Rational a = c;
        bool neg = a < 0;
        if (neg) a = -a;
        out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
        first = false;
        std::string factors;
        int run = 0;
        for (size_t i = 0; i <= m.size(); ++i) {
            if (i < m.size() && i > 0 && m[i] == m[i - 1]) {
                ++run;
                continue;
            }
            if (i > 0) {
                if (!factors.empty()) factors += "*";
                factors += names[m[i - 1]];
                if (run > 0) factors += "^" + std::to_string(run + 1);
            }
            run = 0;
        }
        if (factors.empty())
            out += to_string(a);
        else if (a == 1)
            out += factors;
        else
            out += to_string(a) + "*" + factors;
    }
    return out + " = 0";
}

// ---------------------------------------------------------------------------
// geometric structure of a constant-coefficient equation

struct StructureReport {
    std::string equation;
    std::string pde;
    bool elliptic = false;
    Rational lambda;
    Signature sig;
    OrbitClass orbit;
    Normalized<Rational> normalized{Form<Rational>(3), Rational(1)};
    Decomposition<Rational> dec;
    Form<Rational> dual_form{3};
    /// hyperbolic: alpha^beta/theta of the normalized form; the paper's
    /// closed real case states alpha^beta = -Omega^3/6, i.e. ratio 1.
    std::optional<Rational> alpha_beta_over_theta;
    /// elliptic: c with Omega^3 = c * i * alpha^conj(alpha), alpha the
    /// almost Calabi-Yau 4/3 (w + i K* w) of the normalized form. The
    /// paper states c = -3/4.
    std::optional<Rational> cy_constant;
    /// elliptic: alpha^conj(alpha)/(i theta) for the Hitchin decomposition
    /// alpha of the normalized form.
    std::optional<Rational> dec_alpha_conj_over_itheta;
};

inline StructureReport geometric_structure(const MAEquation& eq) {
    StructureReport rep;
    rep.equation = eq.name;
    rep.pde = pde_string(residual_polynomial(eq.omega));
    Rational lam = pfaffian(eq.omega);
    if (lam == 0) throw Error("degenerate structure");
    rep.lambda = lam;
    rep.elliptic = lam < 0;
    rep.orbit = classify(eq.omega);
    rep.sig = rep.orbit.sig;
    rep.normalized = normalize(eq.omega);
    rep.dec = decompose(eq.omega);
    rep.dual_form = dual(eq.omega);

    Rational sqrt_abs = detail::sqrt_abs_lambda<Rational>(lam);
    if (!rep.elliptic) {
        rep.alpha_beta_over_theta = rep.dec.orientation / sqrt_abs;
    } else {
        rep.dec_alpha_conj_over_itheta = rep.dec.orientation / sqrt_abs;
        // almost Calabi-Yau volume form of the normalized structure,
        // evaluated scale-free on the unnormalized exact form
        Rational s3 = sqrt_abs * sqrt_abs * sqrt_abs;
        Form<Rational> kw = pullback(k_endomorphism(eq.omega), eq.omega) / s3;
        Form<Gaussian> a = to_gaussian(eq.omega) + Gaussian(Rational(0), Rational(1)) * to_gaussian(kw);
        Gaussian prod = theta_ratio(wedge(a, a.conjugated()));
        if (prod.re != 0) throw Error("alpha^conj(alpha) not purely imaginary (internal)");
        Rational y_norm = Rational(16, 9) * prod.im / sqrt_abs;
        if (y_norm == 0) throw Error("degenerate Calabi-Yau volume (internal)");
        rep.cy_constant = Rational(6) / y_norm;
    }
    return rep;
}

}  // namespace ma6
