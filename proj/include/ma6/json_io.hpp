/// @file json_io.hpp
/// JSON interchange: the form format
///   {"degree": k, "mode": "exact"|"float",
///    "terms": [{"idx": [i1,...,ik], "c": "p/q" | number}, ...]}
/// with 1-based strictly increasing indices, plus report builders. Exact
/// scalars are serialized as "p/q" strings, so exact round-trips are
/// bit-exact. Reports embed the frozen convention constants under
/// "conventions" so downstream comparisons are self-describing.

#pragma once

#include <variant>

#include <json.hpp>

#include "ma6/hitchin.hpp"

namespace ma6 {

using Json = nlohmann::json;

inline Json form_to_json(const Form<Rational>& w) {
    Json terms = Json::array();
    for (const auto& [m, c] : w.terms()) {
        Json t;
        t["idx"] = mask::indices(m);
        t["c"] = to_string(c);
        terms.push_back(t);
    }
    return Json{{"degree", w.degree()}, {"mode", "exact"}, {"terms", terms}};
}

inline Json form_to_json(const Form<double>& w) {
    Json terms = Json::array();
    for (const auto& [m, c] : w.terms()) {
        Json t;
        t["idx"] = mask::indices(m);
        t["c"] = c;
        terms.push_back(t);
    }
    return Json{{"degree", w.degree()}, {"mode", "float"}, {"terms", terms}};
}

using ParsedForm = std::variant<Form<Rational>, Form<double>>;

inline ParsedForm form_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("degree") || !j.contains("terms"))
        throw Error("form JSON needs {degree, mode, terms}");
    int degree = j.at("degree").get<int>();
    std::string mode = j.value("mode", "exact");
    auto read_terms = [&](auto make_scalar, auto& form) {
        for (const auto& t : j.at("terms")) {
            std::vector<int> idx = t.at("idx").get<std::vector<int>>();
            for (size_t i = 1; i < idx.size(); ++i)
                if (idx[i] <= idx[i - 1]) throw Error("form term indices must be strictly increasing");
            if (static_cast<int>(idx.size()) != degree) throw Error("form term arity does not match degree");
            form.add_term(mask::from_indices(idx), make_scalar(t.at("c")));
        }
    };
    if (mode == "exact") {
        Form<Rational> w(degree);
        read_terms(
            [](const Json& c) -> Rational {
                if (c.is_string()) return parse_rational(c.get<std::string>());
                if (c.is_number_integer()) return Rational(c.get<long long>());
                throw Error("exact form coefficients must be \"p/q\" strings or integers");
            },
            w);
        return w;
    }
    if (mode == "float") {
        Form<double> w(degree);
        read_terms([](const Json& c) -> double { return c.get<double>(); }, w);
        return w;
    }
    throw Error("form mode must be \"exact\" or \"float\"");
}

inline Json signature_to_json(const Signature& s) { return Json::array({s.pos, s.neg, s.zero}); }

/// Frozen convention constants; every normalization ambiguity of the
/// source material is resolved here once and embedded in reports.
inline Json conventions_json() {
    Json c;
    c["theta"] = "e1*^e2*^e3*^f1*^f2*^f3* = -Omega^3/6";
    c["contractionLaw"] = "xi(K X) theta = xi ^ i_X omega ^ omega";
    c["bivector"] = "X_Omega = sum e_i ^ f_i with i_{X^Y} = i_Y o i_X, so bot(Omega) = 3";
    c["qKOverQLR"] = kQKOverQLR;
    c["lambdaOfRepresentatives"] = Json{{"Row1", "gamma^2"}, {"Row2", "-4*gamma^2"}, {"Row3", "-4*gamma^2"},
                                        {"Row4..Row9", "0"}};
    c["omegaWedgeDualOverTheta"] = "-2*sqrt(|lambda|)";
    c["dualDualSignHyperbolic"] = -1;
    c["charPolynomial"] = "(i_X omega - xi Omega)^3 = -xi (xi^2 - qLR(X,X)) Omega^3 (algebraic, no |.|)";
    return c;
}

template <typename S>
Json scalar_to_json(const S& v) {
    if constexpr (std::is_same_v<S, Rational>)
        return to_string(v);
    else
        return v;
}

/// Full invariants report of a 3-form: effectiveness, lambda, signature,
/// orbit, decomposition (when nondegenerate) and dual.
template <typename S>
Json invariants_json(const Form<S>& w, double eps = 1e-10) {
    Json rep;
    rep["mode"] = ScalarTraits<S>::mode();
    rep["degree"] = w.degree();
    if (!ScalarTraits<S>::exact) rep["tolerance"] = eps;
    bool eff = is_effective(w, eps);
    rep["effective"] = eff;
    if (w.degree() != 3) return rep;
    rep["lambda"] = scalar_to_json(pfaffian(w));
    if (!eff) return rep;
    auto q = quadratic_invariants(w, eps);
    rep["signatureQK"] = signature_to_json(signature(q.qK, eps));
    rep["qKOverQLRCheck"] = (q.qK == ScalarTraits<S>::from_int(kQKOverQLR) * q.qLR);
    OrbitClass oc = classify(w, eps);
    rep["orbit"] = oc.label();
    rep["signVariant"] = oc.sign_variant;
    rep["annihilatorDim"] = oc.annihilator_dimension;

    S lam = pfaffian(w);
    if (!ScalarTraits<S>::is_zero(lam, ScalarTraits<S>::exact ? 0.0 : eps)) {
        Json dj;
        try {
            Decomposition<S> d = decompose(w, eps);
            dj["kind"] = d.hyperbolic ? "hyperbolic" : "elliptic";
            dj["mode"] = ScalarTraits<S>::mode();
            dj[d.hyperbolic ? "alpha" : "alphaRe"] = form_to_json(d.alpha);
            dj[d.hyperbolic ? "beta" : "alphaIm"] = form_to_json(d.beta);
            dj["orientation"] = scalar_to_json(d.orientation);
            dj["alphaAnnihilatorDim"] = d.hyperbolic
                                            ? annihilator_dim(d.alpha, eps)
                                            : [&] {
                                                  if constexpr (ScalarTraits<S>::exact) {
                                                      Form<Gaussian> a = to_gaussian(d.alpha) +
                                                                         Gaussian(Rational(0), Rational(1)) * to_gaussian(d.beta);
                                                      return annihilator_dim(a, eps);
                                                  } else {
                                                      Form<std::complex<double>> a =
                                                          to_complex_form(d.alpha) +
                                                          std::complex<double>(0, 1) * to_complex_form(d.beta);
                                                      return annihilator_dim(a, eps);
                                                  }
                                              }();
            if (d.hyperbolic) dj["betaAnnihilatorDim"] = annihilator_dim(d.beta, eps);
            rep["decomposition"] = dj;
            rep["dual"] = form_to_json(dual(w, eps));
        } catch (const Error& e) {
            if constexpr (ScalarTraits<S>::exact) {
                // |lambda| not a perfect square: report the float decomposition
                Form<double> wf = to_float(w);
                Json sub = invariants_json(wf, 1e-10);
                if (sub.contains("decomposition")) {
                    rep["decomposition"] = sub["decomposition"];
                    rep["dual"] = sub["dual"];
                    rep["decompositionNote"] = e.what();
                }
            } else {
                rep["decompositionError"] = e.what();
            }
        }
        Normalized<S> n = normalize(w, eps);
        rep["normalized"] = Json{{"form", form_to_json(n.form)}, {"residualQuartic", scalar_to_json(n.residual_quartic)}};
    }
    rep["conventions"] = conventions_json();
    return rep;
}

}  // namespace ma6
