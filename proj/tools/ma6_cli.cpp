// ma6: Monge-Ampere structures on the symplectic R^6.
//
// Subcommands: classify, invariants, decompose, structure, verify-solution,
// verify-generalized, local-constancy, stenzel, matode. JSON in, JSON out;
// exit 0 on verified/classified, 1 on a failed check, 2 on input errors.
// Runs are deterministic for fixed inputs, flags and seeds.

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "ma6/json_io.hpp"
#include "ma6/matode.hpp"
#include "ma6/monge_ampere.hpp"
#include "ma6/stenzel.hpp"

namespace {

using ma6::Error;
using ma6::Json;

int g_exit = 0;

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(std::string("malformed JSON in ") + path + ": " + e.what());
    }
}

void emit(const Json& report, const std::string& json_path) {
    std::string text = report.dump(2);
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw Error("cannot write " + json_path);
        out << text << "\n";
    }
    std::cout << text << "\n";
}

ma6::ParsedForm load_form(const std::string& path) { return ma6::form_from_json(load_json(path)); }

// --------------------------------------------------------------------------
// equation / solution / surface manifests

ma6::MAEquation equation_from_flags(const std::string& eq, const std::string& gamma) {
    return ma6::builtin_equation(eq, ma6::parse_rational(gamma));
}

ma6::CandidateSolution solution_from_manifest(const Json& j, std::array<std::array<double, 2>, 3>& box,
                                              std::vector<ma6::Point3>& fixed_points) {
    if (j.contains("table")) {
        // explicit point table: value/grad/hess triples
        struct Entry {
            ma6::Point3 x;
            std::array<double, 3> grad;
            ma6::Matrix<double> hess{3, 3};
        };
        auto entries = std::make_shared<std::vector<Entry>>();
        for (const auto& row : j.at("table")) {
            Entry e;
            auto x = row.at("x").get<std::vector<double>>();
            auto g = row.at("grad").get<std::vector<double>>();
            auto h = row.at("hess").get<std::vector<std::vector<double>>>();
            if (x.size() != 3 || g.size() != 3 || h.size() != 3) throw Error("table entries need x[3], grad[3], hess[3][3]");
            for (int i = 0; i < 3; ++i) {
                e.x[static_cast<size_t>(i)] = x[static_cast<size_t>(i)];
                e.grad[static_cast<size_t>(i)] = g[static_cast<size_t>(i)];
                for (int k = 0; k < 3; ++k) e.hess(i, k) = h[static_cast<size_t>(i)].at(static_cast<size_t>(k));
            }
            fixed_points.push_back(e.x);
            entries->push_back(std::move(e));
        }
        auto lookup = [entries](const ma6::Point3& p) -> const Entry& {
            for (const auto& e : *entries)
                if (e.x == p) return e;
            throw Error("table solution queried off its own points");
        };
        ma6::CandidateSolution s;
        s.grad = [lookup](const ma6::Point3& p) { return lookup(p).grad; };
        s.hess = [lookup](const ma6::Point3& p) { return lookup(p).hess; };
        return s;
    }
    std::string name = j.at("solution").get<std::string>();
    if (j.contains("box")) {
        auto b = j.at("box").get<std::vector<std::vector<double>>>();
        if (b.size() != 3) throw Error("solution box needs 3 intervals");
        for (int i = 0; i < 3; ++i) box[static_cast<size_t>(i)] = {b[static_cast<size_t>(i)].at(0), b[static_cast<size_t>(i)].at(1)};
    }
    if (name == "cs-regular") return ma6::cs_regular_solution();
    if (name == "hess-integral")
        return ma6::hess_integral_solution(j.value("a", 1.0), j.value("b", 1.0));
    throw Error("unknown solution manifest: " + name);
}

std::vector<ma6::Point3> sample_box3(const std::array<std::array<double, 2>, 3>& box, std::size_t n,
                                     std::uint64_t seed) {
    ma6::Rng rng(seed);
    std::vector<ma6::Point3> pts;
    for (std::size_t i = 0; i < n; ++i) {
        ma6::Point3 p;
        for (int k = 0; k < 3; ++k) p[static_cast<size_t>(k)] = rng.uniform(box[static_cast<size_t>(k)][0], box[static_cast<size_t>(k)][1]);
        pts.push_back(p);
    }
    return pts;
}

std::vector<ma6::Point6> grid_points(const Json& grid) {
    std::array<std::array<double, 2>, 6> box{};
    for (auto& b : box) b = {-1.0, 1.0};
    if (grid.contains("box")) {
        auto b = grid.at("box").get<std::vector<std::vector<double>>>();
        if (b.size() != 6) throw Error("grid box needs 6 intervals");
        for (int i = 0; i < 6; ++i) box[static_cast<size_t>(i)] = {b[static_cast<size_t>(i)].at(0), b[static_cast<size_t>(i)].at(1)};
    }
    std::vector<ma6::Point6> pts;
    if (grid.contains("random")) {
        std::size_t n = grid.at("random").get<std::size_t>();
        ma6::Rng rng(grid.value("seed", 0));
        for (std::size_t i = 0; i < n; ++i) {
            ma6::Point6 p;
            for (int k = 0; k < 6; ++k) p[static_cast<size_t>(k)] = rng.uniform(box[static_cast<size_t>(k)][0], box[static_cast<size_t>(k)][1]);
            pts.push_back(p);
        }
        return pts;
    }
    int n = grid.value("n", 2);
    if (n < 1 || static_cast<double>(std::pow(n, 6)) > 1e6) throw Error("grid n out of range");
    std::vector<int> ix(6, 0);
    for (;;) {
        ma6::Point6 p;
        for (int k = 0; k < 6; ++k) {
            double lo = box[static_cast<size_t>(k)][0], hi = box[static_cast<size_t>(k)][1];
            p[static_cast<size_t>(k)] = n == 1 ? (lo + hi) / 2 : lo + (hi - lo) * ix[static_cast<size_t>(k)] / (n - 1);
        }
        pts.push_back(p);
        int k = 5;
        while (k >= 0) {
            if (++ix[static_cast<size_t>(k)] < n) break;
            ix[static_cast<size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return pts;
}

// --------------------------------------------------------------------------

int run(int argc, char** argv) {
    CLI::App app{"Monge-Ampere structures on the symplectic R^6"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string json_path;
    app.add_option("--json", json_path, "also write the report to this path")->capture_default_str();

    // classify / invariants / decompose ------------------------------------
    std::string form_path;
    auto* cmd_classify = app.add_subcommand("classify", "orbit of an effective 3-form (Table-1 row)");
    cmd_classify->add_option("form", form_path, "form JSON file")->required();
    auto* cmd_invariants = app.add_subcommand("invariants", "full invariant report of a 3-form");
    cmd_invariants->add_option("form", form_path, "form JSON file")->required();
    auto* cmd_decompose = app.add_subcommand("decompose", "Hitchin decomposition of a nondegenerate 3-form");
    cmd_decompose->add_option("form", form_path, "form JSON file")->required();

    // structure -------------------------------------------------------------
    std::string eq_name = "hess", gamma = "1";
    auto* cmd_structure = app.add_subcommand("structure", "geometric structure of a built-in equation");
    cmd_structure->add_option("--eq", eq_name, "hess | special-lagrangian | pseudo | chynoweth-sewell")->required();
    cmd_structure->add_option("--gamma", gamma, "equation parameter (rational)");

    // verify-solution ---------------------------------------------------------
    std::string solution_path;
    std::size_t samples = 100;
    double tol = 1e-6;
    std::uint64_t seed = 1;
    auto* cmd_vsol = app.add_subcommand("verify-solution", "residual check of an explicit solution");
    cmd_vsol->add_option("--eq", eq_name)->required();
    cmd_vsol->add_option("--gamma", gamma);
    cmd_vsol->add_option("--solution", solution_path, "solution manifest JSON")->required();
    cmd_vsol->add_option("--samples", samples);
    cmd_vsol->add_option("--tol", tol);
    cmd_vsol->add_option("--seed", seed);

    // verify-generalized -----------------------------------------------------
    std::string surface_path;
    auto* cmd_vgen = app.add_subcommand("verify-generalized", "Lagrangian + omega-vanishing check of a surface");
    cmd_vgen->add_option("--eq", eq_name)->required();
    cmd_vgen->add_option("--gamma", gamma);
    cmd_vgen->add_option("--surface", surface_path, "surface manifest JSON")->required();
    cmd_vgen->add_option("--samples", samples);
    cmd_vgen->add_option("--tol", tol);
    cmd_vgen->add_option("--seed", seed);

    // local-constancy ---------------------------------------------------------
    std::string field_path, grid_path;
    double field_h = 1e-4, tol_closed = 1e-3, tol_curv = 1e-3;
    auto* cmd_lc = app.add_subcommand("local-constancy", "closedness + flatness verdict of a structure field");
    cmd_lc->add_option("--field", field_path, "field manifest JSON")->required();
    cmd_lc->add_option("--grid", grid_path, "sample grid JSON")->required();
    cmd_lc->add_option("--fd-step", field_h, "finite-difference step");
    cmd_lc->add_option("--tol-closed", tol_closed);
    cmd_lc->add_option("--tol-curv", tol_curv);

    // stenzel -----------------------------------------------------------------
    double c_param = 1.0, tau_max = 3.0, ode_step = 1e-4;
    auto* cmd_stenzel = app.add_subcommand("stenzel", "Stenzel T*S^3 case study (non-flat Calabi-Yau)");
    cmd_stenzel->add_option("--c", c_param, "ODE constant > 0");
    cmd_stenzel->add_option("--tau-max", tau_max);
    cmd_stenzel->add_option("--samples", samples)->capture_default_str();
    cmd_stenzel->add_option("--seed", seed);
    cmd_stenzel->add_option("--ode-step", ode_step);

    // matode --------------------------------------------------------------------
    double box = 0.5, step = 1.0 / 64.0;
    std::uint64_t mseed = 3;
    auto* cmd_matode = app.add_subcommand("matode", "zero-curvature matrix system integrator");
    cmd_matode->add_option("--box", box);
    cmd_matode->add_option("--step", step);
    cmd_matode->add_option("--manufactured-seed", mseed);
    cmd_matode->add_option("--tol", tol)->default_val(1e-5);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags/usage are input errors
    }

    if (*cmd_classify || *cmd_invariants || *cmd_decompose) {
        ma6::ParsedForm pf = load_form(form_path);
        Json rep = std::visit(
            [&](const auto& w) {
                if (w.degree() != 3) throw Error("expected a 3-form, got degree " + std::to_string(w.degree()));
                if (!ma6::is_effective(w)) {
                    g_exit = 1;
                    Json r;
                    r["effective"] = false;
                    r["error"] = "form is not effective";
                    return r;
                }
                return ma6::invariants_json(w);
            },
            pf);
        if (*cmd_classify && rep.value("effective", false)) {
            Json slim{{"orbit", rep["orbit"]}, {"signatureQK", rep["signatureQK"]},
                      {"signVariant", rep["signVariant"]}, {"lambda", rep["lambda"]},
                      {"effective", true}, {"conventions", rep["conventions"]}};
            rep = slim;
        }
        if (*cmd_decompose && rep.value("effective", false)) {
            if (!rep.contains("decomposition")) {
                g_exit = 1;
                rep = Json{{"error", "degenerate form, no Hitchin decomposition"}, {"lambda", rep["lambda"]}};
            } else {
                rep = Json{{"lambda", rep["lambda"]}, {"decomposition", rep["decomposition"]},
                           {"dual", rep["dual"]}, {"normalized", rep["normalized"]},
                           {"conventions", rep["conventions"]}};
            }
        }
        emit(rep, json_path);
        return g_exit;
    }

    if (*cmd_structure) {
        ma6::StructureReport sr = ma6::geometric_structure(equation_from_flags(eq_name, gamma));
        Json rep;
        rep["equation"] = sr.equation;
        rep["gamma"] = gamma;
        rep["pde"] = sr.pde;
        rep["type"] = sr.elliptic ? "elliptic" : "hyperbolic";
        rep["lambda"] = ma6::to_string(sr.lambda);
        rep["orbit"] = sr.orbit.label();
        rep["signatureQK"] = ma6::signature_to_json(sr.sig);
        rep["omega"] = ma6::form_to_json(ma6::builtin_equation(eq_name, ma6::parse_rational(gamma)).omega);
        rep["normalized"] = Json{{"form", ma6::form_to_json(sr.normalized.form)},
                                 {"residualQuartic", ma6::to_string(sr.normalized.residual_quartic)}};
        rep["dual"] = ma6::form_to_json(sr.dual_form);
        Json dec;
        dec["kind"] = sr.elliptic ? "elliptic" : "hyperbolic";
        dec[sr.elliptic ? "alphaRe" : "alpha"] = ma6::form_to_json(sr.dec.alpha);
        dec[sr.elliptic ? "alphaIm" : "beta"] = ma6::form_to_json(sr.dec.beta);
        dec["orientation"] = ma6::to_string(sr.dec.orientation);
        rep["decomposition"] = dec;
        Json ver;
        if (sr.alpha_beta_over_theta) {
            ver["alphaWedgeBetaOverTheta_normalized"] = ma6::to_string(*sr.alpha_beta_over_theta);
            ver["paperClaim"] = "alpha^beta = -Omega^3/6, i.e. ratio 1";
            ver["match"] = (*sr.alpha_beta_over_theta == 1);
        }
        if (sr.cy_constant) {
            ver["omega3OverIAlphaConj_normalized"] = ma6::to_string(*sr.cy_constant);
            ver["paperClaim"] = "Omega^3 = -(3/4) i alpha^conj(alpha)";
            ver["match"] = (*sr.cy_constant == ma6::Rational(-3, 4));
            ver["decompositionAlphaConjOverITheta"] = ma6::to_string(*sr.dec_alpha_conj_over_itheta);
        }
        rep["verification"] = ver;
        rep["conventions"] = ma6::conventions_json();
        emit(rep, json_path);
        return 0;
    }

    if (*cmd_vsol) {
        ma6::MAEquation eq = equation_from_flags(eq_name, gamma);
        Json manifest = load_json(solution_path);
        std::array<std::array<double, 2>, 3> box3{{{0.5, 1.5}, {0.5, 1.5}, {0.5, 1.5}}};
        std::vector<ma6::Point3> fixed;
        ma6::CandidateSolution sol = solution_from_manifest(manifest, box3, fixed);
        std::vector<ma6::Point3> pts = fixed.empty() ? sample_box3(box3, samples, seed) : fixed;
        double worst = 0.0;
        for (const auto& p : pts) worst = std::max(worst, std::fabs(ma6::residual(eq, sol, p)));
        bool pass = worst < tol;
        Json rep{{"equation", eq.name}, {"gamma", gamma}, {"pde", ma6::pde_string(ma6::residual_polynomial(eq.omega))},
                 {"samples", pts.size()}, {"maxResidual", worst}, {"tolerance", tol}, {"pass", pass},
                 {"conventions", ma6::conventions_json()}};
        emit(rep, json_path);
        return pass ? 0 : 1;
    }

    if (*cmd_vgen) {
        ma6::MAEquation eq = equation_from_flags(eq_name, gamma);
        Json manifest = load_json(surface_path);
        std::string kind = manifest.at("surface").get<std::string>();
        std::array<std::array<double, 2>, 3> box3{{{0.5, 1.5}, {0.5, 1.5}, {0.5, 1.5}}};
        if (manifest.contains("box")) {
            auto b = manifest.at("box").get<std::vector<std::vector<double>>>();
            for (int i = 0; i < 3; ++i) box3[static_cast<size_t>(i)] = {b.at(static_cast<size_t>(i)).at(0), b.at(static_cast<size_t>(i)).at(1)};
        }
        ma6::ParamSurface surf;
        if (kind == "chynoweth-sewell-L") {
            surf = ma6::chynoweth_sewell_surface(manifest.value("b", 1.0), manifest.value("gamma", ma6::to_double(eq.gamma)));
        } else if (kind == "graph") {
            std::vector<ma6::Point3> unused;
            std::array<std::array<double, 2>, 3> unused_box;
            surf = ma6::graph_surface(solution_from_manifest(manifest.at("solution"), unused_box, unused));
        } else {
            throw Error("unknown surface manifest: " + kind);
        }
        auto rep0 = ma6::check_generalized(eq, surf, sample_box3(box3, samples, seed), tol);
        Json rep{{"equation", eq.name},
                 {"samples", rep0.sample_count},
                 {"maxSymplecticPullback", rep0.max_symplectic_pullback},
                 {"maxOmegaPullback", rep0.max_omega_pullback},
                 {"rankDeficientSamples", rep0.rank_deficient.size()},
                 {"tolerance", rep0.tolerance},
                 {"pass", rep0.pass},
                 {"conventions", ma6::conventions_json()}};
        emit(rep, json_path);
        return rep0.pass ? 0 : 1;
    }

    if (*cmd_lc) {
        Json fj = load_json(field_path);
        std::string kind = fj.at("field").get<std::string>();
        ma6::ParsedForm pf = ma6::form_from_json(fj.at("form"));
        ma6::Form<double> w0 = std::holds_alternative<ma6::Form<double>>(pf)
                                   ? std::get<ma6::Form<double>>(pf)
                                   : ma6::to_float(std::get<ma6::Form<ma6::Rational>>(pf));
        if (kind == "linear-pullback") {
            auto rows = fj.at("map").get<std::vector<std::vector<double>>>();
            if (rows.size() != 6) throw Error("field map needs a 6x6 matrix");
            ma6::Matrix<double> m(6, 6);
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) m(i, j) = rows[static_cast<size_t>(i)].at(static_cast<size_t>(j));
            w0 = ma6::pullback(m, w0);
        } else if (kind != "constant") {
            throw Error("unknown field manifest: " + kind);
        }
        ma6::FormField field = ma6::constant_field(w0);
        field.h = field_h;
        ma6::ConstancyTolerances ct;
        ct.closedness = tol_closed;
        ct.curvature_rel = tol_curv;
        auto rep0 = ma6::local_constancy_report(field, grid_points(load_json(grid_path)), ct);
        Json rep{{"verdict", ma6::verdict_name(rep0.verdict)},
                 {"samples", rep0.sample_count},
                 {"maxClosednessDefectOmega", rep0.max_d_omega},
                 {"maxClosednessDefectDual", rep0.max_d_dual},
                 {"maxRiemannNorm", rep0.max_riemann},
                 {"curvatureTolerance", rep0.curvature_tolerance},
                 {"closednessTolerance", tol_closed},
                 {"lambdaRange", Json::array({rep0.lambda_low, rep0.lambda_high})},
                 {"degeneratePoints", rep0.degenerate_points.size()},
                 {"samplePoints", rep0.samples},
                 {"note", rep0.note},
                 {"conventions", ma6::conventions_json()}};
        emit(rep, json_path);
        if (rep0.verdict == ma6::Verdict::LocallyConstant) return 0;
        return rep0.verdict == ma6::Verdict::NotLocallyConstant ? 1 : 2;
    }

    if (*cmd_stenzel) {
        ma6::StenzelReport sr = ma6::stenzel_report(c_param, tau_max, samples, seed, ode_step);
        bool pass = sr.ode_residual < 1e-8 && sr.cy_spread < 0.005 && sr.lambda_high < 0.0 &&
                    sr.constancy.max_d_omega < 1e-3 && sr.constancy.max_d_dual < 1e-3 && sr.nonflat_verdict;
        Json rep{{"c", sr.c},
                 {"odeResidual", sr.ode_residual},
                 {"cyRatioSpread", sr.cy_spread},
                 {"chartSamples", sr.chart_samples},
                 {"darbouxSamples", sr.darboux_samples},
                 {"lambdaRange", Json::array({sr.lambda_low, sr.lambda_high})},
                 {"maxClosednessDefectOmega", sr.constancy.max_d_omega},
                 {"maxClosednessDefectDual", sr.constancy.max_d_dual},
                 {"maxRiemannNorm", sr.constancy.max_riemann},
                 {"flatNoiseFloor", sr.flat_noise_floor},
                 {"verdict", ma6::verdict_name(sr.constancy.verdict)},
                 {"nonFlat", sr.nonflat_verdict},
                 {"note", sr.constancy.note},
                 {"pass", pass},
                 {"conventions", ma6::conventions_json()}};
        emit(rep, json_path);
        return pass ? 0 : 1;
    }

    if (*cmd_matode) {
        ma6::MatrixField f = ma6::manufactured_field(mseed);
        ma6::Rng rng(mseed + 17);
        std::vector<ma6::Point3> zc_samples;
        for (int i = 0; i < 20; ++i)
            zc_samples.push_back({rng.uniform(-box, box), rng.uniform(-box, box), rng.uniform(-box, box)});
        auto zc = ma6::zero_curvature_check(f, zc_samples, 1e-6);
        ma6::MatOdeGrid grid = ma6::integrate(f, box, step);
        double res = ma6::residual(grid, f);
        bool pass = zc.pass && res < tol;
        Json rep{{"manufacturedSeed", mseed},
                 {"box", box},
                 {"step", step},
                 {"zeroCurvatureDefect", zc.max_defect},
                 {"stageDiagnostics",
                  Json{{"c2PrimeX1Variation", grid.c2_prime_x1_variation},
                       {"c3PrimeX2Variation", grid.c3_prime_x2_variation}}},
                 {"residual", res},
                 {"tolerance", tol},
                 {"pass", pass},
                 {"conventions", ma6::conventions_json()}};
        emit(rep, json_path);
        return pass ? 0 : 1;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
