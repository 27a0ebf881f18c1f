#include "bidisc/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <nlohmann/json.hpp>

namespace bidisc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ZPoly mono(int a, int b, int c, int d, cplx k = 1.0) { return ZPoly::monomial(a, b, c, d, k); }

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << text;
}

// Writes the machine-readable error record and echoes it on stderr.
int fail(const std::string& out_dir, int code, const std::string& kind, const std::string& message) {
    const json rec{{"exit_code", code}, {"kind", kind}, {"message", message}};
    std::cerr << rec.dump() << "\n";
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!ec) {
        std::ofstream os(fs::path(out_dir) / "error.json");
        os << rec.dump(2) << "\n";
    }
    return code;
}

FitWindow window_from_json(const json& j) {
    FitWindow w;
    const auto& c = j.at("center");
    w.center_y1 = c.at(0).get<double>();
    w.center_y2 = c.at(1).get<double>();
    w.inner = j.value("inner", 0.0);
    w.outer = j.at("outer").get<double>();
    return w;
}

json window_json(const FitWindow& w) { return {{"center", {w.center_y1, w.center_y2}}, {"inner", w.inner}, {"outer", w.outer}}; }

json config_json(const RunConfig& c) {
    json j;
    j["grid"] = {{"n_r", c.grid.n_r}, {"n_theta", c.grid.n_theta}, {"grading", to_string(c.grid.grading)}};
    j["M"] = c.M;
    j["solver"] = {{"order", c.solver.order}, {"tol", c.solver.tol}};
    j["series"] = {{"Y_max", c.series.y_max},
                   {"plane_n", c.series.plane_n},
                   {"cutoff_base", c.series.cutoff_base},
                   {"cutoff_growth", c.series.cutoff_growth},
                   {"increment_ratio", c.series.increment_ratio},
                   {"series_terms", c.series.series_terms},
                   {"series_offset", c.series.series_offset}};
    j["fit"] = {{"degree", c.fit.degree}, {"theta", {c.fit.theta1, c.fit.theta2}}, {"windows", json::array()}};
    for (const auto& w : c.fit.windows) j["fit"]["windows"].push_back(window_json(w));
    j["gates"] = {{"pde", c.gates.pde}, {"boundary", c.gates.boundary}};
    j["data"] = c.data ? c.data->to_json() : json{{"preset", c.preset}};
    j["modes"] = json::array();
    for (const auto& m : c.modes) j["modes"].push_back({m.first, m.second});
    j["seed"] = c.seed;
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::vector<std::string> preset_names() { return {"zero", "polynomial", "corner-one", "suff-satisfying", "suff-violating"}; }

FormData preset(const std::string& name) {
    FormData f;
    if (name == "zero") return f;
    if (name == "polynomial") {
        f.f1 = mono(0, 1, 1, 0) + mono(1, 1, 0, 0);
        f.f2 = mono(1, 0, 0, 1) + mono(0, 0, 1, 1);
        return f;
    }
    if (name == "corner-one") {
        f.f1 = ZPoly::constant(1.0);
        f.f2 = ZPoly::constant(1.0);
        f.bump = CornerBump{};
        return f;
    }
    if (name == "suff-satisfying") {
        // d f1/d z2bar = 0 and d f2/d z1bar = 0 identically.
        f.f1 = ZPoly::constant(1.0) + mono(1, 1, 0, 0);
        f.f2 = ZPoly::constant(1.0) + mono(0, 0, 1, 1);
        return f;
    }
    if (name == "suff-violating") {
        f.f1 = mono(0, 0, 0, 1);
        f.f2 = mono(0, 1, 0, 0);
        return f;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

FormData RunConfig::form_data() const { return data ? *data : bidisc::preset(preset); }

void validate(const RunConfig& c) {
    if (c.grid.n_r < 8) throw ConfigError("grid.n_r must be at least 8");
    if (c.grid.n_theta < 8 || c.grid.n_theta % 2) throw ConfigError("grid.n_theta must be even and at least 8");
    if (c.M < 0) throw ConfigError("M must be non-negative");
    if (c.M > c.grid.n_theta / 2 - 1)
        throw ConfigError("aliasing: M = " + std::to_string(c.M) + " exceeds n_theta/2 - 1 = " + std::to_string(c.grid.n_theta / 2 - 1));
    if (!(c.solver.tol > 0) || !(c.gates.pde > 0) || !(c.gates.boundary > 0)) throw ConfigError("tolerances must be positive");
    if (c.solver.order != 2 && c.solver.order != 4 && c.solver.order != 6) throw ConfigError("solver.order must be 2, 4 or 6");
    if (c.fit.degree < 0) throw ConfigError("fit.degree must be non-negative");
    for (const auto& w : c.fit.windows)
        if (!(w.outer > w.inner) || w.inner < 0) throw ConfigError("fit window needs 0 <= inner < outer");
    if (!c.data) preset(c.preset);
    const auto f = c.form_data();
    if (std::max(f.f1.max_mode(), f.f2.max_mode()) + 1 > c.M)
        throw ConfigError("aliasing: data needs M >= " + std::to_string(std::max(f.f1.max_mode(), f.f2.max_mode()) + 1));
}

RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    try {
        if (j.contains("grid")) {
            const auto g = grid_config_from_json(j.at("grid"));
            c.grid = g;
            if (!j.at("grid").contains("n_r")) c.grid.n_r = 129;
            if (!j.at("grid").contains("n_theta")) c.grid.n_theta = 64;
        }
        c.M = j.value("M", c.M);
        if (j.contains("solver")) {
            c.solver.order = j["solver"].value("order", c.solver.order);
            c.solver.tol = j["solver"].value("tol", c.solver.tol);
        }
        if (j.contains("series")) c.series = series_config_from_json(j.at("series").dump());
        if (j.contains("fit")) {
            const auto& f = j.at("fit");
            c.fit.degree = f.value("degree", c.fit.degree);
            if (f.contains("theta")) {
                c.fit.theta1 = f["theta"].at(0).get<double>();
                c.fit.theta2 = f["theta"].at(1).get<double>();
            }
            if (f.contains("windows")) {
                c.fit.windows.clear();
                for (const auto& w : f.at("windows")) c.fit.windows.push_back(window_from_json(w));
            }
        }
        if (j.contains("gates")) {
            c.gates.pde = j["gates"].value("pde", c.gates.pde);
            c.gates.boundary = j["gates"].value("boundary", c.gates.boundary);
        }
        if (j.contains("data")) {
            const auto& d = j.at("data");
            if (d.contains("preset"))
                c.preset = d.at("preset").get<std::string>();
            else
                c.data = FormData::from_json(d);
        }
        if (j.contains("modes")) {
            c.modes.clear();
            for (const auto& m : j.at("modes")) c.modes.push_back({m.at(0).get<int>(), m.at(1).get<int>()});
        }
        c.out_dir = j.value("out", c.out_dir);
        c.seed = j.value("seed", c.seed);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    validate(c);
    return c;
}

FormSolution solve_form(const FormData& f, const GridConfig& grid, int M, const SolverOptions& opt) {
    const auto g = make_disc_grid(grid.n_r, grid.n_theta, grid.grading);
    FormSolution s;
    s.f1 = f.modes(1, g, g, M);
    s.f2 = f.modes(2, g, g, M);
    ModeSolver solver(g.r, g.r, opt);
    for (int j = 1; j <= 2; ++j) {
        const auto& fj = j == 1 ? s.f1 : s.f2;
        auto& uj = j == 1 ? s.u1 : s.u2;
        uj.M = M;
        uj.r1 = g.r;
        uj.r2 = g.r;
        for (const auto& [key, c] : fj.coeffs) {
            ModeProblem p;
            p.m1 = key.first;
            p.m2 = key.second;
            p.rhs = -2.0 * c;
            // u1: Dirichlet on r1 = 1, per-mode form of du1/dz2bar = 0 on r2 = 1; u2 the mirror image.
            p.bc1 = j == 1 ? AxisBoundary{} : AxisBoundary::robin_with(key.first);
            p.bc2 = j == 1 ? AxisBoundary::robin_with(key.second) : AxisBoundary{};
            auto sol = solver.solve(p);
            s.worst_solver_residual = std::max(s.worst_solver_residual, sol.residual_norm);
            uj.coeffs[key] = std::move(sol.a);
        }
    }
    return s;
}

std::vector<FitSample> corner_samples(const ModeCoefficients& u, double theta1, double theta2) {
    const auto n1 = static_cast<Eigen::Index>(u.r1.size()), n2 = static_cast<Eigen::Index>(u.r2.size());
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n1, n2);
    for (const auto& [k, a] : u.coeffs) sum += a * std::polar(1.0, k.first * theta1 + k.second * theta2);
    std::vector<FitSample> out;
    out.reserve(static_cast<std::size_t>(n1 * n2));
    for (Eigen::Index i = 0; i < n1; ++i)
        for (Eigen::Index j = 0; j < n2; ++j) out.push_back({-std::log(u.r1[i]), -std::log(u.r2[j]), sum(i, j)});
    return out;
}

PipelineResult run_form(const FormData& f, const RunConfig& c) {
    PipelineResult r;
    r.solution = solve_form(f, c.grid, c.M, c.solver);
    const auto& s = r.solution;
    r.report = residuals_from_modes(s.u1, s.u2, s.f1, s.f2, 6, 3);
    const auto samples = corner_samples(s.u1, c.fit.theta1, c.fit.theta2);
    for (const auto& w : c.fit.windows) r.report.corner_fits.push_back(fit_corner_expansion(samples, w, c.fit.degree));
    return r;
}

int run_pipeline(const RunConfig& c) {
    try {
        validate(c);
    } catch (const std::exception& e) {
        return fail(c.out_dir, 1, "validation", e.what());
    }
    PipelineResult r;
    try {
        r = run_form(c.form_data(), c);
    } catch (const SolveError& e) {
        return fail(c.out_dir, 2, "solver", e.what());
    } catch (const RankDeficientError& e) {
        return fail(c.out_dir, 1, "validation", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(c.out_dir, 1, "validation", e.what());
    }
    const fs::path out(c.out_dir);
    fs::create_directories(out);
    const bool pass = r.report.pde_residual <= c.gates.pde && r.report.bc_dirichlet <= c.gates.boundary &&
                      r.report.bc_neumann <= c.gates.boundary;
    json j;
    j["config"] = config_json(c);
    j["report"] = r.report.to_json();
    j["gates_passed"] = pass;
    write_file(out / "report.json", dump(j));
    write_file(out / "modes_f1.csv", modes_csv(r.solution.f1));
    write_file(out / "modes_u1.csv", modes_csv(r.solution.u1));
    write_file(out / "modes_u2.csv", modes_csv(r.solution.u2));
    const auto samples = corner_samples(r.solution.u1, c.fit.theta1, c.fit.theta2);
    for (std::size_t k = 0; k < r.report.corner_fits.size(); ++k) {
        const auto& fit = r.report.corner_fits[k];
        write_file(out / ("fit_" + std::to_string(k) + ".csv"), corner_fit_csv(fit));
        write_file(out / ("fit_" + std::to_string(k) + "_plot.csv"), corner_fit_plot_csv(fit, samples));
    }
    if (!pass) return fail(c.out_dir, 3, "verification", "residual gate failed: " + r.report.to_json().dump());
    return 0;
}

std::vector<SeriesStudyRow> series_study(const RunConfig& c) {
    const auto g = make_disc_grid(c.grid.n_r, c.grid.n_theta, c.grid.grading);
    const auto plane = make_plane_grid(c.series.plane_n, c.series.y_max);
    for (const auto& key : c.modes)
        if (key.first == 0 && key.second == 0) throw ConfigError("series study: mode (0,0) has no shifted Laplacian inverse");
    std::vector<SeriesStudyRow> rows;
    CutoffFamily fam;
    try {
        fam = c.series.cutoffs();
    } catch (const CutoffRangeError& e) {
        for (const auto& key : c.modes) {
            SeriesStudyRow row;
            row.mode = key;
            row.failure = e.what();
            rows.push_back(std::move(row));
        }
        return rows;
    }
    ModeSolver solver(g.r, g.r, c.solver);
    for (const auto& key : c.modes) {
        const auto [m1, m2] = key;
        const auto bubble = PowerSum2::bubble(m1, m2);
        const auto exact = to_log_coords_exact(bubble, m1, m2, plane);
        const auto problem = manufactured_rhs(bubble, m1, m2, g.r, g.r);
        const auto direct = solver.solve(problem);
        const auto direct_log = to_log_coords(direct.a, problem.rhs, g.r, g.r, m1, m2, plane);

        SeriesStudyRow row;
        row.mode = key;
        try {
            row.result = neumann_series_solve(cutoff_rhs(exact, fam.data()), m1, m2, fam, c.series.series_terms);
        } catch (const WrapAroundError& e) {
            row.failure = e.what();
            rows.push_back(std::move(row));
            continue;
        }
        const double R = fam.inner_radius();
        row.exact_error = (row.result.sum - exact.A).l2_within(R) / exact.A.l2_within(R);
        row.direct_error = (row.result.sum - direct_log.A).l2_within(R) / direct_log.A.l2_within(R);
        row.strictly_decreasing = true;
        for (std::size_t n = 1; n < row.result.term_norms.size(); ++n)
            if (!(row.result.term_norms[n] < row.result.term_norms[n - 1])) row.strictly_decreasing = false;
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_series_study(const RunConfig& c) {
    std::vector<SeriesStudyRow> rows;
    try {
        validate(c);
        rows = series_study(c);
    } catch (const SolveError& e) {
        return fail(c.out_dir, 2, "solver", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(c.out_dir, 1, "validation", e.what());
    }
    const fs::path out(c.out_dir);
    fs::create_directories(out);
    std::string csv = "m1,m2,n,term_norm,partial_sum_norm\n";
    json summary = json::array();
    bool failed = false;
    for (const auto& r : rows) {
        csv += series_csv(r.mode.first, r.mode.second, r.result);
        const bool ok = r.failure.empty() && !r.result.contraction_failed && r.strictly_decreasing;
        failed = failed || !ok;
        json row{{"mode", {r.mode.first, r.mode.second}}, {"flag", ok ? "converged" : "contraction-failed"}};
        if (r.failure.empty()) {
            row["exact_error"] = r.exact_error;
            row["direct_error"] = r.direct_error;
        } else {
            row["reason"] = r.failure;
        }
        summary.push_back(row);
    }
    write_file(out / "series.csv", csv);
    write_file(out / "series.json", dump({{"config", config_json(c)}, {"modes", summary}}));
    if (failed) return fail(c.out_dir, 3, "verification", "contraction-failed");
    return 0;
}

BergmanCheck bergman_identity_check(const ZPoly& g, const RunConfig& c) {
    BergmanCheck out;
    out.g = g;
    FormData dg;
    dg.f1 = g.dbar(1);
    dg.f2 = g.dbar(2);
    const auto s = solve_form(dg, c.grid, c.M, c.solver);
    FormData gd;
    gd.f1 = g;
    const auto gm = gd.modes(1, make_disc_grid(c.grid.n_r, c.grid.n_theta, c.grid.grading),
                             make_disc_grid(c.grid.n_r, c.grid.n_theta, c.grid.grading), c.M);
    const auto P = bergman_project(gm);
    const auto rhs = combine(1.0, gm, -1.0, dbar_star(s.u1, s.u2));
    out.gap = l2_norm(combine(1.0, P, -1.0, rhs));
    out.collapse = l2_norm(combine(1.0, P, -1.0, gm));

    // Kernel route at random probes; coefficients of z^n read off at r = 1.
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> rad(0.0, 0.8), ang(0.0, 2 * std::acos(-1.0));
    std::vector<std::pair<cplx, cplx>> probes;
    for (int k = 0; k < 4; ++k) {
        const double a = rad(rng), b = ang(rng), cc = rad(rng), d = ang(rng);
        probes.push_back({std::polar(a, b), std::polar(cc, d)});
    }
    const auto kern = bergman_project_kernel([&](cplx z1, cplx z2) { return g.eval(z1, z2); }, probes);
    for (std::size_t k = 0; k < probes.size(); ++k) {
        cplx v = 0;
        for (const auto& [key, a] : P.coeffs)
            v += a(a.rows() - 1, a.cols() - 1) * std::pow(probes[k].first, key.first) * std::pow(probes[k].second, key.second);
        out.kernel_agreement = std::max(out.kernel_agreement, std::abs(v - kern[k]));
    }
    return out;
}

int run_bergman_study(const RunConfig& c) {
    const std::vector<ZPoly> gs{ZPoly::constant(1.0), mono(1, 0, 0, 0), mono(0, 1, 0, 0), mono(0, 1, 1, 0)};
    json rows = json::array();
    bool pass = true;
    try {
        validate(c);
        for (const auto& g : gs) {
            const auto b = bergman_identity_check(g, c);
            pass = pass && b.gap < 1e-4;
            rows.push_back({{"g", g.str()}, {"gap", b.gap}, {"collapse", b.collapse}, {"kernel_agreement", b.kernel_agreement}});
        }
    } catch (const SolveError& e) {
        return fail(c.out_dir, 2, "solver", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(c.out_dir, 1, "validation", e.what());
    }
    fs::create_directories(c.out_dir);
    write_file(fs::path(c.out_dir) / "bergman.json", dump({{"config", config_json(c)}, {"checks", rows}}));
    if (!pass) return fail(c.out_dir, 3, "verification", "Bergman gap above 1e-4");
    return 0;
}

int run_sufficiency_study(const RunConfig& c, int n) {
    SufficiencyReport rep;
    try {
        validate(c);
        rep = check_sufficiency(c.form_data(), n);
    } catch (const std::invalid_argument& e) {
        return fail(c.out_dir, 1, "validation", e.what());
    }
    fs::create_directories(c.out_dir);
    write_file(fs::path(c.out_dir) / "sufficiency.json", dump({{"config", config_json(c)}, {"sufficiency", rep.to_json()}}));
    return 0;
}

}  // namespace bidisc
