#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bidisc/pipeline.hpp"

using namespace bidisc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("bidisc_test_" + name);
    fs::remove_all(p);
    return p;
}

RunConfig small(const std::string& preset_name) {
    RunConfig c;
    c.grid.n_r = 48;
    c.grid.n_theta = 16;
    c.M = 3;
    c.fit.degree = 2;
    c.fit.windows = {{0, 0, 0, 0.2}};
    c.preset = preset_name;
    return c;
}

}  // namespace

TEST_CASE("preset registry") {
    for (const auto& n : preset_names()) CHECK_NOTHROW(preset(n));
    CHECK_THROWS_AS(preset("nope"), ConfigError);
    CHECK(preset("zero").f1.is_zero());
    CHECK(preset("corner-one").bump.has_value());
    CHECK(preset("suff-violating").f1.dbar(2) == ZPoly::constant(1.0));
    CHECK(preset("suff-satisfying").f1.dbar(2).is_zero());
}

TEST_CASE("config parsing and validation") {
    const auto c = run_config_from_json(nlohmann::json::parse(R"({
        "grid": {"n_r": 40, "n_theta": 16},
        "M": 5,
        "solver": {"order": 2},
        "fit": {"degree": 1, "windows": [{"center": [0, 0.5], "outer": 0.2}]},
        "data": {"f1": [[1, 0, 0, 1, 0, 0]], "f2": []},
        "modes": [[2, 3]],
        "seed": 7
    })"));
    CHECK(c.grid.n_r == 40);
    CHECK(c.M == 5);
    CHECK(c.solver.order == 2);
    CHECK(c.fit.windows.size() == 1);
    CHECK(c.fit.windows[0].center_y2 == 0.5);
    REQUIRE(c.data.has_value());
    CHECK(c.form_data().f1 == ZPoly::monomial(0, 1, 0, 0));
    CHECK(c.modes == std::vector<ModeKey>{{2, 3}});
    CHECK(c.seed == 7);

    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"M": 40})")), ConfigError);
    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"data": {"preset": "bogus"}})")), ConfigError);
    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"solver": {"tol": -1}})")), ConfigError);
    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"gates": {"pde": 0}})")), ConfigError);
    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"grid": {"n_theta": 8}, "M": 4})")), ConfigError);
    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"M": "eight"})")), ConfigError);
}

TEST_CASE("solve_form reproduces the closed-form solution") {
    auto c = small("polynomial");
    const auto s = solve_form(preset("polynomial"), c.grid, c.M, {4, 1e-10, 6, 1600});
    // u1 = z2 conj(z1)(1 - |z1|^2)/4 + (1 - |z1|^4)/8
    const auto& r = s.u1.r1;
    const auto a = s.u1.get(-1, 1), b = s.u1.get(0, 0);
    double err = 0;
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j) {
            err = std::max(err, std::abs(a(i, j) - r[i] * r[j] * (1 - r[i] * r[i]) / 4));
            err = std::max(err, std::abs(b(i, j) - (1 - std::pow(r[i], 4)) / 8));
        }
    CHECK(err < 1e-9);
    // u2 is the mirror image.
    CHECK((s.u2.get(1, -1) - a.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("run_pipeline: zero preset, artifacts, determinism") {
    auto c = small("zero");
    c.out_dir = scratch("zero").string();
    CHECK(run_pipeline(c) == 0);
    for (const char* f : {"report.json", "modes_u1.csv", "modes_u2.csv", "modes_f1.csv", "fit_0.csv", "fit_0_plot.csv"})
        CHECK(fs::exists(fs::path(c.out_dir) / f));
    const auto rep = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "report.json"));
    CHECK(rep["report"]["pde_residual"] == 0.0);
    CHECK(rep["gates_passed"] == true);

    auto p = small("polynomial");
    p.out_dir = scratch("poly_a").string();
    CHECK(run_pipeline(p) == 0);
    const std::string first = slurp(fs::path(p.out_dir) / "report.json") + slurp(fs::path(p.out_dir) / "modes_u1.csv");
    p.out_dir = scratch("poly_b").string();
    CHECK(run_pipeline(p) == 0);
    CHECK(first == slurp(fs::path(p.out_dir) / "report.json") + slurp(fs::path(p.out_dir) / "modes_u1.csv"));
}

TEST_CASE("run_pipeline exit codes") {
    auto c = small("zero");
    c.M = 20;
    c.out_dir = scratch("alias").string();
    CHECK(run_pipeline(c) == 1);
    const auto err = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "error.json"));
    CHECK(err["exit_code"] == 1);
    CHECK(err["message"].get<std::string>().find("aliasing") != std::string::npos);

    // The bump data is not resolved to 1e-12 on this grid: verification gate fails.
    auto g = small("corner-one");
    g.gates.pde = 1e-12;
    g.out_dir = scratch("gate").string();
    CHECK(run_pipeline(g) == 3);
    CHECK(nlohmann::json::parse(slurp(fs::path(g.out_dir) / "error.json"))["kind"] == "verification");

    // Solver failure: an unreachable tolerance.
    auto s = small("polynomial");
    s.solver.tol = 1e-30;
    s.out_dir = scratch("solver").string();
    CHECK(run_pipeline(s) == 2);
}

TEST_CASE("series study") {
    auto c = small("zero");
    c.series.plane_n = 256;
    c.modes = {};
    c.out_dir = scratch("series_empty").string();
    CHECK(run_series_study(c) == 0);
    CHECK(slurp(fs::path(c.out_dir) / "series.csv") == "m1,m2,n,term_norm,partial_sum_norm\n");

    c.modes = {{1, 1}};
    c.out_dir = scratch("series_one").string();
    CHECK(run_series_study(c) == 0);
    const auto j = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "series.json"));
    CHECK(j["modes"][0]["flag"] == "converged");

    c.series.cutoff_base = 3.0;
    c.out_dir = scratch("series_big").string();
    CHECK(run_series_study(c) == 3);
    const auto k = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "series.json"));
    CHECK(k["modes"][0]["flag"] == "contraction-failed");

    c.modes = {{0, 0}};
    c.out_dir = scratch("series_00").string();
    CHECK(run_series_study(c) == 1);
}

TEST_CASE("bergman identity on a small grid") {
    auto c = small("zero");
    const auto b = bergman_identity_check(ZPoly::monomial(0, 1, 1, 0), c);
    CHECK(b.gap < 1e-6);
    CHECK(b.collapse > 1.0);
    CHECK(b.kernel_agreement < 1e-6);
    const auto h = bergman_identity_check(ZPoly::monomial(1, 0, 1, 0), c);
    CHECK(h.collapse < 1e-10);
    c.out_dir = scratch("bergman").string();
    CHECK(run_bergman_study(c) == 0);
    CHECK(fs::exists(fs::path(c.out_dir) / "bergman.json"));
}

TEST_CASE("sufficiency study") {
    auto c = small("suff-violating");
    c.out_dir = scratch("suff").string();
    CHECK(run_sufficiency_study(c) == 0);
    const auto j = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "sufficiency.json"));
    CHECK(j["sufficiency"]["all_hold"] == false);
}
