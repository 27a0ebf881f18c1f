#include "doctest.h"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "bidisc/recovery.hpp"

using namespace bidisc;

namespace {

constexpr double pi = std::numbers::pi;

ModeCoefficients single_mode(const DiscGrid& g, int m1, int m2, const std::function<cplx(double, double)>& a) {
    ModeCoefficients f;
    f.M = std::max(std::abs(m1), std::abs(m2)) + 1;
    f.r1 = g.r;
    f.r2 = g.r;
    Eigen::MatrixXcd v(g.n_r, g.n_r);
    for (int i = 0; i < g.n_r; ++i)
        for (int j = 0; j < g.n_r; ++j) v(i, j) = a(g.r[i], g.r[j]);
    f.coeffs[{m1, m2}] = v;
    return f;
}

ModeCoefficients from_poly(const ZPoly& p, const DiscGrid& g) {
    FormData d;
    d.f1 = p;
    return d.modes(1, g, g, std::max(p.max_mode() + 1, 1));
}

double max_abs(const ModeCoefficients& f) {
    double m = 0;
    for (const auto& [k, a] : f.coeffs) m = std::max(m, a.cwiseAbs().maxCoeff());
    return m;
}

}  // namespace

TEST_CASE("greens kernel vanishes on the circle") {
    const GreensKernel G;
    const cplx z{0.3, -0.4};
    for (double t : {0.0, 1.0, 2.5, 4.0}) CHECK(std::abs(G(z, std::polar(1.0, t))) < 1e-15);
    CHECK(std::abs(G(z, {0.1, 0.2}) - G({0.1, 0.2}, z)) < 1e-15);
    // The other variant is not a Dirichlet Green's function.
    CHECK(std::abs(GreensKernel::printed_variant(z, std::polar(1.0, 2.5))) > 1e-2);
}

TEST_CASE("greens solve on closed forms") {
    const std::vector<cplx> probes{{0, 0}, {0.5, 0}, {-0.2, 0.6}, {0.0, -0.9}};
    const auto w = greens_dirichlet_disc([](cplx) { return cplx{4.0}; }, probes);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        CHECK(std::abs(w[i].value - (std::norm(probes[i]) - 1)) < 1e-6);
        CHECK(w[i].error_estimate < 1e-4);
    }
    const auto w2 = greens_dirichlet_disc([](cplx z) { return cplx{z.real()}; }, probes);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const double r = std::abs(probes[i]), c = r > 0 ? probes[i].real() / r : 0;
        CHECK(std::abs(w2[i].value - (r * r * r - r) * c / 8) < 1e-6);
    }
    const std::vector<cplx> outside{{1.0, 0.0}};
    CHECK_THROWS_AS(greens_dirichlet_disc([](cplx) { return cplx{1.0}; }, outside), std::invalid_argument);
}

TEST_CASE("cauchy transform") {
    const std::vector<cplx> probes{{0, 0}, {0.3, 0.2}, {-0.5, -0.1}};
    auto one = [](cplx) { return 1.0; };
    const auto u = cauchy_transform([](cplx) { return cplx{1.0}; }, one, probes);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        CHECK(std::abs(u[i].value - std::conj(probes[i])) < 1e-6);
        CHECK_FALSE(u[i].edge_warning);
    }
    // dbar of the transform returns the density: v = z, u = z conj(z) + holomorphic.
    auto v = [](cplx z) { return z; };
    const cplx z0{0.2, -0.1};
    const double h = 1e-4;
    const std::vector<cplx> pts{z0 + h, z0 - h, z0 + cplx(0, h), z0 - cplx(0, h)};
    const auto s = cauchy_transform(v, one, pts, {64, 128});
    const cplx ux = (s[0].value - s[1].value) / (2 * h), uy = (s[2].value - s[3].value) / (2 * h);
    CHECK(std::abs(0.5 * (ux + cplx(0, 1) * uy) - z0) < 1e-5);

    auto narrow = [](cplx z) { return std::abs(z) < 0.4 ? 1.0 : 0.0; };
    const std::vector<cplx> far{{0.6, 0}};
    CHECK(cauchy_transform(v, narrow, far)[0].edge_warning);
}

TEST_CASE("recovery of u from v") {
    const auto g = make_disc_grid(48, 32, Grading::graded);
    // v = conj(z2), mode (0, 1) with a = t, comes from u = |z2|^2, mode (0, 0) with b = r2^2.
    const auto v = single_mode(g, 0, 1, [](double, double t) { return cplx{t}; });
    const auto u = recover_u_from_v(v, 2);
    REQUIRE(u.coeffs.count({0, 0}) == 1);
    const auto& b = u.coeffs.at({0, 0});
    for (int j = 0; j < g.n_r; ++j) CHECK(std::abs(b(5, j) - g.r[j] * g.r[j]) < 1e-10);

    ModeCoefficients zero = v;
    zero.coeffs.begin()->second.setZero();
    CHECK(max_abs(recover_u_from_v(zero, 2)) == 0.0);

    // Smooth data supported away from the origin: the ODE holds and dbar returns the input.
    auto smooth = [](double r1, double t) {
        const double s = std::max(t - 0.3, 0.0);
        return cplx{r1 * r1 * s * s * s * s * std::cos(3 * t), 0.5 * s * s * s * s};
    };
    for (int m2 : {1, 3}) {
        const auto vin = single_mode(g, 2, m2, smooth);
        const auto uo = recover_u_from_v(vin, 2);
        const auto back = mode_dbar(uo, 2, 6);
        const auto diff = back.get(2, m2) - vin.get(2, m2);
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-6 * vin.get(2, m2).cwiseAbs().maxCoeff());
    }
    // Axis 1 is the transpose.
    const auto v1 = single_mode(g, 3, 0, [&](double r, double t) { return smooth(t, r); });
    const auto u1 = recover_u_from_v(v1, 1);
    const auto u2 = recover_u_from_v(single_mode(g, 0, 3, smooth), 2);
    CHECK((u1.get(2, 0) - u2.get(0, 2).transpose()).cwiseAbs().maxCoeff() < 1e-13);

    // t^{-2} a blows up for a = 1 at mode 3 -> output mode 2.
    const auto bad = single_mode(g, 0, 3, [](double, double) { return cplx{1.0}; });
    CHECK_THROWS_AS(recover_u_from_v(bad, 2), NonIntegrableError);
    CHECK_THROWS_AS(recover_u_from_v(bad, 3), std::invalid_argument);
}

TEST_CASE("mode derivatives on polynomials") {
    const auto g = make_disc_grid(40, 32, Grading::graded);
    const ZPoly p = ZPoly::monomial(2, 1, 0, 1) + ZPoly::monomial(0, 2, 3, 1, {0.5, -1});
    const auto f = from_poly(p, g);
    for (int axis : {1, 2}) {
        const auto dd = combine(1.0, mode_dbar(f, axis), -1.0, from_poly(p.dbar(axis), g));
        CHECK(max_abs(dd) < 1e-9);
        const auto d = combine(1.0, mode_d(f, axis), -1.0, from_poly(p.d(axis), g));
        CHECK(max_abs(d) < 1e-9);
    }
    const auto lap = combine(1.0, mode_laplacian(f), -1.0, from_poly(p.laplacian(), g));
    CHECK(max_abs(lap) < 1e-7);
}

TEST_CASE("parseval norm") {
    const auto g = make_disc_grid(40, 32, Grading::graded);
    // ||1||^2 = pi^2, ||z1||^2 = pi^2 / 2.
    CHECK(l2_norm(from_poly(ZPoly::constant(1.0), g)) == doctest::Approx(pi).epsilon(1e-10));
    CHECK(l2_norm(from_poly(ZPoly::monomial(1, 0, 0, 0), g)) == doctest::Approx(pi / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("residual report") {
    const auto g = make_disc_grid(40, 32, Grading::graded);
    const auto z = from_poly(ZPoly::constant(0.0), g);
    const auto zero_rep = residuals_from_modes(z, z, z, z);
    CHECK(zero_rep.pde_residual == 0.0);
    CHECK(zero_rep.bc_dirichlet == 0.0);

    const auto one = from_poly(ZPoly::constant(1.0), g);
    CHECK(residuals_from_modes(one, z, z, z).bc_dirichlet == doctest::Approx(1.0));

    // u1 = z2 conj(z1)(1 - |z1|^2)/4 + (1 - |z1|^4)/8 solves the problem for f1 = conj(z1) z2 + |z1|^2.
    ZPoly u1 = ZPoly::monomial(0, 1, 1, 0, 0.25) + ZPoly::monomial(1, 2, 1, 0, -0.25) + ZPoly::constant(0.125) +
               ZPoly::monomial(2, 2, 0, 0, -0.125);
    const ZPoly f1 = ZPoly::monomial(0, 1, 1, 0) + ZPoly::monomial(1, 1, 0, 0);
    auto swap = [](const ZPoly& p) {
        ZPoly q;
        for (const auto& [k, c] : p.terms()) q.add_term({k[2], k[3], k[0], k[1]}, c);
        return q;
    };
    CHECK((u1.laplacian() + f1 * cplx(2.0)).is_zero());
    const auto rep = residuals_from_modes(from_poly(u1, g), from_poly(swap(u1), g), from_poly(f1, g), from_poly(swap(f1), g));
    CHECK(rep.pde_residual < 1e-7);
    CHECK(rep.bc_dirichlet < 1e-14);
    CHECK(rep.bc_neumann < 1e-9);
    const auto j = rep.to_json();
    CHECK(j.contains("bc_dbar2_u1_r2"));
}

TEST_CASE("bergman projection") {
    const auto g = make_disc_grid(48, 32, Grading::graded);
    const ZPoly hol = ZPoly::constant(1.0) + ZPoly::monomial(2, 0, 1, 0, {0.5, 2});
    CHECK(max_abs(combine(1.0, bergman_project(from_poly(hol, g)), -1.0, from_poly(hol, g))) < 1e-10);
    CHECK(max_abs(bergman_project(from_poly(ZPoly::monomial(0, 1, 1, 0), g))) < 1e-12);
    // P |z1|^2 = 1/2.
    const auto p = bergman_project(from_poly(ZPoly::monomial(1, 1, 0, 0), g));
    CHECK(max_abs(combine(1.0, p, -1.0, from_poly(ZPoly::constant(0.5), g))) < 1e-10);
    CHECK(max_abs(combine(1.0, bergman_project(p), -1.0, p)) < 1e-10);

    // Kernel route at probes.
    const ZPoly q = ZPoly::monomial(1, 1, 0, 0) + ZPoly::monomial(1, 0, 1, 1, 2.0) + ZPoly::monomial(0, 1, 0, 0);
    const std::vector<std::pair<cplx, cplx>> probes{{{0.1, 0.2}, {-0.3, 0.1}}, {{0.4, 0}, {0, 0.2}}};
    const auto k = bergman_project_kernel([&](cplx a, cplx b) { return q.eval(a, b); }, probes);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        // P q = 1/2 + z1 (2 |z2|^2 projects to 1).
        const cplx expect = 0.5 + probes[i].first;
        CHECK(std::abs(k[i] - expect) < 1e-8);
    }
}

TEST_CASE("dbar star") {
    const auto g = make_disc_grid(40, 32, Grading::graded);
    const ZPoly a = ZPoly::monomial(0, 1, 1, 0), b = ZPoly::monomial(2, 0, 1, 1);
    const auto s = dbar_star(from_poly(a, g), from_poly(b, g));
    const ZPoly expect = (a.d(1) + b.d(2)) * cplx(-2.0);
    CHECK(max_abs(combine(1.0, s, -1.0, from_poly(expect, g))) < 1e-9);
}

TEST_CASE("sufficiency conditions") {
    FormData ok;
    ok.f1 = ZPoly::constant(1.0) + ZPoly::monomial(1, 1, 0, 0);
    ok.f2 = ok.f1;
    const auto r = check_sufficiency(ok, 3);
    CHECK(r.all_hold);
    CHECK(r.regularity == 3);

    FormData bad;
    bad.f1 = ZPoly::monomial(0, 0, 0, 1);
    const auto b = check_sufficiency(bad, 2);
    CHECK_FALSE(b.all_hold);
    CHECK(b.regularity == -1);
    CHECK_FALSE(b.rows.front().holds);

    // (1 - |z2|^2)^2 has dbar2 = -2 z2 (1 - |z2|^2): vanishes at r2 = 1, but its second r2-derivative does not.
    FormData partial;
    partial.f1 = ZPoly::constant(1.0) + ZPoly::monomial(0, 0, 1, 1, -2.0) + ZPoly::monomial(0, 0, 2, 2);
    const auto p = check_sufficiency(partial, 2);
    CHECK(p.rows.front().holds);
    CHECK_FALSE(p.all_hold);
    CHECK(p.to_json()["conditions"].size() == p.rows.size());
    CHECK_THROWS_AS(check_sufficiency(ok, -1), std::invalid_argument);
}
