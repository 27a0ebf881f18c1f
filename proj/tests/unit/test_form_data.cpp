#include "doctest.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "bidisc/form_data.hpp"

using namespace bidisc;

TEST_CASE("zpoly derivatives") {
    // p = z1^2 conj(z1) z2 + 3 conj(z2)^2
    ZPoly p = ZPoly::monomial(2, 1, 1, 0) + ZPoly::monomial(0, 0, 0, 2, 3.0);
    CHECK(p.dbar(1) == ZPoly::monomial(2, 0, 1, 0));
    CHECK(p.d(1) == ZPoly::monomial(1, 1, 1, 0, 2.0));
    CHECK(p.dbar(2) == ZPoly::monomial(0, 0, 0, 1, 6.0));
    CHECK(p.d(2) == ZPoly::monomial(2, 1, 0, 0));
    // |z1|^2 has Laplacian 4 in R^2.
    CHECK(ZPoly::monomial(1, 1, 0, 0).laplacian() == ZPoly::constant(4.0));
    CHECK(ZPoly::constant(5.0).dbar(2).is_zero());
}

TEST_CASE("zpoly evaluation and products") {
    const ZPoly p = ZPoly::monomial(1, 0, 0, 1) + ZPoly::constant(2.0);
    const cplx z1{0.3, -0.2}, z2{-0.1, 0.5};
    CHECK(std::abs(p.eval(z1, z2) - (z1 * std::conj(z2) + 2.0)) < 1e-15);
    const ZPoly q = p * p;
    CHECK(std::abs(q.eval(z1, z2) - std::pow(p.eval(z1, z2), 2)) < 1e-14);
    ZPoly zero = p;
    zero *= 0.0;
    CHECK(zero.is_zero());
    CHECK((p + p * cplx(-1.0)).is_zero());
    CHECK_THROWS_AS(ZPoly::monomial(-1, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("zpoly modes match evaluation") {
    const ZPoly p = ZPoly::monomial(2, 1, 0, 3, {1, 2}) + ZPoly::monomial(0, 1, 1, 1, -0.5);
    const auto modes = p.modes();
    CHECK(modes.size() == 2);
    CHECK(modes.count({1, -3}) == 1);
    CHECK(modes.count({-1, 0}) == 1);
    CHECK(p.max_mode() == 3);
    const double r1 = 0.7, r2 = 0.4, t1 = 0.9, t2 = -1.3;
    cplx sum = 0;
    for (const auto& [k, ps] : modes) sum += ps.eval(r1, r2) * std::polar(1.0, k.first * t1 + k.second * t2);
    CHECK(std::abs(sum - p.eval(std::polar(r1, t1), std::polar(r2, t2))) < 1e-14);
}

TEST_CASE("zpoly json") {
    const ZPoly p = ZPoly::monomial(1, 0, 0, 1, {0.25, -1}) + ZPoly::constant(3.0);
    CHECK(ZPoly::from_json(p.to_json()) == p);
    CHECK(ZPoly::from_json(nlohmann::json::parse("[[1, 0, 0, 1, 0, 0]]")) == ZPoly::monomial(0, 1, 0, 0));
    CHECK_THROWS_AS(ZPoly::from_json(nlohmann::json::parse("[[1, 0, 0]]")), std::invalid_argument);
    CHECK_THROWS_AS(ZPoly::from_json(nlohmann::json::parse("{}")), std::invalid_argument);
    CHECK(p.str().find("conj(z2)") != std::string::npos);
}

TEST_CASE("corner bump") {
    const CornerBump b{0.3, 0.6};
    CHECK(b(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(b(0.8, 0.75) == doctest::Approx(1.0));
    CHECK(b(0.3, 0.9) == doctest::Approx(0.0));
    CHECK(b(0.55, 1.0) > 0.0);
    CHECK(b(0.55, 1.0) < 1.0);
}

TEST_CASE("form data modes and json") {
    FormData f;
    f.f1 = ZPoly::monomial(0, 1, 1, 0);
    f.f2 = ZPoly::monomial(1, 0, 0, 1);
    f.bump = CornerBump{0.3, 0.6};
    const auto g = make_disc_grid(24, 8, Grading::graded);
    const auto m = f.modes(1, g, g, 3);
    REQUIRE(m.coeffs.count({-1, 1}) == 1);
    const auto& a = m.coeffs.at({-1, 1});
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) CHECK(std::abs(a(i, j) - g.r[i] * g.r[j] * f.bump.value()(g.r[i], g.r[j])) < 1e-15);
    CHECK_THROWS_AS(f.modes(1, g, g, 4), AliasingError);
    FormData big;
    big.f1 = ZPoly::monomial(5, 0, 0, 0);
    CHECK_THROWS_AS(big.modes(1, g, g, 3), AliasingError);

    const auto back = FormData::from_json(f.to_json());
    CHECK(back.f1 == f.f1);
    CHECK(back.f2 == f.f2);
    REQUIRE(back.bump.has_value());
    CHECK(back.bump->outer == 0.6);
    const cplx z1{0.5, 0.1}, z2{0.2, -0.3};
    CHECK(std::abs(back.eval(1, z1, z2) - f.eval(1, z1, z2)) < 1e-15);
}
