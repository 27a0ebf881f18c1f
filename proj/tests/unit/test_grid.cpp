#include "doctest.h"

#include <cmath>
#include <nlohmann/json.hpp>

#include "bidisc/grid.hpp"

using namespace bidisc;

TEST_CASE("disc grids") {
    const auto g = make_disc_grid(8, 8, Grading::uniform);
    for (int i = 0; i < 8; ++i) CHECK(g.r[i] == doctest::Approx((i + 1) / 8.0).epsilon(1e-15));
    CHECK(g.r.back() == 1.0);
    CHECK(g.theta[1] == doctest::Approx(2 * M_PI / 8));
    CHECK_THROWS_AS(make_disc_grid(8, 7, Grading::uniform), std::invalid_argument);
    CHECK_THROWS_AS(make_disc_grid(0, 8, Grading::uniform), std::invalid_argument);

    const auto gg = make_disc_grid(64, 64, Grading::graded);
    const auto& r = gg.r;
    const double s1 = r[61] - r[60], s2 = r[62] - r[61], s3 = r[63] - r[62];
    CHECK(s1 > s2);
    CHECK(s2 > s3);
    CHECK(r.back() == 1.0);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);
}

TEST_CASE("quadrant grid") {
    const auto q = make_quadrant_grid(65, 4.0);
    CHECK(q.y.front() == 0.0);
    CHECK(q.y.back() == doctest::Approx(4.0));
    CHECK(quadrant_fits(q, make_disc_grid(64, 8, Grading::uniform)));
    CHECK(!quadrant_fits(q, make_disc_grid(16, 8, Grading::uniform)));
}

TEST_CASE("sampling reads nodes back exactly") {
    const auto g = make_disc_grid(8, 8, Grading::graded);
    const auto f = ScalarField::sample(g, g, [](cplx z1, cplx z2) { return z1 * std::conj(z2); });
    const cplx z1 = std::polar(g.r[3], g.theta[5]), z2 = std::polar(g.r[6], g.theta[2]);
    CHECK(f.at(3, 5, 6, 2) == z1 * std::conj(z2));
}

TEST_CASE("Wirtinger derivatives of monomials") {
    const auto g = make_disc_grid(16, 16, Grading::graded);
    auto err = [&](const ScalarField& got, auto exact) {
        double e = 0;
        for (int i1 = 0; i1 < 16; ++i1)
            for (int k1 = 0; k1 < 16; ++k1)
                for (int i2 = 0; i2 < 16; ++i2)
                    for (int k2 = 0; k2 < 16; ++k2)
                        e = std::max(e, std::abs(got.at(i1, k1, i2, k2) -
                                                 exact(std::polar(g.r[i1], g.theta[k1]), std::polar(g.r[i2], g.theta[k2]))));
        return e;
    };
    const auto zb = ScalarField::sample(g, g, [](cplx z1, cplx) { return std::conj(z1); });
    CHECK(err(wirtinger_dbar(zb, 1), [](cplx, cplx) { return cplx(1); }) < 1e-12);
    const auto z = ScalarField::sample(g, g, [](cplx z1, cplx z2) { return z1 * z1 * z2; });
    CHECK(err(wirtinger_dbar(z, 1), [](cplx, cplx) { return cplx(0); }) < 1e-12);
    CHECK(err(wirtinger_dbar(z, 2), [](cplx, cplx) { return cplx(0); }) < 1e-12);
    const auto sq = ScalarField::sample(g, g, [](cplx z1, cplx) { return std::norm(z1); });
    CHECK(err(wirtinger_dbar(sq, 1), [](cplx z1, cplx) { return z1; }) < 1e-12);
    const auto mix = ScalarField::sample(g, g, [](cplx z1, cplx z2) { return std::pow(std::conj(z1), 3) * std::conj(z2); });
    CHECK(err(wirtinger_dbar(mix, 1), [](cplx z1, cplx z2) { return 3.0 * std::conj(z1) * std::conj(z1) * std::conj(z2); }) <
          1e-11);
    CHECK(err(wirtinger_d(sq, 1), [](cplx z1, cplx) { return std::conj(z1); }) < 1e-12);
}

TEST_CASE("radial differentiation converges at fourth order") {
    auto max_err = [](int n) {
        const auto g = make_disc_grid(n, 8, Grading::graded);
        const auto d = make_radial_diff(g.r, 1, 4);
        Eigen::VectorXd a(n), exact(n);
        for (int i = 0; i < n; ++i) {
            a(i) = std::sin(2 * g.r[i]);
            exact(i) = 2 * std::cos(2 * g.r[i]);
        }
        return (d.d1 * a - exact).cwiseAbs().maxCoeff();
    };
    const double ratio = max_err(32) / max_err(64);
    CHECK(ratio > 12);
}

TEST_CASE("undersampled input is reported") {
    const auto g = make_disc_grid(8, 8, Grading::uniform);
    const auto f = ScalarField::sample(g, g, [](cplx z1, cplx) { return std::exp(4.0 * std::conj(z1)); });
    CHECK_THROWS_AS(wirtinger_dbar(f, 1), UnderResolvedError);
}

TEST_CASE("grid config from json") {
    const auto c = grid_config_from_json(nlohmann::json::parse(R"({"n_r": 33, "n_theta": 16, "grading": "uniform", "Y_max": 3.5})"));
    CHECK(c.n_r == 33);
    CHECK(c.grading == Grading::uniform);
    CHECK(c.y_max == 3.5);
    CHECK_THROWS(grid_config_from_json(nlohmann::json::parse(R"({"grading": "cubic"})")));
}
