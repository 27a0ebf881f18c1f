#include <cmath>
#include <numbers>

#include "bidisc/log_neumann.hpp"
#include "doctest.h"

using namespace bidisc;

namespace {

// y1 y2 exp(-|y|^2 / s^2): odd in both variables, negligible at the box edge.
PlaneField odd_gaussian(const PlaneGrid& g, double s, double c1 = 0, double c2 = 0) {
    PlaneField f(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const double y1 = g.y[i], y2 = g.y[j];
            f.at(i, j) = y1 * y2 * std::exp(-(y1 * y1 + y2 * y2) / (s * s)) * cplx(1 + c1 * y1 * y1, c2 * y2 * y2);
        }
    return f;
}

double max_abs(const PlaneField& f) {
    double m = 0;
    for (const auto& x : f.v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("plane grid has y = 0 as a node") {
    const auto g = make_plane_grid(64, 4.0);
    CHECK(g.h == doctest::Approx(0.125));
    CHECK(g.y[g.zero_index()] == 0.0);
    CHECK(g.y[g.mirror(10)] == doctest::Approx(-g.y[10]));
    CHECK_THROWS_AS(make_plane_grid(63, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(make_plane_grid(64, 0.0), std::invalid_argument);
}

TEST_CASE("log coordinates: substitution, odd symmetry, axes") {
    const auto g = make_plane_grid(128, 4.0);
    // a = (1 - r1)(1 - r2)
    const PowerSum2 a{{{1, 0, 0}, {-1, 1, 0}, {-1, 0, 1}, {1, 1, 1}}};
    const auto f = to_log_coords_exact(a, 0, 0, g);
    const int k = g.zero_index() + 11;
    const double y = g.y[k];
    CHECK(std::abs(f.A.at(k, k) - (1 - std::exp(-y)) * (1 - std::exp(-y))) < 1e-15);
    for (int i = 1; i < g.n; ++i)
        for (int j = 1; j < g.n; ++j) {
            CHECK(f.A.at(g.mirror(i), j) == -f.A.at(i, j));
            CHECK(f.A.at(i, g.mirror(j)) == -f.A.at(i, j));
        }
    for (int j = 0; j < g.n; ++j) {
        CHECK(f.A.at(g.zero_index(), j) == cplx{});
        CHECK(f.A.at(j, g.zero_index()) == cplx{});
    }
    // Spot value from the closed form at y = log 2: a(1/2, 1/2) = 1/4.
    CHECK(a.eval(std::exp(-std::log(2.0)), std::exp(-std::log(2.0))).real() == doctest::Approx(0.25));
}

TEST_CASE("log coordinates from radial samples agree with the closed form") {
    const auto g = make_plane_grid(128, 3.0);
    const auto disc = make_disc_grid(128, 8, Grading::uniform);
    const auto a = PowerSum2::bubble(2, 3, 2);
    const Eigen::MatrixXcd as = a.sample(disc.r, disc.r);
    Eigen::MatrixXcd cs(as.rows(), as.cols());
    for (Eigen::Index i = 0; i < cs.rows(); ++i)
        for (Eigen::Index j = 0; j < cs.cols(); ++j) cs(i, j) = a.apply_operator(2, 3, disc.r[i], disc.r[j]);
    const auto f = to_log_coords(as, cs, disc.r, disc.r, 2, 3, g);
    const auto e = to_log_coords_exact(a, 2, 3, g);
    CHECK_FALSE(f.extrapolated);
    CHECK(max_abs(f.A - e.A) < 1e-8);
    CHECK(max_abs(f.C - e.C) < 1e-8);
    CHECK(max_abs(f.A_y1 - e.A_y1) < 1e-5);
    CHECK(max_abs(f.A_y2 - e.A_y2) < 1e-5);

    const auto zero = to_log_coords(Eigen::MatrixXcd::Zero(as.rows(), as.cols()), Eigen::MatrixXcd::Zero(as.rows(), as.cols()),
                                    disc.r, disc.r, 2, 3, g);
    CHECK(max_abs(zero.A) == 0.0);

    // A graded grid starts at r_1 = sin(pi / 256) > e^{-6}: the tail is extrapolated and flagged.
    const auto graded = make_disc_grid(128, 8, Grading::graded);
    const auto far = make_plane_grid(128, 6.0);
    const Eigen::MatrixXcd ag = a.sample(graded.r, graded.r);
    CHECK(to_log_coords(ag, ag, graded.r, graded.r, 2, 3, far).extrapolated);
}

TEST_CASE("multiplier factors") {
    const auto [f1, f2] = multiplier_factors(3, 4, 0.0, 0.0);
    CHECK(f1 == doctest::Approx(9.0 / 25.0));
    CHECK(f2 == doctest::Approx(16.0 / 25.0));
    CHECK_THROWS_AS(multiplier_factors(0, 0, 0.0, 0.0), std::invalid_argument);
    const auto g = make_plane_grid(128, 4.0);
    for (auto [m1, m2] : {std::pair{0, 1}, {1, 0}, {1, 1}, {3, 4}, {8, 8}})
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                const double e1 = 2 * std::numbers::pi * (i < g.n / 2 ? i : i - g.n) / (g.n * g.h);
                const double e2 = 2 * std::numbers::pi * (j < g.n / 2 ? j : j - g.n) / (g.n * g.h);
                const auto [a, b] = multiplier_factors(m1, m2, e1, e2);
                REQUIRE(a + b == 1.0);
                REQUIRE(a >= 0.0);
                REQUIRE(b >= 0.0);
            }
}

TEST_CASE("apply_K: zero, oddness, errors") {
    const auto g = make_plane_grid(128, 4.0);
    CHECK(max_abs(apply_K(PlaneField(g), 1, 1)) == 0.0);
    const auto phi = odd_gaussian(g, 0.5, 0.3, 0.5);
    const auto k = apply_K(phi, 2, 1);
    const double peak = max_abs(k);
    for (int i = 1; i < g.n; ++i)
        for (int j = 1; j < g.n; ++j) {
            CHECK(std::abs(k.at(g.mirror(i), j) + k.at(i, j)) < 1e-14 * peak);
            CHECK(std::abs(k.at(i, g.mirror(j)) + k.at(i, j)) < 1e-14 * peak);
        }
    CHECK_THROWS_AS(apply_K(phi, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(apply_K(odd_gaussian(g, 2.5), 1, 1), WrapAroundError);
}

TEST_CASE("apply_K matches a dense quadrature of its defining integrals") {
    // Transform pair evaluated by explicit sums: F(eta) = h^2 sum e^{-i eta.y} psi(y), and the
    // inverse (1 / (n h)^2) sum_eta e^{i eta.y} ... at a 32 x 32 probe set.
    const auto g = make_plane_grid(64, 4.0);
    const int m1 = 1, m2 = 2;
    const auto phi = odd_gaussian(g, 0.5, 0.2, 0.0);
    const auto k = apply_K(phi, m1, m2);
    const int n = g.n;
    const double L = n * g.h;
    std::vector<double> eta(n);
    for (int s = 0; s < n; ++s) eta[s] = 2 * std::numbers::pi * (s < n / 2 ? s : s - n) / L;
    std::vector<cplx> F2(n * n), F1(n * n);
    std::vector<cplx> e(n * n);  // e[s * n + i] = exp(-i eta_s y_i)
    for (int s = 0; s < n; ++s)
        for (int i = 0; i < n; ++i) e[s * n + i] = std::polar(1.0, -eta[s] * g.y[i]);
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            cplx a = 0, b = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const cplx w = e[s * n + i] * e[t * n + j] * phi.at(i, j);
                    a += (1 - std::exp(-2 * std::abs(g.y[j]))) * w;
                    b += (1 - std::exp(-2 * std::abs(g.y[i]))) * w;
                }
            const double d = eta[s] * eta[s] + m1 * m1 + eta[t] * eta[t] + m2 * m2;
            F2[s * n + t] = (eta[s] * eta[s] + m1 * m1) / d * a * g.h * g.h;
            F1[s * n + t] = (eta[t] * eta[t] + m2 * m2) / d * b * g.h * g.h;
        }
    double worst = 0;
    for (int i = 0; i < n; i += 2)
        for (int j = 0; j < n; j += 2) {
            cplx v = 0;
            for (int s = 0; s < n; ++s)
                for (int t = 0; t < n; ++t) v += std::conj(e[s * n + i] * e[t * n + j]) * (F2[s * n + t] + F1[s * n + t]);
            v /= L * L;
            worst = std::max(worst, std::abs(v - k.at(i, j)));
        }
    CHECK(worst < 1e-8 * max_abs(k));
}

TEST_CASE("shifted Laplacian solve recovers a smooth odd field") {
    const auto g = make_plane_grid(128, 5.0);
    const int m1 = 1, m2 = 2;
    const double s = 0.9;
    PlaneField phi(g), h(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const double y1 = g.y[i], y2 = g.y[j], q = (y1 * y1 + y2 * y2) / (s * s);
            const double E = std::exp(-q);
            phi.at(i, j) = y1 * y2 * E;
            // Delta(y1 y2 E) = y1 y2 E (4 q / s^2 - 12 / s^2)
            h.at(i, j) = y1 * y2 * E * (4 * q / (s * s) - 12 / (s * s)) - (m1 * m1 + m2 * m2) * y1 * y2 * E;
        }
    CHECK(max_abs(solve_shifted_laplacian(h, m1, m2) - phi) < 1e-10);
    CHECK_THROWS_AS(solve_shifted_laplacian(h, 0, 0), std::invalid_argument);
}

TEST_CASE("cutoff family: nesting, range, footprints") {
    const auto g = make_plane_grid(256, 4.0);
    const auto fam = make_cutoffs(1.0, 5, 1.15, 4.0);
    REQUIRE(fam.bumps.size() == 5);
    for (std::size_t j = 1; j < fam.bumps.size(); ++j) {
        CHECK(fam.bumps[j].inner() >= fam.bumps[j - 1].outer());
        for (int i = 0; i < g.n; i += 3)
            for (int k = 0; k < g.n; k += 3) {
                const double a = fam.bumps[j - 1](g.y[i], g.y[k]), b = fam.bumps[j](g.y[i], g.y[k]);
                REQUIRE(b >= 0.0);
                REQUIRE(b <= 1.0);
                if (a > 0) REQUIRE(b == 1.0);
            }
    }
    CHECK(fam.chi(1).inner() == fam.bumps[1].inner());
    CHECK(make_cutoffs(1.0, 5, 1.15, 4.0, 0.0, 0).chi(1).inner() == 1.0);
    CHECK_THROWS_AS(fam.chi(5), std::out_of_range);

    const auto grow = fam.footprint_areas(g);
    for (std::size_t j = 1; j < grow.size(); ++j) CHECK(grow[j] > grow[j - 1]);
    const auto shrink = make_cutoffs(1.0, 5, 1.15, 4.0, 0.5).footprint_areas(g);
    for (std::size_t j = 1; j < shrink.size(); ++j) CHECK(shrink[j] < shrink[j - 1]);
    for (double s : fam.footprint_sup(g)) CHECK(s == doctest::Approx(1.0).epsilon(0.05));

    CHECK_THROWS_AS(make_cutoffs(1.0, 12, 1.15, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(make_cutoffs(1.0, 3, 0.9, 4.0), std::invalid_argument);
}

TEST_CASE("series config from json") {
    const auto c = series_config_from_json(R"({"Y_max": 3, "plane_n": 256, "cutoff_base": 0.5, "series_terms": 4})");
    CHECK(c.y_max == 3.0);
    CHECK(c.plane_n == 256);
    CHECK(c.cutoff_growth == 1.25);
    CHECK(c.cutoffs().bumps.size() == 6);
}

TEST_CASE("series: zero data, contraction, Cauchy increments") {
    SeriesConfig cfg;
    cfg.plane_n = 512;
    const auto g = make_plane_grid(cfg.plane_n, cfg.y_max);
    const auto fam = cfg.cutoffs();
    const auto zero = neumann_series_solve(PlaneField(g), 1, 1, fam, cfg.series_terms);
    CHECK(max_abs(zero.sum) == 0.0);

    for (auto [m1, m2] : {std::pair{0, 1}, {1, 1}, {4, 4}, {8, 8}}) {
        CAPTURE(m1);
        CAPTURE(m2);
        const auto f = to_log_coords_exact(PowerSum2::bubble(m1, m2), m1, m2, g);
        const auto r = neumann_series_solve(cutoff_rhs(f, fam.data()), m1, m2, fam, cfg.series_terms);
        CHECK_FALSE(r.contraction_failed);
        for (std::size_t n = 1; n < r.term_norms.size(); ++n) CHECK(r.term_norms[n] < r.term_norms[n - 1]);
        for (std::size_t n = 3; n < r.increment_norms.size(); ++n) CHECK(r.increment_norms[n] < r.increment_norms[n - 1]);
        // Truncated series against the exact transformed bubble where every cutoff is 1. The thin
        // cutoffs are only a few cells wide at this resolution, hence the loose bound.
        const double rel = (r.sum - f.A).l2_within(fam.inner_radius()) / f.A.l2_within(fam.inner_radius());
        CHECK(rel < 2e-2);
    }
    CHECK_THROWS_AS(neumann_series_solve(PlaneField(g), 1, 1, fam, cfg.series_terms + 1), std::invalid_argument);
}

TEST_CASE("series csv") {
    SeriesResult r;
    r.term_norms = {1.0, 0.5};
    r.partial_sum_norms = {1.0, 1.25};
    CHECK(series_csv(1, 2, r) == "1,2,0,1,1\n1,2,1,0.5,1.25\n");
}
