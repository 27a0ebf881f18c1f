#include "bidisc/grid.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "angular.hpp"
#include "bidisc/stencil.hpp"

namespace bidisc {

Grading parse_grading(const std::string& name) {
    if (name == "uniform") return Grading::uniform;
    if (name == "graded" || name == "graded-to-boundary") return Grading::graded;
    throw std::invalid_argument("unknown grading '" + name + "'");
}

std::string to_string(Grading g) { return g == Grading::uniform ? "uniform" : "graded"; }

DiscGrid make_disc_grid(int n_r, int n_theta, Grading grading) {
    if (n_r < 8) throw std::invalid_argument("make_disc_grid: n_r must be >= 8");
    if (n_theta < 8) throw std::invalid_argument("make_disc_grid: n_theta must be >= 8");
    if (n_theta % 2 != 0) throw std::invalid_argument("make_disc_grid: n_theta must be even");
    DiscGrid g;
    g.n_r = n_r;
    g.n_theta = n_theta;
    g.grading = grading;
    g.r.resize(n_r);
    for (int i = 1; i <= n_r; ++i) {
        const double s = static_cast<double>(i) / n_r;
        g.r[i - 1] = grading == Grading::uniform ? s : std::sin(0.5 * std::numbers::pi * s);
    }
    g.r.back() = 1.0;
    g.theta.resize(n_theta);
    for (int k = 0; k < n_theta; ++k) g.theta[k] = 2 * std::numbers::pi * k / n_theta;
    return g;
}

QuadrantGrid make_quadrant_grid(int n_y, double y_max) {
    if (n_y < 2 || !(y_max > 0)) throw std::invalid_argument("make_quadrant_grid: need n_y >= 2 and Y_max > 0");
    QuadrantGrid q;
    q.n_y = n_y;
    q.y_max = y_max;
    q.y.resize(n_y);
    for (int j = 0; j < n_y; ++j) q.y[j] = y_max * j / (n_y - 1);
    q.y.front() = 0.0;
    return q;
}

bool quadrant_fits(const QuadrantGrid& q, const DiscGrid& g) { return std::exp(-q.y_max) > g.r_min(); }

ScalarField::ScalarField(DiscGrid a, DiscGrid b) : g1(std::move(a)), g2(std::move(b)) {
    values.assign(static_cast<std::size_t>(g1.n_r) * g1.n_theta * g2.n_r * g2.n_theta, cplx{});
}

ScalarField ScalarField::sample(const DiscGrid& a, const DiscGrid& b, const std::function<cplx(cplx, cplx)>& fn) {
    ScalarField f(a, b);
    for (int i1 = 0; i1 < a.n_r; ++i1)
        for (int k1 = 0; k1 < a.n_theta; ++k1) {
            const cplx z1 = std::polar(a.r[i1], a.theta[k1]);
            for (int i2 = 0; i2 < b.n_r; ++i2)
                for (int k2 = 0; k2 < b.n_theta; ++k2) f.at(i1, k1, i2, k2) = fn(z1, std::polar(b.r[i2], b.theta[k2]));
        }
    return f;
}

FormField::FormField(ScalarField a, ScalarField b) : c1(std::move(a)), c2(std::move(b)) {
    if (!(c1.g1 == c2.g1 && c1.g2 == c2.g2)) throw std::invalid_argument("FormField: components on different grids");
}

RadialDiff make_radial_diff(const std::vector<double>& r, int m, int order) {
    const int n = static_cast<int>(r.size());
    if (order != 2 && order != 4 && order != 6) throw std::invalid_argument("make_radial_diff: order must be 2, 4 or 6");
    if (n < order + 3) throw std::invalid_argument("make_radial_diff: too few radial nodes for the order");
    // Augmented node list: mirrored ghosts, optionally the origin, then the grid itself.
    // src[k] is the grid index a node reads from (-1: the origin, value 0), sgn[k] the parity factor.
    const int ghosts = order + 2;
    const double parity = (std::abs(m) % 2 == 0) ? 1.0 : -1.0;
    std::vector<double> x;
    std::vector<int> src;
    std::vector<double> sgn;
    for (int k = ghosts; k >= 1; --k) {
        x.push_back(-r[k - 1]);
        src.push_back(k - 1);
        sgn.push_back(parity);
    }
    if (m != 0) {
        x.push_back(0.0);
        src.push_back(-1);
        sgn.push_back(0.0);
    }
    const int offset = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        x.push_back(r[i]);
        src.push_back(i);
        sgn.push_back(1.0);
    }
    const int total = static_cast<int>(x.size());

    RadialDiff out{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    for (int i = 0; i < n; ++i) {
        const int c = offset + i;
        int s = order + 1;
        int lo = c - s / 2;
        if (lo + s > total) {
            ++s;  // off-centred stencils need one extra node to keep the design order
            lo = total - s;
        }
        const auto w = fornberg_weights(x[c], std::span<const double>(x).subspan(lo, s), 2);
        for (int q = 0; q < s; ++q) {
            const int k = lo + q;
            if (src[k] < 0) continue;
            out.d1(i, src[k]) += sgn[k] * w[1][q];
            out.d2(i, src[k]) += sgn[k] * w[2][q];
        }
    }
    return out;
}

namespace {

ScalarField wirtinger_impl(const ScalarField& f, int axis, double tail_tol, bool conj) {
    if (axis != 1 && axis != 2) throw std::invalid_argument("wirtinger: axis must be 1 or 2");
    const DiscGrid& ga = axis == 1 ? f.g1 : f.g2;
    const DiscGrid& gb = axis == 1 ? f.g2 : f.g1;
    const int nr = ga.n_r, nt = ga.n_theta;
    const int shift = conj ? 1 : -1;  // dbar raises the mode index, d lowers it
    ScalarField out(f.g1, f.g2);

    std::vector<RadialDiff> diffs(nt);
    std::vector<bool> built(nt, false);
    auto diff_for = [&](int slot) -> const RadialDiff& {
        if (!built[slot]) {
            diffs[slot] = make_radial_diff(ga.r, detail::slot_mode(slot, nt), 4);
            built[slot] = true;
        }
        return diffs[slot];
    };

    // For every fixed sample of the other disc, transform the (r, theta) slab of this one.
    Eigen::MatrixXcd slab(nr, nt);
    std::vector<cplx> row(nt);
    for (int ib = 0; ib < gb.n_r; ++ib)
        for (int kb = 0; kb < gb.n_theta; ++kb) {
            double peak = 0, tail = 0;
            for (int i = 0; i < nr; ++i) {
                for (int k = 0; k < nt; ++k) row[k] = axis == 1 ? f.at(i, k, ib, kb) : f.at(ib, kb, i, k);
                detail::FftCache::instance().run(row.data(), nt, 1, FFTW_FORWARD);
                for (int s = 0; s < nt; ++s) {
                    slab(i, s) = row[s] / static_cast<double>(nt);
                    const int m = detail::slot_mode(s, nt);
                    const double a = std::abs(slab(i, s));
                    peak = std::max(peak, a);
                    if (std::abs(m) >= nt / 2 - 1) tail = std::max(tail, a);
                }
            }
            if (peak > 0 && tail > tail_tol * peak)
                throw UnderResolvedError("wirtinger: angular spectrum not resolved (tail " + std::to_string(tail / peak) +
                                             ")",
                                         tail / peak);
            Eigen::MatrixXcd res = Eigen::MatrixXcd::Zero(nr, nt);
            for (int s = 0; s < nt; ++s) {
                const int m = detail::slot_mode(s, nt);
                const Eigen::VectorXcd a = slab.col(s);
                if (a.isZero(0.0)) continue;
                const Eigen::VectorXcd da = diff_for(s).d1 * a;
                const int t = detail::mode_slot(m + shift, nt);
                for (int i = 0; i < nr; ++i) {
                    const double sign = conj ? -1.0 : 1.0;
                    res(i, t) += 0.5 * (da(i) + sign * m * a(i) / ga.r[i]);
                }
            }
            for (int i = 0; i < nr; ++i) {
                for (int s = 0; s < nt; ++s) row[s] = res(i, s);
                detail::FftCache::instance().run(row.data(), nt, 1, FFTW_BACKWARD);
                for (int k = 0; k < nt; ++k) (axis == 1 ? out.at(i, k, ib, kb) : out.at(ib, kb, i, k)) = row[k];
            }
        }
    return out;
}

}  // namespace

ScalarField wirtinger_dbar(const ScalarField& f, int axis, double tail_tol) {
    return wirtinger_impl(f, axis, tail_tol, true);
}

ScalarField wirtinger_d(const ScalarField& f, int axis, double tail_tol) {
    return wirtinger_impl(f, axis, tail_tol, false);
}

GridConfig grid_config_from_json(const nlohmann::json& j) {
    GridConfig c;
    if (j.contains("n_r")) c.n_r = j.at("n_r").get<int>();
    if (j.contains("n_theta")) c.n_theta = j.at("n_theta").get<int>();
    if (j.contains("grading")) c.grading = parse_grading(j.at("grading").get<std::string>());
    if (j.contains("Y_max")) c.y_max = j.at("Y_max").get<double>();
    return c;
}

}  // namespace bidisc
