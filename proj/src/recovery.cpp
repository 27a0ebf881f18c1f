#include "bidisc/recovery.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "bidisc/stencil.hpp"

namespace bidisc {

namespace {

constexpr double pi = std::numbers::pi;

// Distance from z to the unit circle along the ray z + rho e^{i phi}.
double ray_length(cplx z, double phi) {
    const double p = std::real(std::conj(z) * std::polar(1.0, phi));
    return -p + std::sqrt(p * p + 1 - std::norm(z));
}

struct Rule01 {
    std::vector<double> s, w;  // Gauss-Legendre on [0, 1]
};

Rule01 rule01(int n) {
    Rule01 r;
    gauss_legendre(n, r.s, r.w);
    for (int i = 0; i < n; ++i) {
        r.s[i] = 0.5 * (r.s[i] + 1);
        r.w[i] *= 0.5;
    }
    return r;
}

// Polar integral around the probe: sum over rays of int_0^{rho_max} kernel(rho, e^{i phi}) d rho,
// with rho = rho_max s^power.
template <class F>
cplx ray_integral(cplx z, int radial, int angular, int power, F&& integrand) {
    const auto g = rule01(radial);
    cplx total = 0;
    for (int k = 0; k < angular; ++k) {
        const double phi = 2 * pi * k / angular;
        const cplx dir = std::polar(1.0, phi);
        const double L = ray_length(z, phi);
        cplx ray = 0;
        for (int i = 0; i < radial; ++i) {
            const double rho = L * std::pow(g.s[i], power);
            const double jac = L * power * std::pow(g.s[i], power - 1);
            ray += g.w[i] * jac * integrand(rho, dir);
        }
        total += ray;
    }
    return total * (2 * pi / angular);
}

}  // namespace

double GreensKernel::operator()(cplx z, cplx w) const {
    return (std::log(std::abs(z - w)) - std::log(std::abs(1.0 - std::conj(z) * w))) / (2 * pi);
}

double GreensKernel::printed_variant(cplx z, cplx w) {
    return (std::log(std::abs(z - w)) - std::log(std::abs(z / std::abs(z) - w / std::abs(w)))) / (2 * pi);
}

std::vector<QuadratureValue> greens_dirichlet_disc(const std::function<cplx(cplx)>& rhs, std::span<const cplx> probes,
                                                   const DiscRule& rule) {
    const GreensKernel G;
    std::vector<QuadratureValue> out;
    for (const cplx z : probes) {
        if (std::abs(z) >= 1) throw std::invalid_argument("greens_dirichlet_disc: probe outside the open disc");
        auto f = [&](double rho, cplx dir) {
            if (rho == 0) return cplx{};
            const cplx w = z + rho * dir;
            return G(z, w) * rhs(w) * rho;
        };
        const cplx fine = ray_integral(z, rule.radial, rule.angular, 3, f);
        const cplx coarse = ray_integral(z, rule.radial / 2, rule.angular / 2, 3, f);
        out.push_back({fine, std::abs(fine - coarse), false});
    }
    return out;
}

std::vector<QuadratureValue> cauchy_transform(const std::function<cplx(cplx)>& v, const std::function<double(cplx)>& chi,
                                              std::span<const cplx> probes, const DiscRule& rule) {
    std::vector<QuadratureValue> out;
    for (const cplx z : probes) {
        if (std::abs(z) >= 1) throw std::invalid_argument("cauchy_transform: probe outside the open disc");
        auto f = [&](double rho, cplx dir) {
            const cplx w = z + rho * dir;
            return chi(w) * v(w) * std::conj(dir);
        };
        const cplx fine = -ray_integral(z, rule.radial, rule.angular, 1, f) / pi;
        const cplx coarse = -ray_integral(z, rule.radial / 2, rule.angular / 2, 1, f) / pi;
        out.push_back({fine, std::abs(fine - coarse), std::abs(chi(z) - 1.0) > 1e-12});
    }
    return out;
}

ModeCoefficients recover_u_from_v(const ModeCoefficients& v, int axis) {
    if (axis != 1 && axis != 2) throw std::invalid_argument("recover_u_from_v: axis is 1 or 2");
    const auto& r = axis == 2 ? v.r2 : v.r1;
    const std::size_t n = r.size();
    std::vector<double> nodes(n + 1, 0.0);
    std::copy(r.begin(), r.end(), nodes.begin() + 1);
    const auto panels = panel_quadrature_weights(nodes, 6);

    ModeCoefficients out;
    out.M = v.M;
    out.r1 = v.r1;
    out.r2 = v.r2;
    for (const auto& [key, a_in] : v.coeffs) {
        const int m = (axis == 2 ? key.second : key.first) - 1;
        const ModeKey target = axis == 2 ? ModeKey{key.first, m} : ModeKey{m, key.second};
        // Work with the integration axis along the columns.
        const Eigen::MatrixXcd a = axis == 2 ? a_in : Eigen::MatrixXcd(a_in.transpose());
        Eigen::MatrixXcd b(a.rows(), a.cols());
        for (Eigen::Index row = 0; row < a.rows(); ++row) {
            // g(t) = t^{-m} a(t), with g(0) = 0 for the regular branch.
            std::vector<cplx> g(n + 1, cplx{});
            double inner = 0, outer = 0;
            for (std::size_t i = 0; i < n; ++i) {
                g[i + 1] = std::pow(r[i], -m) * a(row, static_cast<Eigen::Index>(i));
                (r[i] < 0.25 ? inner : outer) = std::max(r[i] < 0.25 ? inner : outer, std::abs(g[i + 1]));
            }
            if (m > 0 && inner > 10 * outer && inner > 1e-200)
                throw NonIntegrableError("recover_u_from_v: t^-" + std::to_string(m) +
                                         " a grows near t = 0; the data is not supported away from the origin");
            cplx acc = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const auto& pw = panels[k];
                for (std::size_t q = 0; q < pw.w.size(); ++q) acc += pw.w[q] * g[pw.lo + q];
                b(row, static_cast<Eigen::Index>(k)) = 2.0 * std::pow(r[k], m) * acc;
            }
        }
        out.coeffs[target] = axis == 2 ? b : Eigen::MatrixXcd(b.transpose());
    }
    return out;
}

namespace {

// shift = +1 for dbar, -1 for d.
ModeCoefficients mode_wirtinger(const ModeCoefficients& f, int axis, int order, int shift) {
    ModeCoefficients out;
    out.M = f.M + 1;
    out.r1 = f.r1;
    out.r2 = f.r2;
    const auto& r = axis == 1 ? f.r1 : f.r2;
    for (const auto& [key, a] : f.coeffs) {
        const int m = axis == 1 ? key.first : key.second;
        const auto D = make_radial_diff(r, m, order);
        Eigen::VectorXd inv_r(static_cast<Eigen::Index>(r.size()));
        for (std::size_t i = 0; i < r.size(); ++i) inv_r(static_cast<Eigen::Index>(i)) = 1.0 / r[i];
        Eigen::MatrixXcd out_a;
        if (axis == 1)
            out_a = 0.5 * (D.d1.cast<cplx>() * a - static_cast<double>(shift * m) * (inv_r.cast<cplx>().asDiagonal() * a));
        else
            out_a = 0.5 * (a * D.d1.transpose().cast<cplx>() - static_cast<double>(shift * m) * (a * inv_r.cast<cplx>().asDiagonal()));
        const ModeKey target = axis == 1 ? ModeKey{key.first + shift, key.second} : ModeKey{key.first, key.second + shift};
        auto it = out.coeffs.find(target);
        if (it == out.coeffs.end())
            out.coeffs.emplace(target, std::move(out_a));
        else
            it->second += out_a;
    }
    return out;
}

Eigen::MatrixXd radial_laplacian(const std::vector<double>& r, int m, int order) {
    const auto D = make_radial_diff(r, m, order);
    Eigen::MatrixXd L = D.d2;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        L.row(k) += D.d1.row(k) / r[i];
        L(k, k) -= static_cast<double>(m) * m / (r[i] * r[i]);
    }
    return L;
}

}  // namespace

ModeCoefficients mode_dbar(const ModeCoefficients& f, int axis, int order) { return mode_wirtinger(f, axis, order, +1); }
ModeCoefficients mode_d(const ModeCoefficients& f, int axis, int order) { return mode_wirtinger(f, axis, order, -1); }

ModeCoefficients mode_laplacian(const ModeCoefficients& f, int order) {
    ModeCoefficients out;
    out.M = f.M;
    out.r1 = f.r1;
    out.r2 = f.r2;
    for (const auto& [key, a] : f.coeffs) {
        const Eigen::MatrixXd L1 = radial_laplacian(f.r1, key.first, order);
        const Eigen::MatrixXd L2 = radial_laplacian(f.r2, key.second, order);
        out.coeffs[key] = L1.cast<cplx>() * a + a * L2.transpose().cast<cplx>();
    }
    return out;
}

double l2_norm(const ModeCoefficients& f) {
    const auto w1 = radial_quadrature_weights(f.r1, 6), w2 = radial_quadrature_weights(f.r2, 6);
    double s = 0;
    for (const auto& [key, a] : f.coeffs)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                s += w1[i] * w2[j] * f.r1[i] * f.r2[j] * std::norm(a(i, j));
    return 2 * pi * std::sqrt(s);
}

namespace {

nlohmann::json fit_json(const CornerFit& f) {
    return {{"degree", f.degree},
            {"window", {f.window.center_y1, f.window.center_y2, f.window.inner, f.window.outer}},
            {"n_samples", f.n_samples},
            {"residual", f.residual},
            {"alpha_scale", f.alpha_scale},
            {"gamma_scale", f.gamma_scale},
            {"singular_energy", f.singular_energy},
            {"log_y1_diagnostic", f.log_y1_diagnostic}};
}

// max over (i1, i2) in the index box of sum over modes |a_m(i1, i2)|.
template <class Keep>
double mode_sum_max(const ModeCoefficients& f, Keep&& keep) {
    if (f.coeffs.empty()) return 0.0;
    const auto rows = static_cast<Eigen::Index>(f.r1.size()), cols = static_cast<Eigen::Index>(f.r2.size());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(rows, cols);
    for (const auto& [key, a] : f.coeffs) acc += a.cwiseAbs();
    double m = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            if (keep(i, j)) m = std::max(m, acc(i, j));
    return m;
}

}  // namespace

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json j;
    j["pde_residual"] = pde_residual;
    j["bc_dirichlet"] = bc_dirichlet;
    j["bc_neumann"] = bc_neumann;
    j["bergman_gap"] = bergman_gap;
    j["bc_u1_r1"] = bc[0];
    j["bc_u2_r2"] = bc[1];
    j["bc_dbar2_u1_r2"] = bc[2];
    j["bc_dbar1_u2_r1"] = bc[3];
    j["corner_fits"] = nlohmann::json::array();
    for (const auto& f : corner_fits) j["corner_fits"].push_back(fit_json(f));
    return j;
}

VerificationReport residuals_from_modes(const ModeCoefficients& u1, const ModeCoefficients& u2,
                                        const ModeCoefficients& f1, const ModeCoefficients& f2, int order, int collar) {
    VerificationReport rep;
    const auto n1 = static_cast<Eigen::Index>(u1.r1.size()), n2 = static_cast<Eigen::Index>(u1.r2.size());
    auto interior = [&](Eigen::Index i, Eigen::Index j) { return i < n1 - collar && j < n2 - collar; };
    for (int c = 1; c <= 2; ++c) {
        const auto& u = c == 1 ? u1 : u2;
        const auto& f = c == 1 ? f1 : f2;
        rep.pde_residual = std::max(rep.pde_residual, mode_sum_max(combine(1.0, mode_laplacian(u, order), 2.0, f), interior));
    }
    rep.bc[0] = mode_sum_max(u1, [&](Eigen::Index i, Eigen::Index) { return i == n1 - 1; });
    rep.bc[1] = mode_sum_max(u2, [&](Eigen::Index, Eigen::Index j) { return j == n2 - 1; });
    rep.bc[2] = mode_sum_max(mode_dbar(u1, 2, order), [&](Eigen::Index, Eigen::Index j) { return j == n2 - 1; });
    rep.bc[3] = mode_sum_max(mode_dbar(u2, 1, order), [&](Eigen::Index i, Eigen::Index) { return i == n1 - 1; });
    rep.bc_dirichlet = std::max(rep.bc[0], rep.bc[1]);
    rep.bc_neumann = std::max(rep.bc[2], rep.bc[3]);
    return rep;
}

VerificationReport pde_and_boundary_residuals(const FormField& u, const FormField& f, int order, int collar) {
    const int M = std::min(u.c1.g1.n_theta, u.c1.g2.n_theta) / 2 - 1;
    return residuals_from_modes(decompose(u.c1, M), decompose(u.c2, M), decompose(f.c1, M), decompose(f.c2, M), order,
                                collar);
}

ModeCoefficients bergman_project(const ModeCoefficients& g) {
    const auto w1 = radial_quadrature_weights(g.r1, 6), w2 = radial_quadrature_weights(g.r2, 6);
    ModeCoefficients out;
    out.M = g.M;
    out.r1 = g.r1;
    out.r2 = g.r2;
    for (const auto& [key, a] : g.coeffs) {
        const auto [n1, n2] = key;
        if (n1 < 0 || n2 < 0) continue;
        cplx c = 0;
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                c += w1[i] * w2[j] * a(i, j) * std::pow(g.r1[i], n1 + 1) * std::pow(g.r2[j], n2 + 1);
        c *= 4.0 * (n1 + 1) * (n2 + 1);
        Eigen::MatrixXcd p(a.rows(), a.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j) p(i, j) = c * std::pow(g.r1[i], n1) * std::pow(g.r2[j], n2);
        out.coeffs[key] = std::move(p);
    }
    return out;
}

std::vector<cplx> bergman_project_kernel(const std::function<cplx(cplx, cplx)>& g,
                                         std::span<const std::pair<cplx, cplx>> probes, int radial, int angular) {
    const auto rr = rule01(radial);
    // Area nodes of one disc: w = rho e^{i phi}, weight rho d rho d phi.
    std::vector<cplx> w;
    std::vector<double> wt;
    for (int i = 0; i < radial; ++i)
        for (int k = 0; k < angular; ++k) {
            w.push_back(std::polar(rr.s[i], 2 * pi * k / angular));
            wt.push_back(rr.w[i] * rr.s[i] * 2 * pi / angular);
        }
    const std::size_t N = w.size();
    std::vector<cplx> G(N * N);
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b) G[a * N + b] = g(w[a], w[b]);
    std::vector<cplx> out;
    for (const auto& [z1, z2] : probes) {
        std::vector<cplx> k2(N);
        for (std::size_t b = 0; b < N; ++b) {
            const cplx d = 1.0 - z2 * std::conj(w[b]);
            k2[b] = wt[b] / (pi * d * d);
        }
        cplx s = 0;
        for (std::size_t a = 0; a < N; ++a) {
            const cplx d = 1.0 - z1 * std::conj(w[a]);
            cplx inner = 0;
            for (std::size_t b = 0; b < N; ++b) inner += k2[b] * G[a * N + b];
            s += wt[a] / (pi * d * d) * inner;
        }
        out.push_back(s);
    }
    return out;
}

ModeCoefficients dbar_star(const ModeCoefficients& u1, const ModeCoefficients& u2, int order) {
    return combine(-2.0, mode_d(u1, 1, order), -2.0, mode_d(u2, 2, order));
}

nlohmann::json SufficiencyReport::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["regularity"] = regularity;
    j["all_hold"] = all_hold;
    j["conditions"] = nlohmann::json::array();
    for (const auto& r : rows) j["conditions"].push_back({{"j", r.j}, {"k", r.k}, {"value", r.value}, {"holds", r.holds}});
    return j;
}

SufficiencyReport check_sufficiency(const FormData& f, int n, double tol) {
    if (n < 0) throw std::invalid_argument("check_sufficiency: n must be non-negative");
    const auto g = f.f1.dbar(2).modes();
    auto falling = [](int k, int p) {
        double v = 1;
        for (int q = 0; q < p; ++q) v *= k - q;
        return v;
    };
    SufficiencyReport rep;
    rep.n = n;
    for (int total = 0; total <= n + 2; ++total)
        for (int j = 0; j <= total; ++j) {
            const int k = total - j;
            SufficiencyRow row{j, k, 0.0, true};
            for (const auto& [key, ps] : g) {
                cplx v = 0;
                double scale = 0;
                for (const auto& t : ps.terms) {
                    const double w = falling(t.k1, 2 * j) * falling(t.k2, 2 * k);
                    v += t.c * w;
                    scale += std::abs(t.c * w);
                }
                row.value = std::max(row.value, std::abs(v));
                if (std::abs(v) > tol * std::max(scale, 1.0)) row.holds = false;
            }
            rep.rows.push_back(row);
        }
    rep.regularity = -1;
    for (int np = 0; np <= n; ++np) {
        bool ok = true;
        for (const auto& r : rep.rows)
            if (r.j + r.k <= np + 2 && !r.holds) ok = false;
        if (!ok) break;
        rep.regularity = np;
    }
    rep.all_hold = rep.regularity == n;
    return rep;
}

}  // namespace bidisc
