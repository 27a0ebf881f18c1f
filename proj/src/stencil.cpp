#include "bidisc/stencil.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace bidisc {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes, int max_order) {
    const int n = static_cast<int>(nodes.size());
    if (n == 0 || max_order < 0 || max_order >= n)
        throw std::invalid_argument("fornberg_weights: need more nodes than the derivative order");
    std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
    double c1 = 1, c4 = nodes[0] - x0;
    c[0][0] = 1;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

std::vector<PanelWeights> panel_quadrature_weights(std::span<const double> nodes, int degree) {
    const std::size_t n = nodes.size();
    if (n < 2) throw std::invalid_argument("panel_quadrature_weights: need at least two nodes");
    const int p = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(degree) + 1, n));
    std::vector<PanelWeights> out(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double a = nodes[k], b = nodes[k + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        const std::size_t lo = detail::local_window(nodes, mid, p);
        // Moments of the scaled monomials over the panel, matched by the local nodes.
        Eigen::MatrixXd V(p, p);
        Eigen::VectorXd mom(p);
        for (int q = 0; q < p; ++q) {
            for (int i = 0; i < p; ++i) V(q, i) = std::pow((nodes[lo + i] - mid) / half, q);
            mom(q) = (q % 2 == 0) ? 2.0 * half / (q + 1) : 0.0;
        }
        const Eigen::VectorXd x = V.colPivHouseholderQr().solve(mom);
        out[k].lo = lo;
        out[k].w.assign(x.data(), x.data() + p);
    }
    return out;
}

std::vector<double> interval_quadrature_weights(std::span<const double> nodes, int degree) {
    std::vector<double> w(nodes.size(), 0.0);
    for (const auto& pw : panel_quadrature_weights(nodes, degree))
        for (std::size_t i = 0; i < pw.w.size(); ++i) w[pw.lo + i] += pw.w[i];
    return w;
}

std::vector<double> radial_quadrature_weights(std::span<const double> r_nodes, int degree) {
    std::vector<double> aug(r_nodes.size() + 1);
    aug[0] = 0.0;
    std::copy(r_nodes.begin(), r_nodes.end(), aug.begin() + 1);
    const auto w = interval_quadrature_weights(aug, degree);
    return std::vector<double>(w.begin() + 1, w.end());
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
    }
}

}  // namespace bidisc
