#include "bidisc/fourier_modes.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "angular.hpp"

namespace bidisc {

Eigen::MatrixXcd ModeCoefficients::get(int m1, int m2) const {
    if (const auto* p = find(m1, m2)) return *p;
    return Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(r1.size()), static_cast<Eigen::Index>(r2.size()));
}

const Eigen::MatrixXcd* ModeCoefficients::find(int m1, int m2) const {
    const auto it = coeffs.find({m1, m2});
    return it == coeffs.end() ? nullptr : &it->second;
}

double ModeCoefficients::tail() const {
    double peak = 0, tail = 0;
    for (const auto& [k, a] : coeffs) {
        const double v = a.cwiseAbs().maxCoeff();
        peak = std::max(peak, v);
        if (std::max(std::abs(k.first), std::abs(k.second)) == M) tail = std::max(tail, v);
    }
    return peak > 0 ? tail / peak : 0.0;
}

namespace {

void check_truncation(int M, const DiscGrid& g1, const DiscGrid& g2) {
    if (M < 0) throw std::invalid_argument("decompose: M must be non-negative");
    const int lim = std::min(g1.n_theta, g2.n_theta) / 2 - 1;
    if (M > lim)
        throw AliasingError("decompose: M = " + std::to_string(M) + " aliases on n_theta = " +
                            std::to_string(std::min(g1.n_theta, g2.n_theta)) + " (limit " + std::to_string(lim) + ")");
}

template <class Sampler>
ModeCoefficients decompose_impl(Sampler&& sampler, const DiscGrid& g1, const DiscGrid& g2, int M, double prune) {
    check_truncation(M, g1, g2);
    const int n1 = g1.n_theta, n2 = g2.n_theta;
    ModeCoefficients out;
    out.M = M;
    out.r1 = g1.r;
    out.r2 = g2.r;
    for (int m1 = -M; m1 <= M; ++m1)
        for (int m2 = -M; m2 <= M; ++m2) out.coeffs[{m1, m2}] = Eigen::MatrixXcd::Zero(g1.n_r, g2.n_r);
    // Pointers in key order so the inner loop avoids map lookups.
    std::vector<Eigen::MatrixXcd*> slots;
    for (auto& [k, a] : out.coeffs) slots.push_back(&a);

    std::vector<cplx> buf(static_cast<std::size_t>(n1) * n2);
    const double scale = 1.0 / (static_cast<double>(n1) * n2);
    for (int i1 = 0; i1 < g1.n_r; ++i1)
        for (int i2 = 0; i2 < g2.n_r; ++i2) {
            sampler(i1, i2, buf);
            detail::FftCache::instance().run(buf.data(), n1, n2, FFTW_FORWARD);
            std::size_t s = 0;
            for (int m1 = -M; m1 <= M; ++m1)
                for (int m2 = -M; m2 <= M; ++m2, ++s)
                    (*slots[s])(i1, i2) =
                        buf[static_cast<std::size_t>(detail::mode_slot(m1, n1)) * n2 + detail::mode_slot(m2, n2)] * scale;
        }
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();) {
        if (prune >= 0 && it->second.cwiseAbs().maxCoeff() <= prune)
            it = out.coeffs.erase(it);
        else
            ++it;
    }
    return out;
}

}  // namespace

ModeCoefficients decompose(const ScalarField& f, int M, double prune) {
    const int n1 = f.g1.n_theta, n2 = f.g2.n_theta;
    return decompose_impl(
        [&](int i1, int i2, std::vector<cplx>& buf) {
            for (int k1 = 0; k1 < n1; ++k1)
                for (int k2 = 0; k2 < n2; ++k2) buf[static_cast<std::size_t>(k1) * n2 + k2] = f.at(i1, k1, i2, k2);
        },
        f.g1, f.g2, M, prune);
}

ModeCoefficients decompose(const std::function<cplx(cplx, cplx)>& fn, const DiscGrid& g1, const DiscGrid& g2, int M,
                           double prune) {
    const int n1 = g1.n_theta, n2 = g2.n_theta;
    return decompose_impl(
        [&](int i1, int i2, std::vector<cplx>& buf) {
            for (int k1 = 0; k1 < n1; ++k1) {
                const cplx z1 = std::polar(g1.r[i1], g1.theta[k1]);
                for (int k2 = 0; k2 < n2; ++k2)
                    buf[static_cast<std::size_t>(k1) * n2 + k2] = fn(z1, std::polar(g2.r[i2], g2.theta[k2]));
            }
        },
        g1, g2, M, prune);
}

ScalarField reconstruct(const ModeCoefficients& modes, const DiscGrid& g1, const DiscGrid& g2) {
    if (modes.r1 != g1.r || modes.r2 != g2.r) throw std::invalid_argument("reconstruct: radial grids do not match");
    const int n1 = g1.n_theta, n2 = g2.n_theta;
    if (2 * modes.M + 1 > std::min(n1, n2)) throw AliasingError("reconstruct: angular grid too coarse for M");
    ScalarField out(g1, g2);
    std::vector<cplx> buf(static_cast<std::size_t>(n1) * n2);
    for (int i1 = 0; i1 < g1.n_r; ++i1)
        for (int i2 = 0; i2 < g2.n_r; ++i2) {
            std::fill(buf.begin(), buf.end(), cplx{});
            for (const auto& [k, a] : modes.coeffs)
                buf[static_cast<std::size_t>(detail::mode_slot(k.first, n1)) * n2 + detail::mode_slot(k.second, n2)] +=
                    a(i1, i2);
            detail::FftCache::instance().run(buf.data(), n1, n2, FFTW_BACKWARD);
            for (int k1 = 0; k1 < n1; ++k1)
                for (int k2 = 0; k2 < n2; ++k2) out.at(i1, k1, i2, k2) = buf[static_cast<std::size_t>(k1) * n2 + k2];
        }
    return out;
}

cplx evaluate_modes(const ModeCoefficients& modes, int i1, double theta1, int i2, double theta2) {
    cplx s = 0;
    for (const auto& [k, a] : modes.coeffs) s += a(i1, i2) * std::polar(1.0, k.first * theta1 + k.second * theta2);
    return s;
}

int choose_truncation(const std::function<cplx(cplx, cplx)>& fn, const DiscGrid& g1, const DiscGrid& g2, double tol) {
    const int lim = std::min(g1.n_theta, g2.n_theta) / 2 - 1;
    const auto full = decompose(fn, g1, g2, lim);
    double peak = 0;
    std::vector<double> ring(lim + 1, 0.0);
    for (const auto& [k, a] : full.coeffs) {
        const double v = a.cwiseAbs().maxCoeff();
        peak = std::max(peak, v);
        const int r = std::max(std::abs(k.first), std::abs(k.second));
        ring[r] = std::max(ring[r], v);
    }
    if (peak == 0) return 0;
    int M = lim;
    while (M > 0 && ring[M] <= tol * peak) --M;
    return M;
}

std::string modes_csv(const ModeCoefficients& modes) {
    std::ostringstream os;
    os << "m1,m2,r1,r2,re,im\n";
    char buf[160];
    for (const auto& [k, a] : modes.coeffs)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g\n", k.first, k.second, modes.r1[i],
                              modes.r2[j], a(i, j).real(), a(i, j).imag());
                os << buf;
            }
    return os.str();
}

ModeCoefficients combine(cplx a, const ModeCoefficients& x, cplx b, const ModeCoefficients& y) {
    if (x.r1 != y.r1 || x.r2 != y.r2) throw std::invalid_argument("combine: radial grids do not match");
    ModeCoefficients out;
    out.M = std::max(x.M, y.M);
    out.r1 = x.r1;
    out.r2 = x.r2;
    for (const auto& [k, v] : x.coeffs) out.coeffs[k] = a * v;
    for (const auto& [k, v] : y.coeffs) {
        auto it = out.coeffs.find(k);
        if (it == out.coeffs.end())
            out.coeffs[k] = b * v;
        else
            it->second += b * v;
    }
    return out;
}

}  // namespace bidisc
