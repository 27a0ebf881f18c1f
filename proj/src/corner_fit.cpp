#include "bidisc/corner_fit.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

namespace bidisc {

namespace {

std::vector<Monomial> monomials_up_to(int degree) {
    std::vector<Monomial> out;
    for (int d = 0; d <= degree; ++d)
        for (int a = d; a >= 0; --a) out.emplace_back(a, d - a);
    return out;
}

double mono(const Monomial& m, double t1, double t2) { return std::pow(t1, m.first) * std::pow(t2, m.second); }

struct LocalPoint {
    double t1, t2;
    std::complex<double> value;
};

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

bool FitWindow::contains(double y1, double y2) const {
    const double r = std::hypot(y1 - center_y1, y2 - center_y2);
    return r >= inner && r <= outer;
}

std::complex<double> CornerFit::model(double y1, double y2) const {
    const double t1 = (y1 - window.center_y1) / window.outer;
    const double t2 = (y2 - window.center_y2) / window.outer;
    const double lg = std::log(t1 * t1 + t2 * t2);
    const double at = atan_branch(t1, t2);
    std::complex<double> v = 0;
    for (std::size_t i = 0; i < monomials.size(); ++i) {
        const double m = mono(monomials[i], t1, t2);
        v += m * (alpha[i] * lg + beta[i] + gamma[i] * at);
    }
    return v;
}

CornerFit fit_corner_expansion(std::span<const FitSample> samples, const FitWindow& window, int degree) {
    if (degree < 0) throw std::invalid_argument("fit_corner_expansion: degree must be >= 0");
    if (!(window.outer > window.inner && window.inner >= 0))
        throw std::invalid_argument("fit_corner_expansion: bad window radii");

    std::vector<LocalPoint> pts;
    for (const auto& s : samples) {
        if (!window.contains(s.y1, s.y2)) continue;
        // log|t1| and, for t2 <= 0, the arctan branch are undefined on t1 = 0.
        if (s.y1 == window.center_y1) continue;
        pts.push_back({(s.y1 - window.center_y1) / window.outer, (s.y2 - window.center_y2) / window.outer, s.value});
    }

    CornerFit fit;
    fit.degree = degree;
    fit.window = window;
    fit.monomials = monomials_up_to(degree);
    const std::size_t nm = fit.monomials.size();
    const std::size_t ncols = 3 * nm;
    if (pts.size() < 10 * ncols)
        throw std::invalid_argument("fit_corner_expansion: need at least 10 samples per coefficient, have " +
                                    std::to_string(pts.size()) + " for " + std::to_string(ncols));
    fit.n_samples = pts.size();

    const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd A(n, static_cast<Eigen::Index>(ncols + nm));
    Eigen::MatrixXcd b(n, 1);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& p = pts[r];
        const double lg = std::log(p.t1 * p.t1 + p.t2 * p.t2);
        const double at = atan_branch(p.t1, p.t2);
        const double lg1 = std::log(std::abs(p.t1));
        for (std::size_t i = 0; i < nm; ++i) {
            const double m = mono(fit.monomials[i], p.t1, p.t2);
            A(r, static_cast<Eigen::Index>(i)) = m * lg;
            A(r, static_cast<Eigen::Index>(nm + i)) = m;
            A(r, static_cast<Eigen::Index>(2 * nm + i)) = m * at;
            A(r, static_cast<Eigen::Index>(3 * nm + i)) = std::isfinite(lg1) ? m * lg1 : 0.0;
        }
        b(r, 0) = p.value;
    }

    const Eigen::MatrixXd main = A.leftCols(static_cast<Eigen::Index>(ncols));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(main);
    qr.setThreshold(1e-12);
    if (qr.rank() < static_cast<Eigen::Index>(ncols))
        throw RankDeficientError("fit_corner_expansion: degenerate window (rank " + std::to_string(qr.rank()) +
                                 " < " + std::to_string(ncols) + ")");
    const Eigen::MatrixXd br = b.real(), bi = b.imag();
    const Eigen::VectorXd xr = qr.solve(br), xi = qr.solve(bi);
    Eigen::VectorXcd x(static_cast<Eigen::Index>(ncols));
    x.real() = xr;
    x.imag() = xi;
    const Eigen::VectorXcd res = main.cast<std::complex<double>>() * x - b.col(0);

    for (std::size_t i = 0; i < nm; ++i) {
        fit.alpha.push_back(x(static_cast<Eigen::Index>(i)));
        fit.beta.push_back(x(static_cast<Eigen::Index>(nm + i)));
        fit.gamma.push_back(x(static_cast<Eigen::Index>(2 * nm + i)));
    }
    double sa = 0, sg = 0;
    for (const auto& p : pts) {
        std::complex<double> av = 0, gv = 0;
        for (std::size_t i = 0; i < nm; ++i) {
            const double m = mono(fit.monomials[i], p.t1, p.t2);
            av += m * fit.alpha[i];
            gv += m * fit.gamma[i];
        }
        sa += std::norm(av);
        sg += std::norm(gv);
    }
    const double dn = static_cast<double>(n);
    fit.residual = std::sqrt(res.squaredNorm() / dn);
    fit.alpha_scale = std::sqrt(sa / dn);
    fit.gamma_scale = std::sqrt(sg / dn);
    fit.singular_energy = fit.alpha_scale + fit.gamma_scale;

    // Augmented fit with the log|t1| columns; only its coefficient size is reported.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_aug(A);
    const Eigen::VectorXd ar = qr_aug.solve(br), ai = qr_aug.solve(bi);
    double sd = 0;
    for (const auto& p : pts) {
        std::complex<double> dv = 0;
        for (std::size_t i = 0; i < nm; ++i) {
            const auto col = static_cast<Eigen::Index>(3 * nm + i);
            dv += mono(fit.monomials[i], p.t1, p.t2) * std::complex<double>(ar(col), ai(col));
        }
        sd += std::norm(dv);
    }
    fit.log_y1_diagnostic = std::sqrt(sd / dn);
    return fit;
}

std::string corner_fit_csv(const CornerFit& fit) {
    std::ostringstream os;
    os << "degree_a,degree_b,alpha_re,alpha_im,beta_re,beta_im,gamma_re,gamma_im,residual\n";
    for (std::size_t i = 0; i < fit.monomials.size(); ++i) {
        os << fit.monomials[i].first << ',' << fit.monomials[i].second << ',' << fmt17(fit.alpha[i].real()) << ','
           << fmt17(fit.alpha[i].imag()) << ',' << fmt17(fit.beta[i].real()) << ',' << fmt17(fit.beta[i].imag())
           << ',' << fmt17(fit.gamma[i].real()) << ',' << fmt17(fit.gamma[i].imag()) << ','
           << fmt17(fit.residual) << '\n';
    }
    return os.str();
}

std::string corner_fit_plot_csv(const CornerFit& fit, std::span<const FitSample> samples) {
    std::ostringstream os;
    os << "rho,value_re,value_im,model_re,model_im\n";
    for (const auto& s : samples) {
        if (!fit.window.contains(s.y1, s.y2) || s.y1 == fit.window.center_y1) continue;
        const auto m = fit.model(s.y1, s.y2);
        os << fmt17(std::hypot(s.y1 - fit.window.center_y1, s.y2 - fit.window.center_y2)) << ','
           << fmt17(s.value.real()) << ',' << fmt17(s.value.imag()) << ',' << fmt17(m.real()) << ','
           << fmt17(m.imag()) << '\n';
    }
    return os.str();
}

TransformCheck fourier_transform_check(const SingularFunction& f, const RadialBump& chi,
                                       std::span<const double> eta_probes, const TransformGrid& grid) {
    if (f.l < 1 || f.j < 0 || f.k < 0)
        throw std::invalid_argument("fourier_transform_check: input must carry an (l, j, k) label");
    if (chi.outer() >= grid.half_width) throw std::invalid_argument("fourier_transform_check: cutoff exceeds box");
    const int n = grid.points;
    const double h = 2 * grid.half_width / n;
    // Midpoint nodes avoid the lines y1 = 0 and y2 = 0.
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = -grid.half_width + (i + 0.5) * h;
    std::vector<std::complex<double>> g(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double c = chi(y[a], y[b]);
            g[static_cast<std::size_t>(a) * n + b] = c == 0 ? 0.0 : c * eval_singular(f, y[a], y[b]);
        }

    TransformCheck out;
    const double nyquist = std::numbers::pi / h;
    for (double e : eta_probes) {
        const double e1 = e / std::sqrt(2.0), e2 = e1;
        if (e > 0.25 * nyquist) out.low_band_warning = true;
        std::vector<std::complex<double>> phase2(n);
        for (int b = 0; b < n; ++b) phase2[b] = std::polar(1.0, -e2 * y[b]);
        std::complex<double> F = 0;
        for (int a = 0; a < n; ++a) {
            std::complex<double> s = 0;
            const std::complex<double>* row = &g[static_cast<std::size_t>(a) * n];
            for (int b = 0; b < n; ++b) s += row[b] * phase2[b];
            F += s * std::polar(1.0, -e1 * y[a]);
        }
        F *= h * h;
        out.eta.push_back(e);
        out.transform.push_back(F);
        out.normalized.push_back(std::abs(F) * std::pow(e1, f.j) * std::pow(e2, f.k) * std::pow(e, 2 * f.l));
    }
    if (out.eta.empty()) return out;
    if (out.eta.front() < 4.0) out.low_band_warning = true;
    // With the e^{-i eta.y} convention every member of the family tends to 2 pi after normalization.
    const double limit = 2 * std::numbers::pi;
    for (double v : out.normalized) {
        out.deviation.push_back(std::abs(v - limit) / limit);
        out.max_deviation = std::max(out.max_deviation, out.deviation.back());
    }
    if (out.eta.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(out.eta.size());
        for (std::size_t i = 0; i < out.eta.size(); ++i) {
            const double lx = std::log(out.eta[i]), ly = std::log(std::abs(out.transform[i]));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        out.decay_order = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    return out;
}

}  // namespace bidisc
