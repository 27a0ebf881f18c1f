#include "bidisc/log_neumann.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "angular.hpp"
#include "bidisc/stencil.hpp"

namespace bidisc {

PlaneGrid make_plane_grid(int n, double y_max) {
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("make_plane_grid: n must be even and >= 8");
    if (!(y_max > 0)) throw std::invalid_argument("make_plane_grid: Y_max must be positive");
    PlaneGrid g;
    g.n = n;
    g.y_max = y_max;
    g.h = 2 * y_max / n;
    g.y.resize(n);
    for (int k = 0; k < n; ++k) g.y[k] = -y_max + k * g.h;
    g.y[n / 2] = 0.0;
    return g;
}

double PlaneField::l2() const {
    double s = 0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s) * grid.h;
}

double PlaneField::l2_within(double radius) const {
    double s = 0;
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            if (std::hypot(grid.y[i], grid.y[j]) <= radius) s += std::norm(at(i, j));
    return std::sqrt(s) * grid.h;
}

PlaneField& PlaneField::operator+=(const PlaneField& o) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
    return *this;
}

PlaneField& PlaneField::operator-=(const PlaneField& o) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
    return *this;
}

PlaneField& PlaneField::operator*=(double s) {
    for (auto& x : v) x *= s;
    return *this;
}

PlaneField operator-(PlaneField a, const PlaneField& b) { return a -= b; }

PlaneField odd_reflect(const PlaneGrid& grid, const std::function<cplx(double, double)>& quadrant) {
    PlaneField f(grid);
    const int z = grid.zero_index();
    for (int i = z + 1; i < grid.n; ++i)
        for (int j = z + 1; j < grid.n; ++j) {
            const cplx val = quadrant(grid.y[i], grid.y[j]);
            const int mi = grid.mirror(i), mj = grid.mirror(j);
            f.at(i, j) = val;
            f.at(mi, j) = -val;
            f.at(i, mj) = -val;
            f.at(mi, mj) = val;
        }
    return f;
}

namespace {

// Local interpolation weights for r = e^{-y} at every y >= 0 node, with the regular
// branch r^|m| continued below the first radial node.
struct InterpRow {
    std::size_t lo = 0;
    std::vector<double> w;
    double scale = 1;  // extrapolation factor (r / r_min)^|m|
};

std::vector<InterpRow> interp_rows(const std::vector<double>& r, int m, const PlaneGrid& g, bool& extrapolated) {
    const int p = 6;
    std::vector<InterpRow> rows;
    for (int k = g.zero_index(); k < g.n; ++k) {
        double t = std::exp(-g.y[k]);
        InterpRow row;
        if (t < r.front()) {
            extrapolated = true;
            row.scale = std::pow(t / r.front(), std::abs(m));
            t = r.front();
        }
        row.lo = detail::local_window(r, t, p);
        row.w.resize(p);
        for (int i = 0; i < p; ++i) {
            double l = 1;
            for (int j = 0; j < p; ++j)
                if (j != i) l *= (t - r[row.lo + j]) / (r[row.lo + i] - r[row.lo + j]);
            row.w[i] = l;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd interp_matrix(const std::vector<InterpRow>& rows, Eigen::Index n_r) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), n_r);
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t q = 0; q < rows[k].w.size(); ++q)
            W(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(rows[k].lo + q)) = rows[k].w[q] * rows[k].scale;
    return W;
}

// Spread values on the closed quadrant y >= 0 (index k <-> node zero_index + k) into the box with
// the given parities (+1 even, -1 odd). Odd directions vanish on their axis; the node -Y is left at 0.
PlaneField reflect(const Eigen::MatrixXcd& q, int parity1, int parity2, const PlaneGrid& g) {
    PlaneField f(g);
    const int z = g.zero_index();
    for (int i = 1; i < g.n; ++i)
        for (int j = 1; j < g.n; ++j) {
            if ((parity1 < 0 && i == z) || (parity2 < 0 && j == z)) continue;
            const int qi = std::abs(i - z), qj = std::abs(j - z);
            double s = 1;
            if (i < z) s *= parity1;
            if (j < z) s *= parity2;
            f.at(i, j) = s * q(qi, qj);
        }
    return f;
}

}  // namespace

LogModeField to_log_coords(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& c, const std::vector<double>& r1,
                           const std::vector<double>& r2, int m1, int m2, const PlaneGrid& grid) {
    LogModeField f;
    f.m1 = m1;
    f.m2 = m2;
    const Eigen::MatrixXcd W1 = interp_matrix(interp_rows(r1, m1, grid, f.extrapolated), a.rows()).cast<cplx>();
    const Eigen::MatrixXcd W2 = interp_matrix(interp_rows(r2, m2, grid, f.extrapolated), a.cols()).cast<cplx>();
    const auto d1 = make_radial_diff(r1, m1, 4), d2 = make_radial_diff(r2, m2, 4);
    const Eigen::MatrixXcd a_r1 = d1.d1.cast<cplx>() * a;
    const Eigen::MatrixXcd a_r2 = a * d2.d1.transpose().cast<cplx>();

    // e^{-y} on the quadrant nodes, used for the weights and the chain rule.
    const int nq = grid.n - grid.zero_index();
    Eigen::VectorXd er(nq);
    for (int k = 0; k < nq; ++k) er(k) = std::exp(-grid.y[grid.zero_index() + k]);
    const Eigen::MatrixXcd A = W1 * a * W2.transpose();
    const Eigen::MatrixXcd C = er.cwiseAbs2().cast<cplx>().asDiagonal() * (W1 * c * W2.transpose()) *
                               er.cwiseAbs2().cast<cplx>().asDiagonal();
    const Eigen::MatrixXcd A1 = -(er.cast<cplx>().asDiagonal() * (W1 * a_r1 * W2.transpose()));
    const Eigen::MatrixXcd A2 = -((W1 * a_r2 * W2.transpose()) * er.cast<cplx>().asDiagonal());
    f.A = reflect(A, -1, -1, grid);
    f.C = reflect(C, -1, -1, grid);
    f.A_y1 = reflect(A1, 1, -1, grid);
    f.A_y2 = reflect(A2, -1, 1, grid);
    return f;
}

LogModeField to_log_coords_exact(const PowerSum2& a, int m1, int m2, const PlaneGrid& grid) {
    LogModeField f;
    f.m1 = m1;
    f.m2 = m2;
    PowerSum2 da1, da2;  // r1 a_r1 and r2 a_r2
    for (const auto& t : a.terms) {
        if (t.k1 != 0) da1.terms.push_back({t.c * static_cast<double>(t.k1), t.k1, t.k2});
        if (t.k2 != 0) da2.terms.push_back({t.c * static_cast<double>(t.k2), t.k1, t.k2});
    }
    auto R = [](double y) { return std::exp(-y); };
    f.A = odd_reflect(grid, [&](double y1, double y2) { return a.eval(R(y1), R(y2)); });
    f.C = odd_reflect(grid, [&](double y1, double y2) {
        return std::exp(-2 * y1 - 2 * y2) * a.apply_operator(m1, m2, R(y1), R(y2));
    });
    // A_y1 is even in y1 and odd in y2, A_y2 the reverse.
    auto sgn = [](double y) { return static_cast<double>((y > 0) - (y < 0)); };
    f.A_y1 = PlaneField(grid);
    f.A_y2 = PlaneField(grid);
    for (int i = 1; i < grid.n; ++i)
        for (int j = 1; j < grid.n; ++j) {
            const double y1 = grid.y[i], y2 = grid.y[j];
            const double r1 = R(std::abs(y1)), r2 = R(std::abs(y2));
            f.A_y1.at(i, j) = -sgn(y2) * da1.eval(r1, r2);
            f.A_y2.at(i, j) = -sgn(y1) * da2.eval(r1, r2);
        }
    return f;
}

std::pair<double, double> multiplier_factors(int m1, int m2, double eta1, double eta2) {
    const double a = eta1 * eta1 + static_cast<double>(m1) * m1;
    const double b = eta2 * eta2 + static_cast<double>(m2) * m2;
    const double s = a + b;
    if (s == 0) throw std::invalid_argument("multiplier_factors: undefined at eta = 0 for m = (0, 0)");
    const double f1 = a / s;
    return {f1, 1.0 - f1};
}

std::vector<double> plane_frequencies(const PlaneGrid& g) {
    std::vector<double> eta(g.n);
    const double L = g.n * g.h;
    for (int k = 0; k < g.n; ++k) eta[k] = 2 * std::numbers::pi * detail::slot_mode(k, g.n) / L;
    return eta;
}

namespace {

void fft(PlaneField& f, int sign) {
    detail::FftCache::instance().run(f.v.data(), f.grid.n, f.grid.n, sign);
    if (sign == FFTW_BACKWARD) f *= 1.0 / (static_cast<double>(f.grid.n) * f.grid.n);
}

void check_edge(const PlaneField& phi) {
    const auto& g = phi.grid;
    const int band = std::max(2, g.n / 16);
    double peak = 0, edge = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const double a = std::abs(phi.at(i, j));
            peak = std::max(peak, a);
            if (i < band || j < band || i >= g.n - band || j >= g.n - band) edge = std::max(edge, a);
        }
    if (peak > 0 && edge > 1e-12 * peak)
        throw WrapAroundError("apply_K: input not compactly supported inside the box (edge/peak " +
                              std::to_string(edge / peak) + ")");
}

}  // namespace

PlaneField apply_K(const PlaneField& phi, int m1, int m2) {
    if (m1 == 0 && m2 == 0) throw std::invalid_argument("apply_K: the (0,0) mode is handled by the direct solver");
    check_edge(phi);
    const auto& g = phi.grid;
    PlaneField w2(g), w1(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            w2.at(i, j) = (1 - std::exp(-2 * std::abs(g.y[j]))) * phi.at(i, j);
            w1.at(i, j) = (1 - std::exp(-2 * std::abs(g.y[i]))) * phi.at(i, j);
        }
    fft(w2, FFTW_FORWARD);
    fft(w1, FFTW_FORWARD);
    const auto eta = plane_frequencies(g);
    PlaneField out(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const auto [f1, f2] = multiplier_factors(m1, m2, eta[i], eta[j]);
            out.at(i, j) = f1 * w2.at(i, j) + f2 * w1.at(i, j);
        }
    fft(out, FFTW_BACKWARD);
    return out;
}

PlaneField solve_shifted_laplacian(const PlaneField& h, int m1, int m2) {
    if (m1 == 0 && m2 == 0) throw std::invalid_argument("solve_shifted_laplacian: m = (0, 0) is excluded");
    const auto& g = h.grid;
    PlaneField out = h;
    fft(out, FFTW_FORWARD);
    const auto eta = plane_frequencies(g);
    const double m2s = static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) out.at(i, j) *= -1.0 / (eta[i] * eta[i] + eta[j] * eta[j] + m2s);
    fft(out, FFTW_BACKWARD);
    return out;
}

CutoffFamily make_cutoffs(double base_radius, int count, double growth, double box_half_width, double increment_ratio,
                          int series_offset) {
    if (count < 1) throw std::invalid_argument("make_cutoffs: count must be >= 1");
    if (!(base_radius > 0) || !(growth > 1)) throw std::invalid_argument("make_cutoffs: need base > 0 and growth > 1");
    if (series_offset != 0 && series_offset != 1) throw std::invalid_argument("make_cutoffs: series_offset is 0 or 1");
    const double q = increment_ratio > 0 ? increment_ratio : growth;
    CutoffFamily fam;
    fam.series_offset = series_offset;
    fam.radii.push_back(base_radius);
    double step = base_radius * (growth - 1);
    for (int j = 1; j <= count; ++j) {
        fam.radii.push_back(fam.radii.back() + step);
        step *= q;
    }
    // Leave room for the wrap-around guard band of apply_K.
    if (fam.radii.back() >= 0.85 * box_half_width)
        throw CutoffRangeError("make_cutoffs: radii cannot nest " + std::to_string(count) + " times inside the box");
    for (int j = 0; j < count; ++j) {
        if (fam.radii[j + 1] - fam.radii[j] < 1e-9 * fam.radii[j])
            throw std::invalid_argument("make_cutoffs: transition width collapsed; raise increment_ratio");
        fam.bumps.emplace_back(fam.radii[j], fam.radii[j + 1]);
    }
    return fam;
}

const RadialBump& CutoffFamily::chi(int j) const {
    const int k = series_offset + j - 1;
    if (j < 1 || k >= static_cast<int>(bumps.size())) throw std::out_of_range("CutoffFamily: chi index out of range");
    return bumps[static_cast<std::size_t>(k)];
}

CutoffFamily SeriesConfig::cutoffs() const {
    return make_cutoffs(cutoff_base, series_terms + 1 + series_offset, cutoff_growth, y_max, increment_ratio,
                        series_offset);
}

SeriesConfig series_config_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    SeriesConfig c;
    c.y_max = j.value("Y_max", c.y_max);
    c.plane_n = j.value("plane_n", c.plane_n);
    c.cutoff_base = j.value("cutoff_base", c.cutoff_base);
    c.cutoff_growth = j.value("cutoff_growth", c.cutoff_growth);
    c.increment_ratio = j.value("increment_ratio", c.increment_ratio);
    c.series_terms = j.value("series_terms", c.series_terms);
    c.series_offset = j.value("series_offset", c.series_offset);
    return c;
}

std::vector<double> CutoffFamily::footprint_areas(const PlaneGrid& grid) const {
    std::vector<double> out;
    for (std::size_t j = 0; j + 1 < bumps.size(); ++j) {
        double area = 0;
        for (double y1 : grid.y)
            for (double y2 : grid.y)
                if (std::abs(bumps[j + 1](y1, y2) - bumps[j](y1, y2)) > 0) area += grid.h * grid.h;
        out.push_back(area);
    }
    return out;
}

std::vector<double> CutoffFamily::footprint_sup(const PlaneGrid& grid) const {
    std::vector<double> out;
    for (std::size_t j = 0; j + 1 < bumps.size(); ++j) {
        double s = 0;
        for (double y1 : grid.y)
            for (double y2 : grid.y) s = std::max(s, std::abs(bumps[j + 1](y1, y2) - bumps[j](y1, y2)));
        out.push_back(s);
    }
    return out;
}

PlaneField cutoff_rhs(const LogModeField& f, const RadialBump& chi) {
    const auto& g = f.A.grid;
    PlaneField h(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const double y1 = g.y[i], y2 = g.y[j];
            double c1, c2, c11, c22;
            chi.derivatives(y1, y2, c1, c2, c11, c22);
            h.at(i, j) = chi(y1, y2) * f.C.at(i, j) +
                         std::exp(-2 * std::abs(y2)) * (2 * c1 * f.A_y1.at(i, j) + c11 * f.A.at(i, j)) +
                         std::exp(-2 * std::abs(y1)) * (2 * c2 * f.A_y2.at(i, j) + c22 * f.A.at(i, j));
        }
    return h;
}

SeriesResult neumann_series_solve(const PlaneField& h, int m1, int m2, const CutoffFamily& cutoffs, int N_terms) {
    if (N_terms < 0) throw std::invalid_argument("neumann_series_solve: N_terms must be >= 0");
    if (static_cast<int>(cutoffs.bumps.size()) < N_terms + 1 + cutoffs.series_offset)
        throw std::invalid_argument("neumann_series_solve: need N_terms + 1 series cutoffs");
    const auto& g = h.grid;
    SeriesResult r;
    r.phi = solve_shifted_laplacian(h, m1, m2);
    r.sum = PlaneField(g);
    PlaneField T = r.phi;
    int rises = 0;
    for (int n = 0; n <= N_terms; ++n) {
        if (n > 0) {
            // T_n = K(chi_n T_{n-1})
            const auto& c = cutoffs.chi(n);
            for (int i = 0; i < g.n; ++i)
                for (int j = 0; j < g.n; ++j) T.at(i, j) *= c(g.y[i], g.y[j]);
            T = apply_K(T, m1, m2);
        }
        r.term_norms.push_back(T.l2());
        if (n > 0) {
            rises = r.term_norms[n] >= r.term_norms[n - 1] ? rises + 1 : 0;
            if (rises >= 3) r.contraction_failed = true;
        }
        PlaneField term = T;
        const auto& c = cutoffs.chi(n + 1);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) term.at(i, j) *= c(g.y[i], g.y[j]);
        r.increment_norms.push_back(term.l2());
        r.sum += term;
        r.partial_sum_norms.push_back(r.sum.l2());
    }
    return r;
}

std::string series_csv(int m1, int m2, const SeriesResult& r) {
    std::ostringstream os;
    char buf[128];
    for (std::size_t n = 0; n < r.term_norms.size(); ++n) {
        std::snprintf(buf, sizeof buf, "%d,%d,%zu,%.17g,%.17g\n", m1, m2, n, r.term_norms[n], r.partial_sum_norms[n]);
        os << buf;
    }
    return os.str();
}

}  // namespace bidisc
