#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bidisc/cutoff.hpp"
#include "bidisc/grid.hpp"
#include "bidisc/mode_solver.hpp"

namespace bidisc {

/// Periodic box [-Y, Y)^2 with n nodes per side, y_k = -Y + k h, h = 2Y/n (n even, so y = 0 is a node).
struct PlaneGrid {
    int n = 0;
    double y_max = 0;
    double h = 0;
    std::vector<double> y;

    int zero_index() const { return n / 2; }
    /// Index of -y_k (the mirror node); the node -Y has no mirror inside the box and maps to itself.
    int mirror(int k) const { return k == 0 ? 0 : n - k; }
};

PlaneGrid make_plane_grid(int n, double y_max);

/// Samples on a PlaneGrid, index (i along y1, j along y2), j fastest.
struct PlaneField {
    PlaneGrid grid;
    std::vector<cplx> v;

    PlaneField() = default;
    explicit PlaneField(PlaneGrid g) : grid(std::move(g)), v(static_cast<std::size_t>(grid.n) * grid.n) {}
    cplx& at(int i, int j) { return v[static_cast<std::size_t>(i) * grid.n + j]; }
    const cplx& at(int i, int j) const { return v[static_cast<std::size_t>(i) * grid.n + j]; }

    double l2() const;
    /// L2 norm restricted to |y| <= radius.
    double l2_within(double radius) const;
    PlaneField& operator+=(const PlaneField& o);
    PlaneField& operator-=(const PlaneField& o);
    PlaneField& operator*=(double s);
};

PlaneField operator-(PlaneField a, const PlaneField& b);

/// A, C and the first derivatives of A for one mode, odd-reflected into the whole box.
struct LogModeField {
    int m1 = 0;
    int m2 = 0;
    PlaneField A;
    PlaneField C;
    PlaneField A_y1;
    PlaneField A_y2;
    /// Set when exp(-Y_max) falls below the smallest radial node; values there are extrapolated
    /// along the regular branch r^|m|.
    bool extrapolated = false;
};

/// A(y) = a(e^{-y1}, e^{-y2}), C(y) = e^{-2y1 - 2y2} c(e^{-y1}, e^{-y2}) by local Lagrange
/// interpolation in r, A_y = -r a_r from fourth-order radial differences; all odd-reflected.
LogModeField to_log_coords(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& c, const std::vector<double>& r1,
                           const std::vector<double>& r2, int m1, int m2, const PlaneGrid& grid);

/// Same construction from a closed form (exact values and derivatives, no interpolation).
LogModeField to_log_coords_exact(const PowerSum2& a, int m1, int m2, const PlaneGrid& grid);

/// Odd reflection of first-quadrant samples; values on the axes are set to zero.
PlaneField odd_reflect(const PlaneGrid& grid, const std::function<cplx(double, double)>& quadrant);

/// The two rational factors of K at one frequency. The second is formed as 1 - first, so the
/// pair sums to one exactly in floating point.
std::pair<double, double> multiplier_factors(int m1, int m2, double eta1, double eta2);

/// Discrete angular frequencies of the plane grid in FFT slot order.
std::vector<double> plane_frequencies(const PlaneGrid& g);

class WrapAroundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// K phi = F^-1[ f1(eta) F((1 - e^{-2|y2|}) phi) + f2(eta) F((1 - e^{-2|y1|}) phi) ].
/// Throws WrapAroundError if phi is not negligible (1e-12 relative) near the box edge, and
/// std::invalid_argument for m1 = m2 = 0.
PlaneField apply_K(const PlaneField& phi, int m1, int m2);

/// Phi = F^-1[ -F(h) / (eta^2 + m^2) ], the solution of (Delta - m^2) Phi = h.
PlaneField solve_shifted_laplacian(const PlaneField& h, int m1, int m2);

/// Nested bumps b_0, b_1, ...: b_j is 1 for |y| <= R_j and 0 beyond R_{j+1}, with
/// R_0 = base, R_1 = base * growth and increments R_{j+1} - R_j scaled by increment_ratio
/// per step (increment_ratio = growth gives R_j = base growth^j).
///
/// b_0 is the data cutoff chi. The series cutoffs are chi_j = b_{series_offset + j - 1}; with
/// offset 1 every chi_j is 1 on supp chi, which removes the first remainder term (chi_2 - chi_1) Phi.
/// Offset 0 reproduces chi_1 = chi.
struct CutoffFamily {
    std::vector<RadialBump> bumps;
    std::vector<double> radii;
    int series_offset = 1;

    const RadialBump& data() const { return bumps.front(); }
    /// chi_j for j >= 1.
    const RadialBump& chi(int j) const;
    /// Radius of the region where every cutoff is 1.
    double inner_radius() const { return radii.front(); }

    /// Area of supp(chi_{j+1} - chi_j), by quadrature on the grid.
    std::vector<double> footprint_areas(const PlaneGrid& grid) const;
    /// Sup norm of chi_{j+1} - chi_j on the grid.
    std::vector<double> footprint_sup(const PlaneGrid& grid) const;
};

/// The cutoff radii do not fit inside the transform box.
class CutoffRangeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// count bumps in total (data cutoff included).
CutoffFamily make_cutoffs(double base_radius, int count, double growth, double box_half_width,
                          double increment_ratio = 0.0, int series_offset = 1);

struct SeriesConfig {
    double y_max = 4.0;
    int plane_n = 1024;
    double cutoff_base = 0.2;
    double cutoff_growth = 1.25;
    double increment_ratio = 0.2;
    int series_terms = 6;
    int series_offset = 1;

    CutoffFamily cutoffs() const;
};

/// Keys Y_max, plane_n, cutoff_base, cutoff_growth, increment_ratio, series_terms, series_offset.
SeriesConfig series_config_from_json(const std::string& text);

/// h = chi C + e^{-2|y2|}(2 chi_1 A_1 + chi_11 A) + e^{-2|y1|}(2 chi_2 A_2 + chi_22 A), the right-hand
/// side satisfied by chi A.
PlaneField cutoff_rhs(const LogModeField& f, const RadialBump& chi);

struct SeriesResult {
    PlaneField sum;                       // sum_{n<=N} chi_{n+1} T_n Phi
    PlaneField phi;                       // Phi
    std::vector<double> term_norms;       // ||T_n Phi||_2
    std::vector<double> partial_sum_norms;
    std::vector<double> increment_norms;  // ||S_n - S_{n-1}||_2
    bool contraction_failed = false;      // term norms failed to decrease 3 times in a row
};

/// Truncated series of the log-domain construction; needs chi_1 .. chi_{N_terms + 1}.
SeriesResult neumann_series_solve(const PlaneField& h, int m1, int m2, const CutoffFamily& cutoffs, int N_terms);

/// CSV rows m1,m2,n,term_norm,partial_sum_norm.
std::string series_csv(int m1, int m2, const SeriesResult& r);

}  // namespace bidisc
