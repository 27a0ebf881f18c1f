#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace bidisc {

using cplx = std::complex<double>;

enum class Grading { uniform, graded };

Grading parse_grading(const std::string& name);
std::string to_string(Grading g);

/// Radial nodes r_i in (0, 1] (last node exactly 1) and uniform angles k 2pi/n_theta.
struct DiscGrid {
    int n_r = 0;
    int n_theta = 0;
    Grading grading = Grading::uniform;
    std::vector<double> r;
    std::vector<double> theta;

    double r_min() const { return r.front(); }
    bool operator==(const DiscGrid& o) const { return n_r == o.n_r && n_theta == o.n_theta && r == o.r; }
};

/// uniform: r_i = i/n_r.  graded: r_i = sin(pi i / (2 n_r)), which packs nodes toward r = 1.
DiscGrid make_disc_grid(int n_r, int n_theta, Grading grading);

/// Log-coordinate nodes y_j = j Y_max/(n_y - 1) for y = -log r.
struct QuadrantGrid {
    int n_y = 0;
    double y_max = 0;
    std::vector<double> y;
};

QuadrantGrid make_quadrant_grid(int n_y, double y_max);

/// exp(-Y_max) must lie below the smallest radial node so every y node maps inside the sampled disc.
bool quadrant_fits(const QuadrantGrid& q, const DiscGrid& g);

/// Complex samples on DiscGrid x DiscGrid, indexed (r1, theta1, r2, theta2), last index fastest.
struct ScalarField {
    DiscGrid g1;
    DiscGrid g2;
    std::vector<cplx> values;

    ScalarField() = default;
    ScalarField(DiscGrid a, DiscGrid b);

    std::size_t index(int i1, int k1, int i2, int k2) const {
        return ((static_cast<std::size_t>(i1) * g1.n_theta + k1) * g2.n_r + i2) * g2.n_theta + k2;
    }
    cplx& at(int i1, int k1, int i2, int k2) { return values[index(i1, k1, i2, k2)]; }
    const cplx& at(int i1, int k1, int i2, int k2) const { return values[index(i1, k1, i2, k2)]; }

    static ScalarField sample(const DiscGrid& a, const DiscGrid& b, const std::function<cplx(cplx, cplx)>& fn);
};

/// A (0,1)-form c1 dz1bar + c2 dz2bar.
struct FormField {
    ScalarField c1;
    ScalarField c2;

    FormField() = default;
    FormField(ScalarField a, ScalarField b);
};

class UnderResolvedError : public std::runtime_error {
public:
    UnderResolvedError(const std::string& what, double tail) : std::runtime_error(what), tail(tail) {}
    double tail;
};

/// Dense radial differentiation matrices for one angular mode m on the nodes of a DiscGrid.
/// The inner end uses parity ghosts a(-r) = (-1)^m a(r) (plus a(0) = 0 for m != 0); the outer
/// end uses one-sided stencils. `order` is the design accuracy (2, 4 or 6).
struct RadialDiff {
    Eigen::MatrixXd d1;
    Eigen::MatrixXd d2;
};

RadialDiff make_radial_diff(const std::vector<double>& r, int m, int order);

/// d/dz_axis-bar of the field: (1/2) e^{i theta}(d_r + (i/r) d_theta), spectral in theta and
/// 4th-order differences in r. Throws UnderResolvedError when the angular spectrum's top
/// modes carry more than tail_tol of the peak amplitude.
ScalarField wirtinger_dbar(const ScalarField& f, int axis, double tail_tol = 1e-8);

/// d/dz_axis of the field: (1/2) e^{-i theta}(d_r - (i/r) d_theta).
ScalarField wirtinger_d(const ScalarField& f, int axis, double tail_tol = 1e-8);

struct GridConfig {
    int n_r = 64;
    int n_theta = 32;
    Grading grading = Grading::graded;
    double y_max = 4.0;
};

GridConfig grid_config_from_json(const nlohmann::json& j);

}  // namespace bidisc
