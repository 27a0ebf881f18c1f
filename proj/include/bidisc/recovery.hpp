#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bidisc/corner_fit.hpp"
#include "bidisc/form_data.hpp"
#include "bidisc/fourier_modes.hpp"

namespace bidisc {

/// Dirichlet Green's function of the unit disc, G(z, w) = (1/2pi)(log|z - w| - log|1 - conj(z) w|).
struct GreensKernel {
    double operator()(cplx z, cplx w) const;
    /// The variant (1/2pi)(log|z - w| - log| z/|z| - w/|w| |); kept for comparison only, it does
    /// not vanish on |w| = 1.
    static double printed_variant(cplx z, cplx w);
};

struct QuadratureValue {
    cplx value;
    double error_estimate = 0;  // difference to the same rule at half resolution
    bool edge_warning = false;
};

struct DiscRule {
    int radial = 48;   // Gauss-Legendre nodes along each ray from the probe
    int angular = 96;  // trapezoid nodes in the ray angle
};

/// w(z) = int_D G(z, w) rhs(w) dA, which solves Delta w = rhs with w = 0 on |z| = 1. Integrated in
/// polar coordinates centered at the probe with rho = rho_max s^3, which smooths the rho log rho factor.
std::vector<QuadratureValue> greens_dirichlet_disc(const std::function<cplx(cplx)>& rhs, std::span<const cplx> probes,
                                                   const DiscRule& rule = {});

/// u'(z) = (1/2 pi i) int chi(w) v(w) / (w - z) dw ^ dwbar = -(1/pi) int_D chi v / (w - z) dA.
/// The 1/(w - z) singularity cancels against the polar area element. edge_warning is set when
/// chi(z) != 1, where dbar u' = chi v differs from v.
std::vector<QuadratureValue> cauchy_transform(const std::function<cplx(cplx)>& v, const std::function<double(cplx)>& chi,
                                              std::span<const cplx> probes, const DiscRule& rule = {});

class NonIntegrableError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// u1 from v1 = d u1 / d z2bar, mode by mode:
///     b_{m1 m2}(r1, r2) = 2 r2^{m2} int_0^{r2} t^{-m2} a_{m1, m2+1}(r1, t) dt,
/// the solution of d b/d r2 - m2 b / r2 = 2 a_{m1, m2+1} that is regular at r2 = 0. axis = 1 swaps
/// the roles (u2 from v2 = d u2 / d z1bar). Throws NonIntegrableError when t^{-m2} a near t = 0 exceeds ten times its size on t >= 1/4.
ModeCoefficients recover_u_from_v(const ModeCoefficients& v, int axis = 2);

/// Mode-space Wirtinger derivatives with radial differences of the given order.
ModeCoefficients mode_dbar(const ModeCoefficients& f, int axis, int order = 6);
ModeCoefficients mode_d(const ModeCoefficients& f, int axis, int order = 6);
/// Euclidean Laplacian of every mode.
ModeCoefficients mode_laplacian(const ModeCoefficients& f, int order = 6);

/// L2 norm over the bi-disc, computed from the modes by Parseval.
double l2_norm(const ModeCoefficients& f);

struct VerificationReport {
    double pde_residual = 0;   // max |Delta u_j + 2 f_j| away from a boundary collar
    double bc_dirichlet = 0;   // max |u1| on r1 = 1 and |u2| on r2 = 1
    double bc_neumann = 0;     // max |d u1/d z2bar| on r2 = 1 and |d u2/d z1bar| on r1 = 1
    double bergman_gap = 0;
    // The four boundary residuals separately: u1 on r1 = 1, u2 on r2 = 1, du1/dz2bar on r2 = 1,
    // du2/dz1bar on r1 = 1.
    double bc[4] = {0, 0, 0, 0};
    std::vector<CornerFit> corner_fits;

    nlohmann::json to_json() const;
};

/// Residuals from mode coefficients. Values over the angles are bounded by the sum over modes
/// of the per-mode magnitudes, so the reported maxima are upper bounds. The interior maximum
/// skips `collar` radial nodes next to r = 1 on either disc.
VerificationReport residuals_from_modes(const ModeCoefficients& u1, const ModeCoefficients& u2,
                                        const ModeCoefficients& f1, const ModeCoefficients& f2, int order = 6,
                                        int collar = 3);

/// Same, for sampled fields (transformed with M = n_theta/2 - 1).
VerificationReport pde_and_boundary_residuals(const FormField& u, const FormField& f, int order = 6, int collar = 3);

/// Bergman projection by the holomorphic coefficients c_n = (n1+1)(n2+1)/pi^2 <g, z^n>.
ModeCoefficients bergman_project(const ModeCoefficients& g);

/// Bergman projection at probe points through the product kernel
/// K(z, w) = 1 / (pi^2 (1 - z1 conj(w1))^2 (1 - z2 conj(w2))^2), by tensor Gauss-Legendre x trapezoid quadrature.
std::vector<cplx> bergman_project_kernel(const std::function<cplx(cplx, cplx)>& g, std::span<const std::pair<cplx, cplx>> probes,
                                         int radial = 24, int angular = 48);

/// dbar* u = -2 (d u1/d z1 + d u2/d z2), the adjoint matching Delta u_j = -2 f_j.
ModeCoefficients dbar_star(const ModeCoefficients& u1, const ModeCoefficients& u2, int order = 6);

struct SufficiencyRow {
    int j = 0;
    int k = 0;
    double value = 0;  // max over modes of |d^{2j}_{r1} d^{2k}_{r2} (d f1/d z2bar)_m| at r1 = r2 = 1
    bool holds = false;
};

struct SufficiencyReport {
    int n = 0;
    std::vector<SufficiencyRow> rows;
    /// Largest n' <= n with every condition j + k <= n' + 2 satisfied; -1 if j = k = 0 already fails.
    int regularity = -1;
    bool all_hold = false;
    nlohmann::json to_json() const;
};

/// Conditions of the sufficiency proposition, evaluated exactly on the polynomial data at the
/// distinguished boundary r1 = r2 = 1. A bump factor is 1 near that corner and drops out.
SufficiencyReport check_sufficiency(const FormData& f, int n, double tol = 1e-12);

}  // namespace bidisc
