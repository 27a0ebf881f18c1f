#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bidisc/cutoff.hpp"
#include "bidisc/exact.hpp"
#include "bidisc/singular_basis.hpp"

namespace bidisc {

class RankDeficientError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FitSample {
    double y1;
    double y2;
    std::complex<double> value;
};

/// Annulus inner <= |y - center| <= outer in log coordinates y_j = -log r_j.
struct FitWindow {
    double center_y1 = 0;
    double center_y2 = 0;
    double inner = 0;
    double outer = 0;

    bool contains(double y1, double y2) const;
};

/// Least-squares coefficients of
///     u ~ alpha(t) log(t1^2+t2^2) + beta(t) + gamma(t) arctan(t1/t2),   t = (y - center)/outer,
/// where alpha, beta, gamma are polynomials of total degree <= degree in t.
struct CornerFit {
    int degree = 0;
    FitWindow window;
    std::vector<Monomial> monomials;
    std::vector<std::complex<double>> alpha, beta, gamma;
    std::size_t n_samples = 0;

    double residual = 0;          // RMS misfit over the window samples
    double alpha_scale = 0;       // RMS of alpha(t) over the samples
    double gamma_scale = 0;
    double singular_energy = 0;   // alpha_scale + gamma_scale
    double log_y1_diagnostic = 0; // RMS of the log|t1| polynomial in an augmented fit

    std::complex<double> model(double y1, double y2) const;
};

/// Fits the corner dictionary to the samples that fall inside `window`, skipping samples on the
/// line y1 = center_y1 where the dictionary is undefined.
/// Throws std::invalid_argument with fewer than 10 samples per coefficient and
/// RankDeficientError when the window is degenerate.
CornerFit fit_corner_expansion(std::span<const FitSample> samples, const FitWindow& window, int degree);

/// CSV rows "degree_a,degree_b,alpha_re,alpha_im,beta_re,beta_im,gamma_re,gamma_im,residual".
std::string corner_fit_csv(const CornerFit& fit);

/// CSV rows "rho,value_re,value_im,model_re,model_im" for plotting a fit against its data.
std::string corner_fit_plot_csv(const CornerFit& fit, std::span<const FitSample> samples);

struct TransformCheck {
    std::vector<double> eta;                        // probe |eta| along eta1 = eta2
    std::vector<std::complex<double>> transform;    // FT of chi * f at the probes
    std::vector<double> normalized;                 // |FT| * eta1^j eta2^k |eta|^{2l}
    std::vector<double> deviation;                  // relative to the 2 pi limit
    double max_deviation = 0;
    double decay_order = 0;                         // -slope of log|FT| vs log|eta|
    bool low_band_warning = false;
};

struct TransformGrid {
    double half_width = 3.0;
    int points = 2048;
};

/// Numerically transforms chi * (Phi_l)_{jk} on a midpoint grid and compares the probes
/// against the power law 1/(eta1^j eta2^k |eta|^{2l}).
TransformCheck fourier_transform_check(const SingularFunction& f, const RadialBump& chi,
                                       std::span<const double> eta_probes,
                                       const TransformGrid& grid = {});

}  // namespace bidisc
