#include "bidisc/cutoff.hpp"

#include <cmath>
#include <stdexcept>

namespace bidisc {

namespace {

double binom(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Integral from 0 to t of x^s (1-x)^s, expanded binomially.
double beta_partial(double t, int s) {
    double sum = 0;
    for (int i = 0; i <= s; ++i)
        sum += binom(s, i) * ((i % 2) ? -1.0 : 1.0) * std::pow(t, s + i + 1) / (s + i + 1);
    return sum;
}

}  // namespace

RadialBump::RadialBump(double inner, double outer, int smoothness)
    : inner_(inner), outer_(outer), smoothness_(smoothness), norm_(std::exp(2 * std::lgamma(smoothness + 1.0) - std::lgamma(2 * smoothness + 2.0))) {
    if (!(inner >= 0 && outer > inner)) throw std::invalid_argument("RadialBump: need 0 <= inner < outer");
    if (smoothness < 1 || smoothness > 24) throw std::invalid_argument("RadialBump: smoothness must be in [1, 24]");
}

double RadialBump::step(double t) const {
    // The alternating expansion loses digits near t = 1; use the reflection there.
    if (t > 0.5) return beta_partial(1 - t, smoothness_) / norm_;
    return 1.0 - beta_partial(t, smoothness_) / norm_;
}

double RadialBump::step_d1(double t) const {
    return -std::pow(t, smoothness_) * std::pow(1 - t, smoothness_) / norm_;
}

double RadialBump::step_d2(double t) const {
    const int s = smoothness_;
    return -(s * std::pow(t, s - 1) * std::pow(1 - t, s) - s * std::pow(t, s) * std::pow(1 - t, s - 1)) / norm_;
}

double RadialBump::profile(double rho) const {
    if (rho <= inner_) return 1.0;
    if (rho >= outer_) return 0.0;
    return step((rho - inner_) / (outer_ - inner_));
}

double RadialBump::operator()(double y1, double y2) const { return profile(std::hypot(y1, y2)); }

void RadialBump::derivatives(double y1, double y2, double& dx, double& dy, double& dxx, double& dyy) const {
    dx = dy = dxx = dyy = 0;
    const double rho = std::hypot(y1, y2);
    if (rho <= inner_ || rho >= outer_) return;
    const double w = outer_ - inner_;
    const double t = (rho - inner_) / w;
    const double p1 = step_d1(t) / w;       // d/drho
    const double p2 = step_d2(t) / (w * w); // d2/drho2
    const double c = y1 / rho, s = y2 / rho;
    dx = p1 * c;
    dy = p1 * s;
    // d2/dx2 of f(rho) = f'' c^2 + f' s^2 / rho
    dxx = p2 * c * c + p1 * s * s / rho;
    dyy = p2 * s * s + p1 * c * c / rho;
}

}  // namespace bidisc
