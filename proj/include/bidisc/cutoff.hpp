#pragma once

namespace bidisc {

/// Radially symmetric polynomial bump: 1 for rho <= inner, 0 for rho >= outer, and the
/// C^smoothness smoothstep in between (normalized integral of t^s (1-t)^s).
class RadialBump {
public:
    RadialBump(double inner, double outer, int smoothness = 7);

    double inner() const { return inner_; }
    double outer() const { return outer_; }

    double operator()(double y1, double y2) const;
    double profile(double rho) const;
    /// Gradient and second partials, used to build commutator terms.
    void derivatives(double y1, double y2, double& dx, double& dy, double& dxx, double& dyy) const;

private:
    double step(double t) const;        // 1 -> 0 as t goes 0 -> 1
    double step_d1(double t) const;
    double step_d2(double t) const;

    double inner_;
    double outer_;
    int smoothness_;
    double norm_;
};

}  // namespace bidisc
