#pragma once

#include <span>
#include <vector>

namespace bidisc {

/// Finite-difference weights for derivatives 0..max_order at x0 on arbitrary nodes
/// (Fornberg's recursion). Result is indexed [order][node].
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes, int max_order);

/// Weights for the integral over one panel [x_k, x_{k+1}] of the local interpolant through
/// the nodes lo .. lo + w.size() - 1.
struct PanelWeights {
    std::size_t lo = 0;
    std::vector<double> w;
};
std::vector<PanelWeights> panel_quadrature_weights(std::span<const double> nodes, int degree = 4);

/// Weights w_i with sum_i w_i f(x_i) ~ integral of f over [nodes.front(), nodes.back()],
/// integrating local interpolants of degree `degree` panel by panel.
std::vector<double> interval_quadrature_weights(std::span<const double> nodes, int degree = 4);

/// Radial weights for integrals over [0, 1] of functions sampled on radial nodes
/// in (0, 1] that vanish at r = 0 (the usual r dr integrands). The implicit value
/// at r = 0 is zero and contributes no weight.
std::vector<double> radial_quadrature_weights(std::span<const double> r_nodes, int degree = 4);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Lagrange interpolation of samples (x, f) at the point t, using the `points`
/// nodes nearest to t.
template <class T>
T interpolate_local(std::span<const double> x, std::span<const T> f, double t, int points = 6);

}  // namespace bidisc

#include "bidisc/stencil_impl.hpp"
