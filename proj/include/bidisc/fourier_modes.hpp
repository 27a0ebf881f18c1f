#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bidisc/grid.hpp"

namespace bidisc {

using ModeKey = std::pair<int, int>;

class AliasingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Radial coefficient fields a_{m1 m2}(r1, r2) of the double angular expansion
///     f = sum a_{m1 m2}(r1, r2) e^{i m1 theta1} e^{i m2 theta2},   |m1|, |m2| <= M.
/// Modes that were pruned or never set are zero.
struct ModeCoefficients {
    int M = 0;
    std::vector<double> r1;
    std::vector<double> r2;
    std::map<ModeKey, Eigen::MatrixXcd> coeffs;  // each n_r1 x n_r2

    Eigen::MatrixXcd get(int m1, int m2) const;
    const Eigen::MatrixXcd* find(int m1, int m2) const;
    /// Peak amplitude over modes with max(|m1|, |m2|) == M, relative to the overall peak.
    double tail() const;
};

/// Exact uniform-grid angular transform at every radial node pair. M must not exceed
/// n_theta/2 - 1 on either disc (AliasingError otherwise). Modes whose peak magnitude is
/// <= prune are dropped.
ModeCoefficients decompose(const ScalarField& f, int M, double prune = -1.0);

/// Same transform, sampling the callable (z1, z2) on the fly instead of storing the 4-D field.
ModeCoefficients decompose(const std::function<cplx(cplx, cplx)>& fn, const DiscGrid& g1, const DiscGrid& g2, int M,
                           double prune = -1.0);

ScalarField reconstruct(const ModeCoefficients& modes, const DiscGrid& g1, const DiscGrid& g2);

/// Sum of the series at radial node pair (i1, i2) and arbitrary angles.
cplx evaluate_modes(const ModeCoefficients& modes, int i1, double theta1, int i2, double theta2);

/// Smallest M <= n_theta/2 - 1 whose omitted modes are all below tol relative to the peak.
int choose_truncation(const std::function<cplx(cplx, cplx)>& fn, const DiscGrid& g1, const DiscGrid& g2,
                      double tol = 1e-10);

/// CSV with columns m1,m2,r1,r2,re,im (17 significant digits), modes in key order.
std::string modes_csv(const ModeCoefficients& modes);

/// Element-wise a*x + b*y on the union of keys. Grids must match.
ModeCoefficients combine(cplx a, const ModeCoefficients& x, cplx b, const ModeCoefficients& y);

}  // namespace bidisc
