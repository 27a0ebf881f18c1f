#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "bidisc/grid.hpp"

namespace bidisc {

/// Condition at the outer node r = 1 of one radial axis.
/// dirichlet: a(1) = 0.  robin: a'(1) = kappa a(1).
struct AxisBoundary {
    enum Kind { dirichlet, robin } kind = dirichlet;
    double kappa = 0;

    static AxisBoundary robin_with(double k) { return {robin, k}; }
};

/// Discrete L_m = d^2/dr^2 + (1/r) d/dr - m^2/r^2 on one axis, restricted to the
/// unknown nodes r_0 .. r_{n-2}. The outer node is either zero or eliminated through
/// a(r_{n-1}) = outer_row . a.
struct RadialOperator {
    int m = 0;
    int order = 2;
    AxisBoundary bc;
    std::vector<double> r;
    Eigen::MatrixXd full;       // n x n operator on all nodes
    Eigen::MatrixXd L;          // (n-1) x (n-1) on the unknowns
    Eigen::RowVectorXd outer_row;

    int unknowns() const { return static_cast<int>(L.rows()); }
    /// Unknown values -> all nodal values.
    Eigen::MatrixXcd extend(const Eigen::MatrixXcd& u) const;
};

RadialOperator assemble_radial_operator(const std::vector<double>& r, int m, AxisBoundary bc, int order);

/// L1 (x) I + I (x) L2 for one mode pair, acting on (n1-1) x (n2-1) unknown arrays.
struct LinearSystem {
    RadialOperator op1;
    RadialOperator op2;

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& X) const { return op1.L * X + X * op2.L.transpose(); }
    /// Kronecker form, unknowns ordered with the r2 index fastest.
    Eigen::MatrixXd dense() const;
};

/// Rejects grids whose smallest radius makes m^2/r^2 overflow.
LinearSystem assemble_mode_operator(int m1, int m2, const std::vector<double>& r1, const std::vector<double>& r2,
                                    int order = 2, AxisBoundary bc1 = {}, AxisBoundary bc2 = {});

/// The continuous operator applied to nodal values on the full grid (boundary nodes included),
/// with the same stencils as the assembled system. Rows at r = 1 are one-sided.
Eigen::MatrixXcd apply_mode_operator(int m1, int m2, const std::vector<double>& r1, const std::vector<double>& r2,
                                     const Eigen::MatrixXcd& a, int order = 2);

struct ModeProblem {
    int m1 = 0;
    int m2 = 0;
    Eigen::MatrixXcd rhs;  // n1 x n2 samples of c_{m1 m2}; rows/cols at r = 1 are ignored
    AxisBoundary bc1;
    AxisBoundary bc2;
};

struct ModeSolution {
    int m1 = 0;
    int m2 = 0;
    Eigen::MatrixXcd a;        // n1 x n2, boundary nodes included
    double residual_norm = 0;  // max |c - L a| / (max |c| + |L|_inf max |a|) over the unknowns
    int iterations = 0;
    double solve_time = 0;
    bool dense = false;
};

class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& what, double residual) : std::runtime_error(what), residual(residual) {}
    double residual;
};

struct SolverOptions {
    int order = 2;
    double tol = 1e-10;
    int max_refinements = 6;
    /// Systems with at most this many unknowns are solved by dense LU.
    int dense_limit = 1600;
};

/// Fast diagonalization solver with per-axis eigendecompositions cached across modes.
class ModeSolver {
public:
    ModeSolver(std::vector<double> r1, std::vector<double> r2, SolverOptions opt = {});

    ModeSolution solve(const ModeProblem& p);
    const SolverOptions& options() const { return opt_; }

private:
    struct Eig {
        RadialOperator op;
        Eigen::VectorXcd lambda;
        Eigen::MatrixXcd V, Vinv;
    };
    const Eig& eig(int axis, int m, const AxisBoundary& bc);

    std::vector<double> r1_, r2_;
    SolverOptions opt_;
    std::map<std::tuple<int, int, int, double>, std::unique_ptr<Eig>> cache_;
};

/// One-off convenience wrapper.
ModeSolution solve_mode(const ModeProblem& p, const std::vector<double>& r1, const std::vector<double>& r2,
                        const SolverOptions& opt = {});

/// Smallest |singular value| of the dense system (definiteness check for small grids).
double smallest_singular_value(const LinearSystem& sys);

/// Closed-form field sum c r1^k1 r2^k2 (k >= 0) used to manufacture exact problems.
struct PowerSum2 {
    struct Term {
        cplx c;
        int k1, k2;
    };
    std::vector<Term> terms;

    cplx eval(double r1, double r2) const;
    /// (d^2/dr1^2 + d/(r1 dr1) - m1^2/r1^2 + same in r2) applied exactly, then evaluated.
    cplx apply_operator(int m1, int m2, double r1, double r2) const;
    Eigen::MatrixXcd sample(const std::vector<double>& r1, const std::vector<double>& r2) const;

    PowerSum2 operator*(const PowerSum2& o) const;
    /// (1 - r1^p)(1 - r2^p) r1^|m1| r2^|m2|.
    static PowerSum2 bubble(int m1, int m2, int p = 2);
};

/// Problem with rhs = continuous operator of a_expr. Rejects expressions that violate the
/// boundary conditions on r1 = 1 and r2 = 1 (checked exactly on the coefficients).
ModeProblem manufactured_rhs(const PowerSum2& a_expr, int m1, int m2, const std::vector<double>& r1,
                             const std::vector<double>& r2, AxisBoundary bc1 = {}, AxisBoundary bc2 = {});

}  // namespace bidisc
