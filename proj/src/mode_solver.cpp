#include "bidisc/mode_solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace bidisc {

namespace {

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

Eigen::MatrixXcd RadialOperator::extend(const Eigen::MatrixXcd& u) const {
    // u has the unknowns along its rows; the outer node is appended as the last row.
    Eigen::MatrixXcd out(u.rows() + 1, u.cols());
    out.topRows(u.rows()) = u;
    out.row(u.rows()) = outer_row.cast<cplx>() * u;
    return out;
}

RadialOperator assemble_radial_operator(const std::vector<double>& r, int m, AxisBoundary bc, int order) {
    const int n = static_cast<int>(r.size());
    const double m2 = static_cast<double>(m) * m;
    if (m2 / (r.front() * r.front()) > 0.01 * std::numeric_limits<double>::max())
        throw std::invalid_argument("assemble_mode_operator: m^2/r^2 overflows at the innermost node");
    const auto d = make_radial_diff(r, m, order);
    RadialOperator op;
    op.m = m;
    op.order = order;
    op.bc = bc;
    op.r = r;
    op.full = d.d2;
    for (int i = 0; i < n; ++i) {
        op.full.row(i) += d.d1.row(i) / r[i];
        op.full(i, i) -= m2 / (r[i] * r[i]);
    }
    op.outer_row = Eigen::RowVectorXd::Zero(n - 1);
    if (bc.kind == AxisBoundary::robin) {
        // One-sided a'(1) = kappa a(1), solved for the outer value.
        const double diag = d.d1(n - 1, n - 1) - bc.kappa;
        if (std::abs(diag) < 1e-12) throw std::invalid_argument("assemble_mode_operator: degenerate Robin closure");
        op.outer_row = -d.d1.row(n - 1).head(n - 1) / diag;
    }
    op.L = op.full.topLeftCorner(n - 1, n - 1) + op.full.col(n - 1).head(n - 1) * op.outer_row;
    return op;
}

Eigen::MatrixXd LinearSystem::dense() const {
    const Eigen::Index a = op1.L.rows(), b = op2.L.rows();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(a * b, a * b);
    for (Eigen::Index i = 0; i < a; ++i)
        for (Eigen::Index k = 0; k < a; ++k)
            if (op1.L(i, k) != 0)
                for (Eigen::Index j = 0; j < b; ++j) K(i * b + j, k * b + j) += op1.L(i, k);
    for (Eigen::Index i = 0; i < a; ++i) K.block(i * b, i * b, b, b) += op2.L;
    return K;
}

LinearSystem assemble_mode_operator(int m1, int m2, const std::vector<double>& r1, const std::vector<double>& r2,
                                    int order, AxisBoundary bc1, AxisBoundary bc2) {
    return {assemble_radial_operator(r1, m1, bc1, order), assemble_radial_operator(r2, m2, bc2, order)};
}

Eigen::MatrixXcd apply_mode_operator(int m1, int m2, const std::vector<double>& r1, const std::vector<double>& r2,
                                     const Eigen::MatrixXcd& a, int order) {
    const auto o1 = assemble_radial_operator(r1, m1, {}, order);
    const auto o2 = assemble_radial_operator(r2, m2, {}, order);
    return o1.full.cast<cplx>() * a + a * o2.full.transpose().cast<cplx>();
}

ModeSolver::ModeSolver(std::vector<double> r1, std::vector<double> r2, SolverOptions opt)
    : r1_(std::move(r1)), r2_(std::move(r2)), opt_(opt) {}

const ModeSolver::Eig& ModeSolver::eig(int axis, int m, const AxisBoundary& bc) {
    const auto key = std::make_tuple(axis, m, static_cast<int>(bc.kind), bc.kind == AxisBoundary::robin ? bc.kappa : 0.0);
    auto& slot = cache_[key];
    if (!slot) {
        auto e = std::make_unique<Eig>();
        e->op = assemble_radial_operator(axis == 1 ? r1_ : r2_, m, bc, opt_.order);
        Eigen::EigenSolver<Eigen::MatrixXd> es(e->op.L);
        if (es.info() != Eigen::Success) throw SolveError("mode solver: eigendecomposition failed", NAN);
        e->lambda = es.eigenvalues();
        e->V = es.eigenvectors();
        e->Vinv = e->V.partialPivLu().inverse();
        slot = std::move(e);
    }
    return *slot;
}

ModeSolution ModeSolver::solve(const ModeProblem& p) {
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index n1 = static_cast<Eigen::Index>(r1_.size()), n2 = static_cast<Eigen::Index>(r2_.size());
    if (p.rhs.rows() != n1 || p.rhs.cols() != n2) throw std::invalid_argument("solve_mode: rhs shape mismatch");
    if (!p.rhs.allFinite()) throw std::invalid_argument("solve_mode: rhs not finite");

    ModeSolution sol;
    sol.m1 = p.m1;
    sol.m2 = p.m2;
    const Eigen::MatrixXcd C = p.rhs.topLeftCorner(n1 - 1, n2 - 1);
    const double cnorm = C.cwiseAbs().maxCoeff();
    if (cnorm == 0) {
        sol.a = Eigen::MatrixXcd::Zero(n1, n2);
        sol.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return sol;
    }

    const auto& e1 = eig(1, p.m1, p.bc1);
    const auto& e2 = eig(2, p.m2, p.bc2);
    const LinearSystem sys{e1.op, e2.op};
    Eigen::MatrixXcd X;
    std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)> inverse;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    if ((n1 - 1) * (n2 - 1) <= opt_.dense_limit) {
        sol.dense = true;
        lu.compute(sys.dense());
        inverse = [&](const Eigen::MatrixXcd& R) {
            Eigen::VectorXcd v(R.size());
            for (Eigen::Index i = 0; i < R.rows(); ++i) v.segment(i * R.cols(), R.cols()) = R.row(i).transpose();
            const Eigen::VectorXd xr = lu.solve(Eigen::VectorXd(v.real())), xi = lu.solve(Eigen::VectorXd(v.imag()));
            Eigen::MatrixXcd out(R.rows(), R.cols());
            for (Eigen::Index i = 0; i < R.rows(); ++i)
                for (Eigen::Index j = 0; j < R.cols(); ++j)
                    out(i, j) = cplx(xr(i * R.cols() + j), xi(i * R.cols() + j));
            return out;
        };
    } else {
        inverse = [&](const Eigen::MatrixXcd& R) {
            Eigen::MatrixXcd Y = e1.Vinv * R * e2.Vinv.transpose();
            for (Eigen::Index i = 0; i < Y.rows(); ++i)
                for (Eigen::Index j = 0; j < Y.cols(); ++j) Y(i, j) /= e1.lambda(i) + e2.lambda(j);
            return Eigen::MatrixXcd(e1.V * Y * e2.V.transpose());
        };
    }
    // Normwise backward error: the clustered nodes near r = 1 make |L| ~ 1/h^2 large, so
    // |C - L X| / |C| has a floor of about eps |L| |X| / |C|.
    const double lnorm = e1.op.L.cwiseAbs().rowwise().sum().maxCoeff() + e2.op.L.cwiseAbs().rowwise().sum().maxCoeff();
    auto backward = [&](const Eigen::MatrixXcd& Y) {
        return (C - sys.apply(Y)).cwiseAbs().maxCoeff() / (cnorm + lnorm * Y.cwiseAbs().maxCoeff());
    };
    X = inverse(C);
    double res = backward(X);
    int it = 0;
    while (res > opt_.tol && it < opt_.max_refinements) {
        X += inverse(C - sys.apply(X));
        res = backward(X);
        ++it;
    }
    sol.residual_norm = res;
    sol.iterations = it;
    if (res > opt_.tol)
        throw SolveError("solve_mode: mode (" + std::to_string(p.m1) + "," + std::to_string(p.m2) + ") residual " + fmt_g(res) + " above tolerance after refinement", res);

    // Restore the outer nodes: rows via the r1 closure, then columns via the r2 closure.
    const Eigen::MatrixXcd rows = e1.op.extend(X);
    sol.a = e2.op.extend(rows.transpose()).transpose();
    sol.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

ModeSolution solve_mode(const ModeProblem& p, const std::vector<double>& r1, const std::vector<double>& r2,
                        const SolverOptions& opt) {
    ModeSolver s(r1, r2, opt);
    return s.solve(p);
}

double smallest_singular_value(const LinearSystem& sys) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.dense());
    return svd.singularValues().minCoeff();
}

cplx PowerSum2::eval(double r1, double r2) const {
    cplx s = 0;
    for (const auto& t : terms) s += t.c * std::pow(r1, t.k1) * std::pow(r2, t.k2);
    return s;
}

cplx PowerSum2::apply_operator(int m1, int m2, double r1, double r2) const {
    // L_m r^k = (k^2 - m^2) r^{k-2}
    cplx s = 0;
    for (const auto& t : terms) {
        const double f1 = static_cast<double>(t.k1) * t.k1 - static_cast<double>(m1) * m1;
        const double f2 = static_cast<double>(t.k2) * t.k2 - static_cast<double>(m2) * m2;
        if (f1 != 0) s += t.c * f1 * std::pow(r1, t.k1 - 2) * std::pow(r2, t.k2);
        if (f2 != 0) s += t.c * f2 * std::pow(r1, t.k1) * std::pow(r2, t.k2 - 2);
    }
    return s;
}

Eigen::MatrixXcd PowerSum2::sample(const std::vector<double>& r1, const std::vector<double>& r2) const {
    Eigen::MatrixXcd out(r1.size(), r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i)
        for (std::size_t j = 0; j < r2.size(); ++j) out(i, j) = eval(r1[i], r2[j]);
    return out;
}

PowerSum2 PowerSum2::operator*(const PowerSum2& o) const {
    PowerSum2 out;
    for (const auto& a : terms)
        for (const auto& b : o.terms) out.terms.push_back({a.c * b.c, a.k1 + b.k1, a.k2 + b.k2});
    return out;
}

PowerSum2 PowerSum2::bubble(int m1, int m2, int p) {
    const int a = std::abs(m1), b = std::abs(m2);
    return PowerSum2{{{1, a, b}, {-1, a + p, b}, {-1, a, b + p}, {1, a + p, b + p}}};
}

ModeProblem manufactured_rhs(const PowerSum2& a_expr, int m1, int m2, const std::vector<double>& r1,
                             const std::vector<double>& r2, AxisBoundary bc1, AxisBoundary bc2) {
    // The boundary trace on r1 = 1 is a polynomial in r2 with coefficients sum_{k1} c_{k1 k2}
    // (times k1 - kappa for the Robin form); each must vanish.
    std::map<int, cplx> on_r1, on_r2;
    for (const auto& t : a_expr.terms) {
        if (t.k1 < 0 || t.k2 < 0) throw std::invalid_argument("manufactured_rhs: negative powers are not allowed");
        on_r1[t.k2] += bc1.kind == AxisBoundary::robin ? t.c * (t.k1 - bc1.kappa) : t.c;
        on_r2[t.k1] += bc2.kind == AxisBoundary::robin ? t.c * (t.k2 - bc2.kappa) : t.c;
    }
    for (const auto* side : {&on_r1, &on_r2})
        for (const auto& [k, c] : *side)
            if (std::abs(c) > 1e-14)
                throw std::invalid_argument("manufactured_rhs: expression violates the boundary condition");
    ModeProblem p;
    p.m1 = m1;
    p.m2 = m2;
    p.bc1 = bc1;
    p.bc2 = bc2;
    p.rhs.resize(static_cast<Eigen::Index>(r1.size()), static_cast<Eigen::Index>(r2.size()));
    for (std::size_t i = 0; i < r1.size(); ++i)
        for (std::size_t j = 0; j < r2.size(); ++j) p.rhs(i, j) = a_expr.apply_operator(m1, m2, r1[i], r2[j]);
    return p;
}

}  // namespace bidisc
