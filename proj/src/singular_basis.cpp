#include "bidisc/singular_basis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace bidisc {

namespace {

GaussRational frac(long long num, long long den) { return GaussRational(Rational(num, den)); }

// Divide q by rho^2 = y1^2 + y2^2 in y2 until deg_{y2} <= 1; the quotient goes to `quotient`.
void reduce_over_rho2(Poly2& q, Poly2& quotient) {
    for (;;) {
        const Monomial* high = nullptr;
        for (const auto& [m, c] : q.terms())
            if (m.second >= 2 && (!high || m.second > high->second)) high = &m;
        if (!high) return;
        const auto [a, b] = *high;
        const GaussRational c = q.coeff(a, b);
        q.add_term(a, b, -c);
        quotient.add_term(a, b - 2, c);
        q.add_term(a + 2, b - 2, -c);
    }
}

// s / y1 -> quotient + s0(y2) / y1.
void reduce_over_y1(Poly2& s, Poly2& quotient) {
    std::vector<std::pair<Monomial, GaussRational>> moved;
    for (const auto& [m, c] : s.terms())
        if (m.first >= 1) moved.emplace_back(m, c);
    for (const auto& [m, c] : moved) {
        s.add_term(m.first, m.second, -c);
        quotient.add_term(m.first - 1, m.second, c);
    }
}

// Integral in y1 of c * y1^n y2^e / rho^2.
void add_int_y1_over_rho2(SingularFunction& out, int n, int e, const GaussRational& c) {
    if (n >= 2) {
        // y1^n = y1^{n-2} rho^2 - y2^2 y1^{n-2}
        out.poly_part.add_term(n - 1, e, c * frac(1, n - 1));
        add_int_y1_over_rho2(out, n - 2, e + 2, -c);
    } else if (n == 1) {
        out.log_part.add_term(0, e, c * frac(1, 2));
    } else {
        if (e < 1) throw OutsideFamilyError("y1-antiderivative of 1/rho^2 leaves the family");
        out.atan_part.add_term(0, e - 1, c);
    }
}

// Integral in y2 of c * y2^n y1^e / rho^2 on y2 > 0.
void add_int_y2_over_rho2(SingularFunction& out, int n, int e, const GaussRational& c) {
    if (n >= 2) {
        out.poly_part.add_term(e, n - 1, c * frac(1, n - 1));
        add_int_y2_over_rho2(out, n - 2, e + 2, -c);
    } else if (n == 1) {
        out.log_part.add_term(e, 0, c * frac(1, 2));
    } else {
        if (e < 1) throw OutsideFamilyError("y2-antiderivative of 1/rho^2 leaves the family");
        // y1^{e-1} * arctan(y2/y1) = y1^{e-1} (S - arctan(y1/y2))
        out.sign_part.add_term(e - 1, 0, c);
        out.atan_part.add_term(e - 1, 0, -c);
    }
}

void check_no_rational(const SingularFunction& f, const char* what) {
    if (f.has_rational_part())
        throw OutsideFamilyError(std::string(what) + ": rational-singular input not supported");
}

}  // namespace

bool SingularFunction::is_polynomial() const {
    return log_part.is_zero() && atan_part.is_zero() && log_y1_part.is_zero() &&
           sign_part.is_zero() && !has_rational_part();
}

void SingularFunction::canonicalize() {
    reduce_over_rho2(over_rho2, poly_part);
    reduce_over_y1(over_y1, poly_part);
}

std::optional<int> SingularFunction::homogeneous_degree() const {
    std::optional<int> d;
    auto visit = [&d](const Poly2& p, int shift) {
        if (p.is_zero()) return true;
        const int deg = p.degree() + shift;
        if (!p.is_homogeneous(deg - shift)) return false;
        if (d && *d != deg) return false;
        d = deg;
        return true;
    };
    if (!visit(log_part, 0) || !visit(poly_part, 0) || !visit(atan_part, 0) ||
        !visit(log_y1_part, 0) || !visit(sign_part, 0) || !visit(over_rho2, -2) ||
        !visit(over_y1, -1))
        return std::nullopt;
    return d;
}

SingularFunction& SingularFunction::operator+=(const SingularFunction& o) {
    log_part += o.log_part;
    poly_part += o.poly_part;
    atan_part += o.atan_part;
    log_y1_part += o.log_y1_part;
    sign_part += o.sign_part;
    over_rho2 += o.over_rho2;
    over_y1 += o.over_y1;
    canonicalize();
    return *this;
}

SingularFunction& SingularFunction::operator-=(const SingularFunction& o) {
    SingularFunction neg = o;
    neg *= GaussRational(-1);
    return *this += neg;
}

SingularFunction& SingularFunction::operator*=(const GaussRational& c) {
    for (Poly2* p : {&log_part, &poly_part, &atan_part, &log_y1_part, &sign_part, &over_rho2, &over_y1})
        *p *= c;
    return *this;
}

SingularFunction operator*(const Poly2& p, const SingularFunction& f) {
    SingularFunction out;
    out.log_part = p * f.log_part;
    out.poly_part = p * f.poly_part;
    out.atan_part = p * f.atan_part;
    out.log_y1_part = p * f.log_y1_part;
    out.sign_part = p * f.sign_part;
    out.over_rho2 = p * f.over_rho2;
    out.over_y1 = p * f.over_y1;
    out.canonicalize();
    return out;
}

bool operator==(const SingularFunction& a, const SingularFunction& b) {
    return a.log_part == b.log_part && a.poly_part == b.poly_part && a.atan_part == b.atan_part &&
           a.log_y1_part == b.log_y1_part && a.sign_part == b.sign_part &&
           a.over_rho2 == b.over_rho2 && a.over_y1 == b.over_y1;
}

std::string SingularFunction::str() const {
    std::ostringstream os;
    os << "[" << log_part.str() << "]*log(rho^2) + [" << poly_part.str() << "] + ["
       << atan_part.str() << "]*atan(y1/y2) + [" << log_y1_part.str() << "]*log|y1| + ["
       << sign_part.str() << "]*(pi/2)sgn(y1)";
    if (!over_rho2.is_zero()) os << " + [" << over_rho2.str() << "]/rho^2";
    if (!over_y1.is_zero()) os << " + [" << over_y1.str() << "]/y1";
    return os.str();
}

SingularFunction phi_zero() {
    SingularFunction f;
    f.over_rho2 = Poly2(GaussRational(1));
    f.l = 0;
    f.j = 0;
    f.k = 0;
    return f;
}

SingularFunction phi_base(int l) {
    if (l < 1) throw std::invalid_argument("phi_base: l must be >= 1");
    SingularFunction phi;
    phi.log_part = Poly2(GaussRational(Rational(0), Rational(-1, 2)));
    for (int level = 1; level < l; ++level) {
        SingularFunction integrand = Poly2::monomial(0, 1, frac(1, 2 * level)) * phi;
        SingularFunction next = antiderivative_y2(integrand);
        next.poly_part -= next.poly_part.at_y2_zero();
        if (!next.atan_part.is_zero() || !next.log_y1_part.is_zero() || !next.sign_part.is_zero() ||
            next.has_rational_part())
            throw std::logic_error("phi_base: recurrence left the log/polynomial form");
        phi = std::move(next);
    }
    phi.l = l;
    phi.j = 0;
    phi.k = 0;
    return phi;
}

SingularFunction differentiate_singular(const SingularFunction& f, int axis) {
    if (axis != 1 && axis != 2) throw std::invalid_argument("differentiate_singular: axis must be 1 or 2");
    if (!f.over_rho2.is_zero()) throw OutsideFamilyError("differentiate_singular: 1/rho^4 terms not representable");
    SingularFunction out;
    if (axis == 1) {
        if (!f.over_y1.is_zero()) throw OutsideFamilyError("differentiate_singular: 1/y1^2 terms not representable");
        out.log_part = f.log_part.d_y1();
        out.over_rho2 = f.log_part.shifted(1, 0) * GaussRational(2);
        out.poly_part = f.poly_part.d_y1();
        out.atan_part = f.atan_part.d_y1();
        out.over_rho2 += f.atan_part.shifted(0, 1);
        out.log_y1_part = f.log_y1_part.d_y1();
        out.over_y1 = f.log_y1_part;
        out.sign_part = f.sign_part.d_y1();
    } else {
        out.log_part = f.log_part.d_y2();
        out.over_rho2 = f.log_part.shifted(0, 1) * GaussRational(2);
        out.poly_part = f.poly_part.d_y2();
        out.atan_part = f.atan_part.d_y2();
        out.over_rho2 -= f.atan_part.shifted(1, 0);
        out.log_y1_part = f.log_y1_part.d_y2();
        out.sign_part = f.sign_part.d_y2();
        out.over_y1 = f.over_y1.d_y2();
    }
    out.canonicalize();
    return out;
}

SingularFunction antiderivative_y1(const SingularFunction& f) {
    check_no_rational(f, "antiderivative_y1");
    SingularFunction out;
    for (const auto& [m, c] : f.poly_part.terms()) {
        const auto [a, b] = m;
        out.poly_part.add_term(a + 1, b, c * frac(1, a + 1));
    }
    for (const auto& [m, c] : f.log_part.terms()) {
        const auto [a, b] = m;
        out.log_part.add_term(a + 1, b, c * frac(1, a + 1));
        add_int_y1_over_rho2(out, a + 2, b, -(c * frac(2, a + 1)));
    }
    for (const auto& [m, c] : f.atan_part.terms()) {
        const auto [a, b] = m;
        out.atan_part.add_term(a + 1, b, c * frac(1, a + 1));
        add_int_y1_over_rho2(out, a + 1, b + 1, -(c * frac(1, a + 1)));
    }
    for (const auto& [m, c] : f.log_y1_part.terms()) {
        const auto [a, b] = m;
        out.log_y1_part.add_term(a + 1, b, c * frac(1, a + 1));
        out.poly_part.add_term(a + 1, b, -(c * frac(1, (a + 1) * (a + 1))));
    }
    for (const auto& [m, c] : f.sign_part.terms()) {
        const auto [a, b] = m;
        out.sign_part.add_term(a + 1, b, c * frac(1, a + 1));
    }
    for (const auto& [m, c] : f.over_y1.terms()) out.log_y1_part.add_term(0, m.second, c);
    for (const auto& [m, c] : f.over_rho2.terms()) add_int_y1_over_rho2(out, m.first, m.second, c);
    out.canonicalize();
    return out;
}

SingularFunction antiderivative_y2(const SingularFunction& f) {
    check_no_rational(f, "antiderivative_y2");
    SingularFunction out;
    for (const auto& [m, c] : f.poly_part.terms()) {
        const auto [a, b] = m;
        out.poly_part.add_term(a, b + 1, c * frac(1, b + 1));
    }
    for (const auto& [m, c] : f.log_part.terms()) {
        const auto [a, b] = m;
        out.log_part.add_term(a, b + 1, c * frac(1, b + 1));
        add_int_y2_over_rho2(out, b + 2, a, -(c * frac(2, b + 1)));
    }
    for (const auto& [m, c] : f.atan_part.terms()) {
        const auto [a, b] = m;
        out.atan_part.add_term(a, b + 1, c * frac(1, b + 1));
        add_int_y2_over_rho2(out, b + 1, a + 1, c * frac(1, b + 1));
    }
    for (const auto& [m, c] : f.log_y1_part.terms()) {
        const auto [a, b] = m;
        out.log_y1_part.add_term(a, b + 1, c * frac(1, b + 1));
    }
    for (const auto& [m, c] : f.sign_part.terms()) {
        const auto [a, b] = m;
        out.sign_part.add_term(a, b + 1, c * frac(1, b + 1));
    }
    for (const auto& [m, c] : f.over_y1.terms()) out.over_y1.add_term(0, m.second + 1, c * frac(1, m.second + 1));
    for (const auto& [m, c] : f.over_rho2.terms()) add_int_y2_over_rho2(out, m.second, m.first, c);
    out.canonicalize();
    return out;
}

SingularFunction integral_y2_from_zero(const SingularFunction& f) {
    SingularFunction upper = antiderivative_y2(f);
    // Limit y2 -> 0+ (a function of y1 alone).
    SingularFunction lower;
    lower.poly_part = upper.poly_part.at_y2_zero();
    lower.log_y1_part = upper.log_part.at_y2_zero() * GaussRational(2);
    lower.log_y1_part += upper.log_y1_part.at_y2_zero();
    lower.sign_part = upper.atan_part.at_y2_zero();
    lower.sign_part += upper.sign_part.at_y2_zero();
    lower.over_y1 = upper.over_y1.at_y2_zero();
    for (const auto& [m, c] : upper.over_rho2.terms()) {
        if (m.second != 0) continue;
        if (m.first >= 2) lower.poly_part.add_term(m.first - 2, 0, c);
        else if (m.first == 1) lower.over_y1.add_term(0, 0, c);
        else throw OutsideFamilyError("integral_y2_from_zero: 1/y1^2 limit not representable");
    }
    upper -= lower;
    return upper;
}

SingularFunction phi_antiderivative_y1(const SingularFunction& f) {
    if (!f.log_y1_part.is_zero() || !f.sign_part.is_zero() || f.has_rational_part() || f.k > 0)
        throw OutsideFamilyError("phi_antiderivative_y1: input is not some (Phi_l)_j");
    SingularFunction out = antiderivative_y1(f);
    out.poly_part -= out.poly_part.at_y1_zero();
    if (!out.log_y1_part.is_zero() || !out.sign_part.is_zero() || out.has_rational_part())
        throw OutsideFamilyError("phi_antiderivative_y1: antiderivative left the log/atan form");
    out.l = f.l;
    out.j = f.j < 0 ? -1 : f.j + 1;
    out.k = f.k < 0 ? -1 : 0;
    return out;
}

SingularFunction phi_iterated_integral_y2(const SingularFunction& f, int k) {
    if (k < 0) throw std::invalid_argument("phi_iterated_integral_y2: k must be >= 0");
    SingularFunction out = f;
    for (int i = 0; i < k; ++i) out = integral_y2_from_zero(out);
    out.l = f.l;
    out.j = f.j;
    out.k = f.k < 0 ? -1 : f.k + k;
    return out;
}

SingularFunction phi_ljk(int l, int j, int k) {
    if (j < 0 || k < 0) throw std::invalid_argument("phi_ljk: j, k must be >= 0");
    SingularFunction f = phi_base(l);
    for (int i = 0; i < j; ++i) f = phi_antiderivative_y1(f);
    return phi_iterated_integral_y2(f, k);
}

double atan_branch(double y1, double y2) {
    if (y2 > 0) return std::atan(y1 / y2);
    if (y1 == 0) throw SingularDomainError("arctan(y1/y2): undefined on the cut y1 = 0, y2 <= 0");
    const double sgn = y1 > 0 ? 1.0 : -1.0;
    if (y2 == 0) return sgn * std::numbers::pi / 2;
    return std::atan(y1 / y2) + sgn * std::numbers::pi;
}

std::complex<double> eval_singular(const SingularFunction& f, double y1, double y2) {
    const double rho2 = y1 * y1 + y2 * y2;
    std::complex<double> v = f.poly_part.eval(y1, y2);
    if (!f.log_part.is_zero()) {
        if (rho2 == 0) throw SingularDomainError("log(y1^2+y2^2) at the origin");
        v += f.log_part.eval(y1, y2) * std::log(rho2);
    }
    if (!f.atan_part.is_zero()) v += f.atan_part.eval(y1, y2) * atan_branch(y1, y2);
    if (!f.log_y1_part.is_zero() || !f.sign_part.is_zero() || !f.over_y1.is_zero()) {
        if (y1 == 0) throw SingularDomainError("log|y1|, sgn(y1) or 1/y1 at y1 = 0");
        v += f.log_y1_part.eval(y1, y2) * std::log(std::abs(y1));
        v += f.sign_part.eval(y1, y2) * (y1 > 0 ? std::numbers::pi / 2 : -std::numbers::pi / 2);
        v += f.over_y1.eval(y1, y2) / y1;
    }
    if (!f.over_rho2.is_zero()) {
        if (rho2 == 0) throw SingularDomainError("1/(y1^2+y2^2) at the origin");
        v += f.over_rho2.eval(y1, y2) / rho2;
    }
    return v;
}

namespace {

nlohmann::json poly_json(const Poly2& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [m, c] : p.terms()) arr.push_back({m.first, m.second, c.re.str(), c.im.str()});
    return arr;
}

}  // namespace

std::string singular_to_json(const SingularFunction& f) {
    nlohmann::json j;
    j["l"] = f.l;
    j["j"] = f.j;
    j["k"] = f.k;
    j["p1"] = poly_json(f.log_part);
    j["p2"] = poly_json(f.poly_part);
    j["p3"] = poly_json(f.atan_part);
    j["p4"] = poly_json(f.log_y1_part);
    if (!f.sign_part.is_zero()) j["p5"] = poly_json(f.sign_part);
    if (!f.over_rho2.is_zero()) j["q"] = poly_json(f.over_rho2);
    if (!f.over_y1.is_zero()) j["s"] = poly_json(f.over_y1);
    return j.dump();
}

}  // namespace bidisc
