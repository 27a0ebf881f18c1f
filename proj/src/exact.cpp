#include "bidisc/exact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bidisc {

std::complex<double> GaussRational::to_complex() const {
    return {static_cast<double>(re), static_cast<double>(im)};
}

std::string GaussRational::str() const {
    std::ostringstream os;
    if (im == 0) {
        os << re;
    } else if (re == 0) {
        os << im << "i";
    } else {
        os << "(" << re << (im < 0 ? "" : "+") << im << "i)";
    }
    return os.str();
}

GaussRational& GaussRational::operator+=(const GaussRational& o) {
    re += o.re;
    im += o.im;
    return *this;
}

GaussRational& GaussRational::operator-=(const GaussRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

GaussRational& GaussRational::operator*=(const GaussRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
    Rational den = o.re * o.re + o.im * o.im;
    if (den == 0) throw std::domain_error("GaussRational: division by zero");
    Rational r = (re * o.re + im * o.im) / den;
    Rational i = (im * o.re - re * o.im) / den;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

Poly2::Poly2(const GaussRational& c) { add_term(0, 0, c); }

Poly2 Poly2::monomial(int a, int b, const GaussRational& c) {
    Poly2 p;
    p.add_term(a, b, c);
    return p;
}

GaussRational Poly2::coeff(int a, int b) const {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? GaussRational() : it->second;
}

void Poly2::add_term(int a, int b, const GaussRational& c) {
    if (a < 0 || b < 0) throw std::invalid_argument("Poly2: negative exponent");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace({a, b}, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int Poly2::degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.first + m.second);
    return d;
}

int Poly2::degree_y1() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.first);
    return d;
}

int Poly2::degree_y2() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.second);
    return d;
}

bool Poly2::is_homogeneous(int d) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [d](const auto& t) { return t.first.first + t.first.second == d; });
}

Poly2 Poly2::d_y1() const {
    Poly2 out;
    for (const auto& [m, c] : terms_)
        if (m.first > 0) out.add_term(m.first - 1, m.second, c * GaussRational(m.first));
    return out;
}

Poly2 Poly2::d_y2() const {
    Poly2 out;
    for (const auto& [m, c] : terms_)
        if (m.second > 0) out.add_term(m.first, m.second - 1, c * GaussRational(m.second));
    return out;
}

Poly2 Poly2::at_y2_zero() const {
    Poly2 out;
    for (const auto& [m, c] : terms_)
        if (m.second == 0) out.add_term(m.first, 0, c);
    return out;
}

Poly2 Poly2::at_y1_zero() const {
    Poly2 out;
    for (const auto& [m, c] : terms_)
        if (m.first == 0) out.add_term(0, m.second, c);
    return out;
}

Poly2 Poly2::shifted(int da, int db) const {
    Poly2 out;
    for (const auto& [m, c] : terms_) out.add_term(m.first + da, m.second + db, c);
    return out;
}

std::complex<double> Poly2::eval(double y1, double y2) const {
    std::complex<double> s = 0.0;
    for (const auto& [m, c] : terms_)
        s += c.to_complex() * std::pow(y1, m.first) * std::pow(y2, m.second);
    return s;
}

Poly2& Poly2::operator+=(const Poly2& o) {
    for (const auto& [m, c] : o.terms_) add_term(m.first, m.second, c);
    return *this;
}

Poly2& Poly2::operator-=(const Poly2& o) {
    for (const auto& [m, c] : o.terms_) add_term(m.first, m.second, -c);
    return *this;
}

Poly2& Poly2::operator*=(const GaussRational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            out.add_term(ma.first + mb.first, ma.second + mb.second, ca * cb);
    return out;
}

std::string Poly2::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        if (m.first) os << "*y1^" << m.first;
        if (m.second) os << "*y2^" << m.second;
    }
    return os.str();
}

}  // namespace bidisc
