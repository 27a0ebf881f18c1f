#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace bidisc {

using Rational = boost::multiprecision::cpp_rational;

/// Element of Q(i): re + i*im with exact rational parts.
struct GaussRational {
    Rational re{0};
    Rational im{0};

    GaussRational() = default;
    GaussRational(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}
    GaussRational(long long r) : re(r), im(0) {}

    static GaussRational I() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    std::complex<double> to_complex() const;
    std::string str() const;

    GaussRational operator-() const { return {-re, -im}; }
    GaussRational& operator+=(const GaussRational& o);
    GaussRational& operator-=(const GaussRational& o);
    GaussRational& operator*=(const GaussRational& o);
    GaussRational& operator/=(const GaussRational& o);

    friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
    friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
    friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re == b.re && a.im == b.im;
    }
};

/// Exponent pair (power of y1, power of y2).
using Monomial = std::pair<int, int>;

/// Sparse bivariate polynomial in (y1, y2) over Q(i). Zero coefficients are never stored,
/// so structural equality is mathematical equality.
class Poly2 {
public:
    Poly2() = default;
    explicit Poly2(const GaussRational& c);
    static Poly2 monomial(int a, int b, const GaussRational& c = GaussRational(1));

    const std::map<Monomial, GaussRational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    GaussRational coeff(int a, int b) const;
    void add_term(int a, int b, const GaussRational& c);

    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    int degree_y1() const;
    int degree_y2() const;
    /// True when every term has total degree d (the zero polynomial is homogeneous of any degree).
    bool is_homogeneous(int d) const;

    Poly2 d_y1() const;
    Poly2 d_y2() const;
    /// Restriction to y2 = 0 (result depends on y1 only).
    Poly2 at_y2_zero() const;
    /// Restriction to y1 = 0 (result depends on y2 only).
    Poly2 at_y1_zero() const;
    Poly2 shifted(int da, int db) const;

    std::complex<double> eval(double y1, double y2) const;

    Poly2& operator+=(const Poly2& o);
    Poly2& operator-=(const Poly2& o);
    Poly2& operator*=(const GaussRational& c);
    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
    friend Poly2 operator*(Poly2 a, const GaussRational& c) { return a *= c; }
    friend Poly2 operator*(const Poly2& a, const Poly2& b);
    friend bool operator==(const Poly2& a, const Poly2& b) { return a.terms_ == b.terms_; }

    std::string str() const;

private:
    std::map<Monomial, GaussRational> terms_;
};

}  // namespace bidisc
