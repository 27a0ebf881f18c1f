#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include "bidisc/exact.hpp"

namespace bidisc {

/// Raised when an antiderivative would leave the representable family.
class OutsideFamilyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a singular function is evaluated where it is undefined.
class SingularDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Exact element of the corner-singular family
///
///     p1 log(y1^2+y2^2) + p2 + p3 arctan(y1/y2) + p4 log|y1| + p5 (pi/2) sgn(y1)
///       + q / (y1^2+y2^2) + s / y1
///
/// with Gaussian-rational polynomial coefficients. The last two "rational-singular" parts
/// only arise from differentiation; they are kept in canonical reduced form
/// (deg_{y2} q <= 1, s independent of y1) so equality is structural.
struct SingularFunction {
    Poly2 log_part;      // p1
    Poly2 poly_part;     // p2
    Poly2 atan_part;     // p3
    Poly2 log_y1_part;   // p4
    Poly2 sign_part;     // p5, multiplies (pi/2) sgn(y1)
    Poly2 over_rho2;     // q
    Poly2 over_y1;       // s

    // Provenance label (l, j, k); -1 when not a member of the named family.
    int l = -1, j = -1, k = -1;

    bool has_rational_part() const { return !over_rho2.is_zero() || !over_y1.is_zero(); }
    bool is_polynomial() const;
    bool is_zero() const { return is_polynomial() && poly_part.is_zero(); }

    /// Brings the rational-singular parts to canonical form.
    void canonicalize();

    /// Common degree d if every polynomial part is homogeneous of degree d.
    std::optional<int> homogeneous_degree() const;

    SingularFunction& operator+=(const SingularFunction& o);
    SingularFunction& operator-=(const SingularFunction& o);
    SingularFunction& operator*=(const GaussRational& c);
    friend SingularFunction operator+(SingularFunction a, const SingularFunction& b) { return a += b; }
    friend SingularFunction operator-(SingularFunction a, const SingularFunction& b) { return a -= b; }
    friend SingularFunction operator*(SingularFunction a, const GaussRational& c) { return a *= c; }
    /// Multiplication by a polynomial; rational parts are re-reduced.
    friend SingularFunction operator*(const Poly2& p, const SingularFunction& f);

    /// Structural equality of the function parts (labels ignored).
    friend bool operator==(const SingularFunction& a, const SingularFunction& b);

    std::string str() const;
};

/// 1/(y1^2+y2^2) as a rational-singular element.
SingularFunction phi_zero();

/// Phi_l for l >= 1: Phi_1 = -(i/2) log(y1^2+y2^2); Phi_{l+1} solves
/// d/dy2 Phi_{l+1} = y2 Phi_l / (2l) with p2(y1, 0) = 0.
SingularFunction phi_base(int l);

/// Exact partial derivative along axis 1 or 2. Input must be free of rational parts.
SingularFunction differentiate_singular(const SingularFunction& f, int axis);

/// Indefinite antiderivatives (the additive "constant" is chosen as zero polynomial).
SingularFunction antiderivative_y1(const SingularFunction& f);
SingularFunction antiderivative_y2(const SingularFunction& f);

/// Definite integral from 0 to y2 (on y2 > 0), including the limits at y2 -> 0+.
SingularFunction integral_y2_from_zero(const SingularFunction& f);

/// (Phi_l)_j from (Phi_l)_{j-1}: unique antiderivative in y1 of the form
/// p1 log + p2 + p3 arctan with p2(0, y2) = 0.
SingularFunction phi_antiderivative_y1(const SingularFunction& f);

/// k-fold iterated integral from 0 in y2: (Phi_l)_j -> (Phi_l)_{jk}.
SingularFunction phi_iterated_integral_y2(const SingularFunction& f, int k);

/// (Phi_l)_{jk} built from scratch.
SingularFunction phi_ljk(int l, int j, int k);

/// Floating evaluation. For y2 < 0 the arctan term uses the continuation that is continuous
/// across y2 = 0 with the cut on the negative y2-axis: arctan(y1/y2) + pi sgn(y1).
std::complex<double> eval_singular(const SingularFunction& f, double y1, double y2);

/// The arctan(y1/y2) branch used by eval_singular.
double atan_branch(double y1, double y2);

/// {"l","j","k","p1":[[a,b,re,im],...],"p2",...,"p4"} with re/im as exact "p/q" strings.
/// The extension parts (sign, 1/rho^2, 1/y1) are emitted under "p5", "q", "s" when present.
std::string singular_to_json(const SingularFunction& f);

}  // namespace bidisc
