#include "doctest.h"

#include "bidisc/exact.hpp"

using namespace bidisc;

TEST_CASE("gaussian rationals") {
    const GaussRational half(Rational(1, 2));
    const auto i = GaussRational::I();
    CHECK(i * i == GaussRational(-1));
    CHECK((half - i) * (half + i) == GaussRational(Rational(5, 4)));
    CHECK((GaussRational(1) / i) == -i);
    CHECK(GaussRational(Rational(3, 4), Rational(-1, 2)).to_complex() == std::complex<double>(0.75, -0.5));
}

TEST_CASE("polynomials store no zero terms") {
    Poly2 p = Poly2::monomial(2, 1, 3) + Poly2::monomial(0, 3);
    Poly2 q = p - Poly2::monomial(2, 1, 3);
    CHECK(q == Poly2::monomial(0, 3));
    CHECK((p - p).is_zero());
    CHECK(p.degree() == 3);
    CHECK(p.is_homogeneous(3));
    CHECK(!(p + Poly2(GaussRational(1))).is_homogeneous(3));
}

TEST_CASE("polynomial calculus") {
    const Poly2 p = Poly2::monomial(3, 2, 2);  // 2 y1^3 y2^2
    CHECK(p.d_y1() == Poly2::monomial(2, 2, 6));
    CHECK(p.d_y2() == Poly2::monomial(3, 1, 4));
    CHECK(p.at_y2_zero().is_zero());
    CHECK((p * Poly2::monomial(1, 0)) == Poly2::monomial(4, 2, 2));
    CHECK(p.eval(2, 3).real() == doctest::Approx(144));
}
