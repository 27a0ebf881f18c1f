#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "bidisc/fourier_modes.hpp"
#include "bidisc/grid.hpp"
#include "bidisc/mode_solver.hpp"

namespace bidisc {

/// Polynomial in z1, z1bar, z2, z2bar with complex coefficients. The exponent key is
/// {a, b, c, d} for z1^a z1bar^b z2^c z2bar^d.
class ZPoly {
public:
    using Key = std::array<int, 4>;

    ZPoly() = default;
    static ZPoly constant(cplx c);
    static ZPoly monomial(int a, int b, int c, int d, cplx coeff = 1.0);

    const std::map<Key, cplx>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    void add_term(const Key& k, cplx c);

    cplx eval(cplx z1, cplx z2) const;
    ZPoly dbar(int axis) const;
    ZPoly d(int axis) const;
    /// Euclidean Laplacian in R^4: 4 (d1 dbar1 + d2 dbar2).
    ZPoly laplacian() const;

    /// Exact angular modes: z1^a z1bar^b z2^c z2bar^d = r1^{a+b} r2^{c+d} e^{i(a-b) theta1} e^{i(c-d) theta2}.
    std::map<ModeKey, PowerSum2> modes() const;
    int max_mode() const;

    ZPoly& operator+=(const ZPoly& o);
    ZPoly& operator*=(cplx s);
    friend ZPoly operator+(ZPoly a, const ZPoly& b) { return a += b; }
    friend ZPoly operator*(ZPoly a, cplx s) { return a *= s; }
    friend ZPoly operator*(const ZPoly& a, const ZPoly& b);
    friend bool operator==(const ZPoly& a, const ZPoly& b) { return a.terms_ == b.terms_; }

    /// JSON form: list of [re, im, a, b, c, d].
    nlohmann::json to_json() const;
    static ZPoly from_json(const nlohmann::json& j);
    std::string str() const;

private:
    std::map<Key, cplx> terms_;
};

/// Factor B(1 - r1) B(1 - r2) with B the smooth step that is 1 on [0, inner] and 0 beyond outer.
/// It is identically 1 near the distinguished boundary.
struct CornerBump {
    double inner = 0.3;
    double outer = 0.6;
    double operator()(double r1, double r2) const;
};

/// Data f = (f1, f2) for the (0,1)-form problem, each component a polynomial times an optional bump.
struct FormData {
    ZPoly f1;
    ZPoly f2;
    std::optional<CornerBump> bump;

    const ZPoly& component(int j) const { return j == 1 ? f1 : f2; }
    cplx eval(int j, cplx z1, cplx z2) const;
    /// Angular modes of component j on the radial grids (exact per mode, no transform needed).
    ModeCoefficients modes(int j, const DiscGrid& g1, const DiscGrid& g2, int M) const;
    ScalarField sample(int j, const DiscGrid& g1, const DiscGrid& g2) const;

    nlohmann::json to_json() const;
    static FormData from_json(const nlohmann::json& j);
};

}  // namespace bidisc
