#include "bidisc/form_data.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bidisc/cutoff.hpp"

namespace bidisc {

ZPoly ZPoly::constant(cplx c) { return monomial(0, 0, 0, 0, c); }

ZPoly ZPoly::monomial(int a, int b, int c, int d, cplx coeff) {
    ZPoly p;
    p.add_term({a, b, c, d}, coeff);
    return p;
}

void ZPoly::add_term(const Key& k, cplx c) {
    for (int e : k)
        if (e < 0) throw std::invalid_argument("ZPoly: negative exponent");
    auto& slot = terms_[k];
    slot += c;
    if (slot == cplx{}) terms_.erase(k);
}

cplx ZPoly::eval(cplx z1, cplx z2) const {
    cplx s = 0;
    const cplx w1 = std::conj(z1), w2 = std::conj(z2);
    for (const auto& [k, c] : terms_) s += c * std::pow(z1, k[0]) * std::pow(w1, k[1]) * std::pow(z2, k[2]) * std::pow(w2, k[3]);
    return s;
}

ZPoly ZPoly::dbar(int axis) const {
    const int slot = axis == 1 ? 1 : 3;
    ZPoly out;
    for (const auto& [key, c] : terms_) {
        if (key[slot] == 0) continue;
        Key k = key;
        const double e = k[slot];
        --k[slot];
        out.add_term(k, c * e);
    }
    return out;
}

ZPoly ZPoly::d(int axis) const {
    const int slot = axis == 1 ? 0 : 2;
    ZPoly out;
    for (const auto& [key, c] : terms_) {
        if (key[slot] == 0) continue;
        Key k = key;
        const double e = k[slot];
        --k[slot];
        out.add_term(k, c * e);
    }
    return out;
}

ZPoly ZPoly::laplacian() const {
    ZPoly out = d(1).dbar(1);
    out += d(2).dbar(2);
    return out * 4.0;
}

std::map<ModeKey, PowerSum2> ZPoly::modes() const {
    std::map<ModeKey, PowerSum2> out;
    for (const auto& [k, c] : terms_) out[{k[0] - k[1], k[2] - k[3]}].terms.push_back({c, k[0] + k[1], k[2] + k[3]});
    return out;
}

int ZPoly::max_mode() const {
    int m = 0;
    for (const auto& [k, c] : terms_) m = std::max({m, std::abs(k[0] - k[1]), std::abs(k[2] - k[3])});
    return m;
}

ZPoly& ZPoly::operator+=(const ZPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

ZPoly& ZPoly::operator*=(cplx s) {
    if (s == cplx{}) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
}

ZPoly operator*(const ZPoly& a, const ZPoly& b) {
    ZPoly out;
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_)
            out.add_term({ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2], ka[3] + kb[3]}, ca * cb);
    return out;
}

nlohmann::json ZPoly::to_json() const {
    auto j = nlohmann::json::array();
    for (const auto& [k, c] : terms_) j.push_back({c.real(), c.imag(), k[0], k[1], k[2], k[3]});
    return j;
}

ZPoly ZPoly::from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("ZPoly: expected a list of [re, im, a, b, c, d] terms");
    ZPoly p;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 6) throw std::invalid_argument("ZPoly: each term is [re, im, a, b, c, d]");
        p.add_term({t[2].get<int>(), t[3].get<int>(), t[4].get<int>(), t[5].get<int>()},
                   {t[0].get<double>(), t[1].get<double>()});
    }
    return p;
}

std::string ZPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    static const char* names[] = {"z1", "conj(z1)", "z2", "conj(z2)"};
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
        for (int q = 0; q < 4; ++q)
            if (k[q] > 0) os << "*" << names[q] << (k[q] > 1 ? "^" + std::to_string(k[q]) : "");
    }
    return os.str();
}

double CornerBump::operator()(double r1, double r2) const {
    const RadialBump b(inner, outer);
    return b.profile(1 - r1) * b.profile(1 - r2);
}

cplx FormData::eval(int j, cplx z1, cplx z2) const {
    const cplx v = component(j).eval(z1, z2);
    return bump ? v * (*bump)(std::abs(z1), std::abs(z2)) : v;
}

ModeCoefficients FormData::modes(int j, const DiscGrid& g1, const DiscGrid& g2, int M) const {
    if (M > std::min(g1.n_theta, g2.n_theta) / 2 - 1)
        throw AliasingError("FormData::modes: M = " + std::to_string(M) + " exceeds n_theta/2 - 1");
    ModeCoefficients out;
    out.M = M;
    out.r1 = g1.r;
    out.r2 = g2.r;
    for (const auto& [key, ps] : component(j).modes()) {
        if (std::abs(key.first) > M || std::abs(key.second) > M)
            throw AliasingError("FormData::modes: data has mode beyond M = " + std::to_string(M));
        Eigen::MatrixXcd a = ps.sample(g1.r, g2.r);
        if (bump)
            for (Eigen::Index i1 = 0; i1 < a.rows(); ++i1)
                for (Eigen::Index i2 = 0; i2 < a.cols(); ++i2) a(i1, i2) *= (*bump)(g1.r[i1], g2.r[i2]);
        out.coeffs[key] = std::move(a);
    }
    return out;
}

ScalarField FormData::sample(int j, const DiscGrid& g1, const DiscGrid& g2) const {
    return ScalarField::sample(g1, g2, [&](cplx z1, cplx z2) { return eval(j, z1, z2); });
}

nlohmann::json FormData::to_json() const {
    nlohmann::json j;
    j["f1"] = f1.to_json();
    j["f2"] = f2.to_json();
    if (bump) j["bump"] = {bump->inner, bump->outer};
    return j;
}

FormData FormData::from_json(const nlohmann::json& j) {
    FormData f;
    f.f1 = ZPoly::from_json(j.at("f1"));
    f.f2 = ZPoly::from_json(j.at("f2"));
    if (j.contains("bump")) {
        const auto& b = j.at("bump");
        f.bump = CornerBump{b.at(0).get<double>(), b.at(1).get<double>()};
    }
    return f;
}

}  // namespace bidisc
