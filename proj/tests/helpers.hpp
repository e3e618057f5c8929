#pragma once

#include "rkistab/catalog.hpp"
#include "rkistab/forms.hpp"
#include "rkistab/poly.hpp"

#include <random>

namespace testing {

using namespace rkistab;

inline RatMatrix rat_matrix(std::initializer_list<std::initializer_list<const char*>> rows) {
    RatMatrix m;
    for (auto r : rows) {
        RatVec v;
        for (auto x : r) v.push_back(parse_rational(x));
        m.push_back(v);
    }
    return m;
}

// the two-stage SSP method written as convex combinations of Euler steps
inline ShuOsherForm ssp22_natural() {
    return ShuOsherForm::from_exact(rat_matrix({{"0", "0"}, {"1", "0"}, {"0", "1/2"}}),
                                    rat_matrix({{"0", "0"}, {"1", "0"}, {"0", "1/2"}}), 2);
}

inline ButcherTableau ssp22_butcher() {
    return ButcherTableau::from_exact(rat_matrix({{"0", "0"}, {"1", "0"}}), {Rational(1, 2), Rational(1, 2)}, 2);
}

inline RatPoly rpoly(std::initializer_list<const char*> cs) {
    RatPoly p;
    for (auto c : cs) p.c.push_back(parse_rational(c));
    return p;
}

inline double max_abs_diff(const Poly& a, const Poly& b) {
    double d = 0;
    std::size_t n = std::max(a.c.size(), b.c.size());
    for (std::size_t k = 0; k < n; ++k)
        d = std::max(d, std::abs(a.coeff(static_cast<int>(k)) - b.coeff(static_cast<int>(k))));
    return d;
}

inline bool same(const RatPoly& a, const RatPoly& b) { return a == b; }

// every catalog method small enough for per-sample tests
inline std::vector<ShuOsherForm> sample_forms() {
    std::vector<ShuOsherForm> out;
    for (const auto& n : classic_names()) out.push_back(classic_natural_form(n));
    out.push_back(build_ssp2(5));
    out.push_back(build_ssp3(3));
    out.push_back(build_ee_extrapolation(6));
    out.push_back(build_em_extrapolation(6));
    return out;
}

}  // namespace testing
