#include "rkistab/poly.hpp"

namespace rkistab {

Poly to_double(const RatPoly& p) {
    Poly out;
    out.c.reserve(p.c.size());
    for (const auto& x : p.c) out.c.push_back(x.get_d());
    return out;
}

Poly trimmed(const Poly& p, double rel_tol) {
    double mx = 0.0;
    for (double x : p.c) mx = std::max(mx, std::abs(x));
    Poly out = p;
    while (!out.c.empty() && std::abs(out.c.back()) <= rel_tol * mx) out.c.pop_back();
    return out;
}

void eval_with_derivative(const Poly& p, cplx z, cplx& value, cplx& deriv) {
    value = 0.0;
    deriv = 0.0;
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) {
        deriv = deriv * z + value;
        value = value * z + *it;
    }
}

Rational eval(const RatPoly& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t k = 1; k < p.c.size(); ++k) d.c.push_back(static_cast<double>(k) * p.c[k]);
    return d;
}

RatPoly binomial_power(const Rational& a, const Rational& b, int n) {
    RatPoly base(RatVec{a, b});
    RatPoly out = RatPoly::constant(Rational(1));
    for (int k = 0; k < n; ++k) out = out * base;
    return out;
}

RatPoly taylor_exp(int hi, int lo) {
    RatVec c(static_cast<std::size_t>(hi) + 1, Rational(0));
    for (int k = lo; k <= hi; ++k) c[static_cast<std::size_t>(k)] = Rational(1) / factorial(k);
    return RatPoly(std::move(c));
}

double relative_coeff_distance(const Poly& a, const Poly& b) {
    double scale = 0.0, diff = 0.0;
    std::size_t n = std::max(a.c.size(), b.c.size());
    for (std::size_t k = 0; k < n; ++k) {
        double x = a.coeff(static_cast<int>(k)), y = b.coeff(static_cast<int>(k));
        scale = std::max({scale, std::abs(x), std::abs(y)});
        diff = std::max(diff, std::abs(x - y));
    }
    return scale == 0.0 ? diff : diff / scale;
}

}  // namespace rkistab
