#pragma once

#include "rkistab/rational.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace rkistab {

using cplx = std::complex<double>;

// Dense polynomial, coefficients in ascending degree.
template <class T>
struct BasicPoly {
    std::vector<T> c;

    BasicPoly() = default;
    explicit BasicPoly(std::vector<T> coeffs) : c(std::move(coeffs)) {}

    static BasicPoly constant(const T& a) { return BasicPoly(std::vector<T>{a}); }
    static BasicPoly monomial(int k, const T& a) {
        std::vector<T> v(static_cast<std::size_t>(k) + 1, T(0));
        v.back() = a;
        return BasicPoly(std::move(v));
    }

    bool is_zero() const {
        return std::all_of(c.begin(), c.end(), [](const T& x) { return x == T(0); });
    }
    // -1 for the zero polynomial
    int degree() const {
        for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
            if (c[static_cast<std::size_t>(k)] != T(0)) return k;
        return -1;
    }
    T coeff(int k) const {
        return k >= 0 && k < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(k)] : T(0);
    }
    T leading() const {
        int d = degree();
        return d < 0 ? T(0) : c[static_cast<std::size_t>(d)];
    }
    void trim_exact() {
        while (!c.empty() && c.back() == T(0)) c.pop_back();
    }

    BasicPoly& operator+=(const BasicPoly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (std::size_t k = 0; k < o.c.size(); ++k) c[k] += o.c[k];
        return *this;
    }
    BasicPoly& operator-=(const BasicPoly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (std::size_t k = 0; k < o.c.size(); ++k) c[k] -= o.c[k];
        return *this;
    }
    BasicPoly& operator*=(const T& a) {
        for (auto& x : c) x *= a;
        return *this;
    }
    friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
    friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
    friend BasicPoly operator*(BasicPoly a, const T& s) { return a *= s; }
    friend BasicPoly operator*(const T& s, BasicPoly a) { return a *= s; }
    friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
        if (a.c.empty() || b.c.empty()) return BasicPoly();
        std::vector<T> out(a.c.size() + b.c.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i] == T(0)) continue;
            for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] += a.c[i] * b.c[j];
        }
        return BasicPoly(std::move(out));
    }

    // this += (a0 + a1 z) * p, the only product the substitutions need
    void add_linear_times(const T& a0, const T& a1, const BasicPoly& p) {
        if (a0 == T(0) && a1 == T(0)) return;
        std::size_t need = p.c.size() + (a1 == T(0) ? 0 : 1);
        if (c.size() < need) c.resize(need, T(0));
        if (a0 != T(0))
            for (std::size_t k = 0; k < p.c.size(); ++k) c[k] += a0 * p.c[k];
        if (a1 != T(0))
            for (std::size_t k = 0; k < p.c.size(); ++k) c[k + 1] += a1 * p.c[k];
    }

    friend bool operator==(const BasicPoly& a, const BasicPoly& b) {
        std::size_t n = std::max(a.c.size(), b.c.size());
        for (std::size_t k = 0; k < n; ++k)
            if (a.coeff(static_cast<int>(k)) != b.coeff(static_cast<int>(k))) return false;
        return true;
    }
};

using Poly = BasicPoly<double>;
using RatPoly = BasicPoly<Rational>;

Poly to_double(const RatPoly& p);

// drop trailing coefficients below rel_tol * max|coeff|; rel_tol = 0 drops exact zeros only
Poly trimmed(const Poly& p, double rel_tol = 1e-14);

inline cplx eval(const Poly& p, cplx z) {
    cplx acc = 0.0;
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * z + *it;
    return acc;
}
inline double eval(const Poly& p, double x) {
    double acc = 0.0;
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * x + *it;
    return acc;
}
// value and first derivative together
void eval_with_derivative(const Poly& p, cplx z, cplx& value, cplx& deriv);

Rational eval(const RatPoly& p, const Rational& x);

Poly derivative(const Poly& p);

// (a + b z)^n
RatPoly binomial_power(const Rational& a, const Rational& b, int n);
// sum_{k=lo}^{hi} z^k / k!
RatPoly taylor_exp(int hi, int lo = 0);

// largest |coefficient difference|, relative to the larger of the two coefficient maxima
double relative_coeff_distance(const Poly& a, const Poly& b);

}  // namespace rkistab
