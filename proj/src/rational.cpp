#include "rkistab/rational.hpp"

#include <stdexcept>

namespace rkistab {

Rational parse_rational(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (ch != ' ' && ch != '+') t.push_back(ch);
    if (t.empty()) throw std::invalid_argument("empty rational literal");

    auto slash = t.find('/');
    if (slash != std::string::npos) {
        Rational q;
        if (q.set_str(t, 10) != 0) throw std::invalid_argument("bad rational literal '" + text + "'");
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        q.canonicalize();
        return q;
    }

    // decimal with optional exponent, kept exact
    bool neg = false;
    std::size_t i = 0;
    if (t[0] == '-') {
        neg = true;
        i = 1;
    }
    std::string digits;
    long exp10 = 0;
    bool seen_dot = false;
    for (; i < t.size(); ++i) {
        char ch = t[i];
        if (ch >= '0' && ch <= '9') {
            digits.push_back(ch);
            if (seen_dot) --exp10;
        } else if (ch == '.' && !seen_dot) {
            seen_dot = true;
        } else if (ch == 'e' || ch == 'E') {
            exp10 += std::stol(t.substr(i + 1));
            break;
        } else {
            throw std::invalid_argument("bad numeric literal '" + text + "'");
        }
    }
    if (digits.empty()) throw std::invalid_argument("bad numeric literal '" + text + "'");
    mpz_class num(digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    Rational q = exp10 < 0 ? Rational(num, scale) : Rational(num * scale);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

std::vector<double> to_double(const RatVec& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.get_d());
    return out;
}

std::vector<std::vector<double>> to_double(const RatMatrix& m) {
    std::vector<std::vector<double>> out;
    out.reserve(m.size());
    for (const auto& row : m) out.push_back(to_double(row));
    return out;
}

Rational factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(f);
}

Rational pow(const Rational& base, int e) {
    if (e < 0) return Rational(1) / pow(base, -e);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(e));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace rkistab
