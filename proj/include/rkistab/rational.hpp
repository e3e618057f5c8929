#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace rkistab {

using Rational = mpq_class;
using RatVec = std::vector<Rational>;
using RatMatrix = std::vector<RatVec>;

// "p/q", "p", or a decimal literal such as "-0.125"
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }
std::vector<double> to_double(const RatVec& v);
std::vector<std::vector<double>> to_double(const RatMatrix& m);

Rational factorial(int n);
Rational pow(const Rational& base, int e);

}  // namespace rkistab
