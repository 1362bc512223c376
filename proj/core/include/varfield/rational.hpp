#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace varfield {

// Exact rational coefficients; no floating point enters symbolic data.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

inline std::string to_string(const Rational& r) {
    return r.str();
}

// Nearest dyadic rational with 2^40 denominator; used to turn runtime
// step sizes (epsilon) into exact coefficients.
Rational dyadic_from_double(double x);

} // namespace varfield
