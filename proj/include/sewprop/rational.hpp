#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace sewprop {

// Exact rational backed by GMP; mpq_class keeps values canonical as long as
// every construction from a numerator/denominator pair goes through
// make_rational().
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

bool is_integer(const Rational& q);
long to_long(const Rational& q);  // throws unless q is an integer that fits

Rational pow(const Rational& base, long exponent);
// binom(top, k) for rational top and k >= 0; zero for k < 0.
Rational binomial(const Rational& top, long k);
Rational factorial(long n);

double to_double(const Rational& q);

class MathError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sewprop
