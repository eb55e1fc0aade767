#pragma once

#include <complex>
#include <string>
#include <variant>

#include "sewprop/cyclotomic.hpp"
#include "sewprop/rational.hpp"

namespace sewprop {

/// Scalar tower used for every coefficient in the library.
///
/// Exact values are rationals or elements of Q(omega_k). Rational and
/// cyclotomic operands combine by promoting the rational one. Complex
/// floats only arise through an explicit to_complex() and never mix with
/// exact values in arithmetic.
class Scalar {
public:
    enum class Kind { rational, cyclotomic, complex };

    Scalar() : value_(Rational(0)) {}
    Scalar(const Rational& q) : value_(q) {}
    Scalar(long n) : value_(Rational(n)) {}
    Scalar(int n) : value_(Rational(n)) {}
    Scalar(const Cyclotomic& c) : value_(c) {}
    explicit Scalar(std::complex<double> z) : value_(z) {}

    static Scalar omega(int k, long exponent = 1) { return Scalar(Cyclotomic::root_power(k, exponent)); }

    Kind kind() const { return static_cast<Kind>(value_.index()); }
    bool is_rational() const { return kind() == Kind::rational; }
    bool is_exact() const { return kind() != Kind::complex; }
    bool is_zero() const;
    bool is_one() const;

    const Rational& rational() const;      // throws unless rational-tagged
    Rational as_rational() const;          // accepts rational-valued cyclotomics
    Cyclotomic as_cyclotomic(int k) const; // promotes rationals and embeds
    std::complex<double> to_complex() const;

    // Order of the cyclotomic field the value lives in (1 for rationals).
    int field_order() const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    Scalar operator-() const;
    Scalar inverse() const;

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    // Drops a cyclotomic tag when the value is rational.
    Scalar simplified() const;

    std::string to_string() const;

private:
    std::variant<Rational, Cyclotomic, std::complex<double>> value_;
};

Scalar pow(const Scalar& base, long exponent);

}  // namespace sewprop
