#pragma once

#include <complex>
#include <string>
#include <vector>

#include "sewprop/rational.hpp"

namespace sewprop {

/// Element of the cyclotomic field Q(omega_k), omega_k = exp(-2 pi i / k),
/// stored densely over the power basis 1, omega_k, ..., omega_k^(phi(k)-1).
class Cyclotomic {
public:
    explicit Cyclotomic(int order = 1);
    Cyclotomic(int order, const Rational& value);

    static Cyclotomic root_power(int order, long exponent);  // omega_k^exponent

    int order() const { return order_; }
    int degree() const { return static_cast<int>(coeffs_.size()); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool is_rational() const;
    Rational rational_part() const { return coeffs_[0]; }

    Cyclotomic& operator+=(const Cyclotomic& other);
    Cyclotomic& operator-=(const Cyclotomic& other);
    Cyclotomic& operator*=(const Cyclotomic& other);
    Cyclotomic& operator*=(const Rational& r);
    Cyclotomic operator-() const;
    Cyclotomic inverse() const;

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);

    // Re-express in Q(omega_m) for a multiple m of the current order.
    Cyclotomic embed(int multiple) const;

    std::complex<double> to_complex() const;
    std::string to_string() const;

private:
    int order_;
    std::vector<Rational> coeffs_;

    void check_same_field(const Cyclotomic& other) const;
};

// Integer coefficients of the k-th cyclotomic polynomial, lowest degree first.
const std::vector<long>& cyclotomic_polynomial(int k);
int euler_phi(int k);

}  // namespace sewprop
