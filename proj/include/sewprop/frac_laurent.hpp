#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>

#include "sewprop/scalar.hpp"

namespace sewprop {

/// Laurent series with exponents in (1/k)Z, stored sparsely by integer
/// numerator over the lattice denominator k.
///
/// A series may carry an upper truncation order (coefficients at exponents
/// >= order are unknown) or a lower one (coefficients strictly below the
/// order are unknown, as for expansions at infinity). Reading a coefficient
/// in an unknown range throws instead of returning zero.
class FracLaurent {
public:
    explicit FracLaurent(int denominator = 1, std::string var = "z");

    static FracLaurent constant(const Scalar& c, std::string var = "z");
    // c * var^exponent on the lattice of the exponent's denominator
    static FracLaurent monomial(const Scalar& c, const Rational& exponent, std::string var = "z");
    static FracLaurent monomial(const Scalar& c, long exponent, std::string var = "z");

    int denominator() const { return k_; }
    const std::string& var() const { return var_; }
    const std::map<long, Scalar>& terms() const { return terms_; }

    std::optional<Rational> order() const;        // unknown at exponents >= order
    std::optional<Rational> lower_order() const;  // unknown at exponents < lower_order
    bool is_exact() const { return !hi_ && !lo_; }

    FracLaurent& truncate(const Rational& order);  // drop terms >= order and tag
    FracLaurent& bound_below(const Rational& order);

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    std::optional<Rational> valuation() const;  // lowest stored exponent
    std::optional<Rational> top() const;        // highest stored exponent
    bool is_monomial() const { return terms_.size() == 1; }

    Scalar coeff(const Rational& exponent) const;
    void add_term(const Rational& exponent, const Scalar& c);

    // Same series on the finer lattice (1/multiple)Z.
    FracLaurent on_lattice(int multiple) const;
    FracLaurent renamed(std::string var) const;

    FracLaurent& operator+=(const FracLaurent& o);
    FracLaurent& operator-=(const FracLaurent& o);
    FracLaurent& operator*=(const FracLaurent& o);
    FracLaurent& operator*=(const Scalar& c);
    FracLaurent operator-() const;

    friend FracLaurent operator+(FracLaurent a, const FracLaurent& b) { return a += b; }
    friend FracLaurent operator-(FracLaurent a, const FracLaurent& b) { return a -= b; }
    friend FracLaurent operator*(FracLaurent a, const FracLaurent& b) { return a *= b; }
    friend FracLaurent operator*(FracLaurent a, const Scalar& c) { return a *= c; }
    friend FracLaurent operator*(const Scalar& c, FracLaurent a) { return a *= c; }
    friend bool operator==(const FracLaurent& a, const FracLaurent& b);

    Scalar residue() const;  // coefficient of var^-1

    // this(g) where this is a power series with integer exponents and g has
    // positive valuation; result known below `order`.
    FracLaurent compose(const FracLaurent& g, const Rational& order) const;
    // 1/this, known below `order`
    FracLaurent inverse(const Rational& order) const;
    FracLaurent pow(long n) const;

    // Evaluate with var^(1/k) replaced by root, i.e. var = root^k.
    std::complex<double> eval_root(std::complex<double> root) const;
    Scalar eval_root_exact(const Scalar& root) const;

    std::string to_string() const;

private:
    int k_;
    std::string var_;
    std::map<long, Scalar> terms_;
    std::optional<long> hi_;
    std::optional<long> lo_;

    void check_compatible(const FracLaurent& o) const;
    void drop_unknown();
};

}  // namespace sewprop
