#pragma once

#include <map>
#include <string>
#include <vector>

#include "sewprop/frac_laurent.hpp"
#include "sewprop/voa.hpp"

namespace sewprop {

/// sum_e var^e v_e with finitely many exponents e; the output of U(rho)
/// when the coefficients of rho depend on a parameter.
class ParamVector {
public:
    explicit ParamVector(std::string var = "s") : var_(std::move(var)) {}
    ParamVector(const GradedVector& v, std::string var);

    const std::string& var() const { return var_; }
    const std::map<Rational, GradedVector>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const Rational& exponent, const GradedVector& v, const Scalar& c = Scalar(1));
    void add_scaled(const ParamVector& o, const FracLaurent& c);
    GradedVector at(const Rational& exponent) const;
    // the value when only exponent 0 occurs; throws otherwise
    GradedVector constant() const;

    friend bool operator==(const ParamVector& a, const ParamVector& b) { return a.terms_ == b.terms_; }

private:
    std::string var_;
    std::map<Rational, GradedVector> terms_;
};

// Taylor data a_1 z + a_2 z^2 + ... + a_M z^M, stored as {a_1, ..., a_M}.
using Taylor = std::vector<FracLaurent>;

Taylor compose_taylor(const Taylor& outer, const Taylor& inner, int order);
// g with f(g(z)) = z to the common order; a_1 must be invertible
Taylor reverse_taylor(const Taylor& f);
Taylor scalar_taylor(const std::vector<Scalar>& coeffs, const std::string& var = "s");

/// rho(z) = c0 * exp(sum_{n>0} c_n z^{n+1} d/dz) z, known through z^M with
/// M = order(); the c_n live in the Laurent polynomial ring of one formal
/// parameter (a constant series for plain numbers).
class CoordChange {
public:
    CoordChange(FracLaurent c0, std::vector<FracLaurent> cs, bool exact_tail = false);

    static CoordChange identity(int order, const std::string& var = "s");
    // z -> c0 z, exact to every order
    static CoordChange dilation(const FracLaurent& c0, int order);
    static CoordChange solve_coefficients(const Taylor& taylor);
    static CoordChange solve_coefficients(const std::vector<Scalar>& taylor, const std::string& var = "s");

    const FracLaurent& c0() const { return c0_; }
    const std::vector<FracLaurent>& cs() const { return cs_; }  // c_1, ..., c_{M-1}
    FracLaurent c(int n) const;
    int order() const { return static_cast<int>(cs_.size()) + 1; }
    const std::string& var() const { return c0_.var(); }
    // c_n = 0 for all n >= order() is known, not assumed
    bool exact_tail() const { return exact_tail_; }

    Taylor taylor_of() const;
    CoordChange compose(const CoordChange& inner, int order) const;  // this o inner
    CoordChange inverse() const;

    // U(rho) w = c0^{L~0} exp(sum c_n L_n) w; c0 must be a monomial
    ParamVector apply_U(const Module& m, const GradedVector& w) const;
    // apply_U for parameter-free coefficients
    GradedVector apply_U_scalar(const Module& m, const GradedVector& w) const;

    friend bool operator==(const CoordChange& a, const CoordChange& b);

    std::string to_string() const;

private:
    FracLaurent c0_;
    std::vector<FracLaurent> cs_;
    bool exact_tail_;
};

// t -> (z + t)^{1/k} - z^{1/k} with coefficients in s = z^{1/k}
Taylor delta_kz_taylor(int k, int order, const std::string& var = "s");
CoordChange delta_kz(int k, int order, const std::string& var = "s");

// varrho(eta|mu) = eta o mu^{-1} for two local coordinates at one point,
// both given as Taylor data in a common variable
CoordChange transition(const Taylor& eta, const Taylor& mu);

}  // namespace sewprop
