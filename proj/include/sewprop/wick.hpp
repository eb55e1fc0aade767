#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "sewprop/frac_laurent.hpp"
#include "sewprop/voa.hpp"

namespace sewprop {

// Laurent polynomial in several variables: exponent vector -> coefficient.
using MultiLaurent = std::map<std::vector<long>, Scalar>;

/// Exact rational function of points z_0, ..., z_{n-1} written as
///   sum coeff * prod_i z_i^{e_i} * prod_{a>b} (z_a - z_b)^{-f_ab}.
class Correlator {
public:
    using Key = std::pair<std::vector<int>, std::vector<int>>;  // (e_i, f_ab flattened)

    explicit Correlator(int points = 0) : n_(points) {}

    int points() const { return n_; }
    const std::map<Key, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    static std::size_t pair_index(int a, int b) { return static_cast<std::size_t>(a) * (a - 1) / 2 + b; }

    void add(const Key& key, const Scalar& c);
    Correlator& operator+=(const Correlator& o);
    Correlator& operator*=(const Scalar& c);

    Scalar evaluate(const std::vector<Scalar>& zs) const;
    std::complex<double> evaluate(const std::vector<std::complex<double>>& zs) const;
    // z_i = base_i * var; every factor is then a monomial in var
    FracLaurent evaluate_scaled(const std::vector<Scalar>& base, const std::string& var) const;
    // Expansion in |z_0| < |z_1| < ... < |z_{n-1}|, keeping the monomials
    // whose partial exponent sums e_0 + ... + e_i stay <= d_max for i < n-1.
    MultiLaurent expand_radial(long d_max) const;

private:
    int n_;
    std::map<Key, Scalar> terms_;
};

/// <Y(v_{n-1}, z_{n-1}) ... Y(v_0, z_0) w, w'> for the rank-one Heisenberg
/// algebra acting on the Fock module `fock`, by Wick contraction of the
/// oscillator parts. w' is read in the dual of the monomial basis.
Correlator heisenberg_correlator(const Module& fock, const std::vector<GradedVector>& vs, const GradedVector& w,
                                 const GradedVector& wp);

}  // namespace sewprop
