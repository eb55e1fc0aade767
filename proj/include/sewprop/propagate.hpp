#pragma once

#include <complex>
#include <vector>

#include "sewprop/wick.hpp"

namespace sewprop {

/// Truncated iterated sum <Y(v_{n-1}, z_{n-1}) ... Y(v_0, z_0) w, w'> over
/// intermediate states of grade <= cutoff, grouped by the largest
/// intermediate grade ("shell").
template <class T>
struct Propagation {
    std::vector<T> shells;        // shells[m]: paths whose largest intermediate grade is m
    std::vector<T> partial_sums;  // partial_sums[m] = shells[0] + ... + shells[m]
    T value{};
    // extrapolated size of the omitted shells; a heuristic, never a bound
    double tail_estimate = 0.0;
};

// Requires 0 < |z_0| < |z_1| < ... < |z_{n-1}|. The module's weight cutoff
// must be at least `cutoff`.
Propagation<Scalar> propagate(const Module& m, const std::vector<GradedVector>& vs, const std::vector<Scalar>& zs,
                              const GradedVector& w, const GradedVector& wp, int cutoff);
Propagation<std::complex<double>> propagate(const Module& m, const std::vector<GradedVector>& vs,
                                            const std::vector<std::complex<double>>& zs, const GradedVector& w,
                                            const GradedVector& wp, int cutoff);

// The same sum kept symbolic in the z_i, restricted to monomials with
// e_0 + ... + e_i <= d_max for i < n-1. Complete on that window.
MultiLaurent propagate_expand(const Module& m, const std::vector<GradedVector>& vs, const GradedVector& w,
                              const GradedVector& wp, long d_max);

double tail_estimate(const std::vector<double>& shell_magnitudes);

}  // namespace sewprop
