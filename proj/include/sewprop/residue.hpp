#pragma once

#include <optional>
#include <vector>

#include "sewprop/frac_laurent.hpp"

namespace sewprop {

/// A marked point of P^1: a finite value x (local coordinate zeta - x) or
/// infinity (local coordinate 1/zeta).
struct MarkedPoint {
    std::optional<Scalar> x;
    static MarkedPoint finite(const Scalar& x) { return {x}; }
    static MarkedPoint infinity() { return {std::nullopt}; }
    bool at_infinity() const { return !x; }
};

/// Meromorphic function on P^1 with poles only at marked points:
/// constant + sum_{j,m} b_{j,m} (zeta - x_j)^{-m} + sum_{d>=1} p_d zeta^d.
struct GlobalFunction {
    std::vector<MarkedPoint> points;
    Scalar constant;
    std::map<std::pair<int, int>, Scalar> principal;  // (point index, pole order) -> coefficient
    std::vector<Scalar> polynomial;                  // polynomial[d-1] multiplies zeta^d

    // Expansion in the local coordinate of points[j], known below `order`.
    FracLaurent expand_at(std::size_t j, long order) const;
    Scalar evaluate(const Scalar& zeta) const;
    std::string to_string() const;
};

struct ResidueReport {
    bool passed = true;
    std::size_t forms_checked = 0;
    // sum_j Res_j <s_j, sigma> for every form and component, in a fixed order
    std::vector<Scalar> pairings;
};

// Local data s_j (one series per marked point, in that point's local
// coordinate) glue to a global function iff every global 1-form with poles
// of order <= dual_pole_bound at the marked points pairs to zero. Each
// series must be known through exponent dual_pole_bound - 1.
ResidueReport residue_criterion(const std::vector<MarkedPoint>& points, const std::vector<FracLaurent>& series,
                                int dual_pole_bound);
// E = C^r: series[j][c] is component c at point j; components decouple.
ResidueReport residue_criterion(const std::vector<MarkedPoint>& points,
                                const std::vector<std::vector<FracLaurent>>& series, int dual_pole_bound);

// The unique function with poles of order <= pole_bound at the marked
// points matching every series on its known range; nullopt when none
// exists. Throws if the data do not determine it.
std::optional<GlobalFunction> reconstruct_global(const std::vector<MarkedPoint>& points,
                                                 const std::vector<FracLaurent>& series, int pole_bound);

}  // namespace sewprop
