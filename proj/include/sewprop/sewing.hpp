#pragma once

#include <complex>
#include <functional>
#include <optional>

#include "sewprop/linalg.hpp"
#include "sewprop/wick.hpp"

namespace sewprop {

/// Grade-n piece of the Casimir element: pairs (m, m') running over a basis
/// of M(n) and the dual basis of M'(n). Dual vectors are written in the
/// dual of the monomial basis.
struct CasimirShell {
    int grade = 0;
    std::vector<std::pair<GradedVector, GradedVector>> pairs;

    static CasimirShell standard(const Module& m, int grade);
    // basis m_a = sum_b a[b][a] e_b, dual m'_a = sum_b inv(a)[a][b] e'_b
    static CasimirShell changed(const Module& m, int grade, const Matrix& a);
    // <m_a, m'_b> = delta_ab
    bool is_dual(const Module& m) const;
};

/// psi(w . m . m') with the W_. arguments already fixed.
using SewingFunctional = std::function<Scalar(const GradedVector& m, const GradedVector& mdual)>;

struct QSeries {
    FracLaurent series{1, "q"};
    int cutoff = 0;  // coefficients known through q^cutoff
};

QSeries sew(const SewingFunctional& psi, const std::vector<CasimirShell>& shells);
QSeries sew(const Module& m, const SewingFunctional& psi, int cutoff);

struct ConvergenceReport {
    std::vector<std::complex<double>> partial_sums;  // through q^0, ..., q^cutoff
    std::vector<double> ratios;                      // |a_{n+1} q0^{n+1}| / |a_n q0^n| for nonzero a_n
    double radius = 0;                               // +inf when the tail vanishes
};

ConvergenceReport converge_diag(const QSeries& s, std::complex<double> q0);

/// Two spheres: C with w at 0, an optional insertion (v, x) and wp at
/// infinity, and P with w_in at 0 and u at 1. C is sewn at 0 (disc
/// |zeta| < 1) to P at infinity (disc |zeta| > 1), so the sewn block is
///   q^n coefficient = <Y(v, x) P_n Y(u, 1) w_in, wp>.
struct SewingSetup {
    ModulePtr module;
    GradedVector w_in;
    GradedVector u;
    GradedVector wp;
    std::optional<std::pair<GradedVector, Scalar>> outer;  // (v, x) on C, |x| >= 1
};

// psi(m . m') = phi(m . wp) * <Y(u, 1) w_in, m'>
SewingFunctional sewing_functional(const SewingSetup& s);

struct CommuteReport {
    bool passed = true;
    double max_discrepancy = 0;
    long window = 0;  // radial expansion window of both sides
    // keyed by q-power; monomials in the insertion points in radial order,
    // then the point 1 and x when present
    std::map<long, MultiLaurent> lhs;
    std::map<long, MultiLaurent> rhs;
    std::vector<std::size_t> radial_order;  // insertion indices, innermost first
};

// Compares the sewing of the propagated block (shell sums of propagation
// expansions) against the propagation of the sewn block (Wick oracle with
// the dilation correction), q-coefficient by q-coefficient through q^N.
// Insertions sit on P at ys with 0 < |y| < 1; L bounds intermediate grades.
CommuteReport sew_propagate_commute_check(const SewingSetup& s, const std::vector<GradedVector>& vs,
                                          const std::vector<Scalar>& ys, int N, int L);

// Drops the exponent of variable `index` by setting that point to 1.
MultiLaurent specialize_to_one(const MultiLaurent& f, std::size_t index);

}  // namespace sewprop
