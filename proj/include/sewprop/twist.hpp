#pragma once

#include <complex>
#include <map>
#include <shared_mutex>

#include "sewprop/coord_change.hpp"
#include "sewprop/tensor.hpp"
#include "sewprop/wick.hpp"

namespace sewprop {

// generator: Y(U(delta) v, omega^i z^{1/k}) for vectors with one
// non-vacuum slot i. oracle: k-point Wick correlator at the roots of z with
// the varrho(zeta|zeta^k) correction at every point (Heisenberg only).
enum class TwistPath { automatic, generator, oracle };

/// The g-twisted V^(x)k-module on a V-module W, g the cyclic permutation.
/// Mode indices n live in (1/k)Z; series are written in s = z^{1/k}, so the
/// mode Y^g(v)_n multiplies s^{-k(n+1)}.
class TwistedModule {
public:
    TwistedModule(ModulePtr w, int k, int order = 12);

    int k() const { return k_; }
    const Module& module() const { return *w_; }
    const ModulePtr& algebra() const { return v_; }
    const TensorPower& tensor() const { return tensor_; }

    // L~0^g = L~0 / k on a homogeneous vector
    Rational grade(const GradedVector& w) const;
    GradedVector L0g(const GradedVector& w) const;

    // U(varrho) v for the coordinate change used at slot i by `path`;
    // the generator path at slot 0 is U(delta_{k,z}) v.
    ParamVector corrected(const GradedVector& v, int slot, TwistPath path) const;

    // sum_n <Y^g(v)_n w, w'> s^{-k(n+1)}
    FracLaurent series(const TensorVector& v, const GradedVector& w, const GradedVector& wp,
                       TwistPath path = TwistPath::automatic) const;
    Scalar mode(const TensorVector& v, const Rational& n, const GradedVector& w, const GradedVector& wp,
                TwistPath path = TwistPath::automatic) const;
    // Y^g(v)_n w
    GradedVector apply(const TensorVector& v, const Rational& n, const GradedVector& w,
                       TwistPath path = TwistPath::automatic) const;

    // grade of Y^g(v)_n w in L~0 units of W, or nullopt when not a
    // nonnegative integer (the mode vanishes)
    std::optional<int> target_grade(int weight_v, const Rational& n, int grade_w) const;

    // the correlator of several twisted insertions: group j carries the
    // tensor vector vs[j] at the k roots of roots[j]^k, root omega^i roots[j]
    // for slot i
    std::complex<double> oracle_value(const std::vector<TensorVector>& vs,
                                      const std::vector<std::complex<double>>& roots, const GradedVector& w,
                                      const GradedVector& wp) const;

private:
    ModulePtr w_;
    ModulePtr v_;
    int k_;
    int order_;
    TensorPower tensor_;
    std::vector<CoordChange> generator_changes_;
    std::vector<CoordChange> oracle_changes_;

    using SeriesKey = std::tuple<TensorKey, Partition, Partition, int>;
    mutable std::map<SeriesKey, FracLaurent> cache_;
    mutable std::shared_mutex cache_mutex_;

    TwistPath resolve(const TensorKey& key, TwistPath path) const;
    FracLaurent key_series(const TensorKey& key, const Partition& w, const Partition& wp, TwistPath path) const;
    FracLaurent generator_series(const TensorKey& key, const Partition& w, const Partition& wp) const;
    FracLaurent oracle_series(const TensorKey& key, const Partition& w, const Partition& wp) const;
    GradedVector generator_apply(const TensorKey& key, const Rational& n, const GradedVector& w) const;
};

// Decomposes u into g-eigenvectors: pairs (j, u_j) with g u_j = exp(2 pi i j / k) u_j.
std::vector<std::pair<int, TensorVector>> eigencomponents(const TensorPower& t, const TensorVector& u);

struct AxiomReport {
    bool passed = true;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::size_t nonzero = 0;  // checks whose sides were not both zero
    std::string first_failure;
};

// [L~0^g, Y^g(u)_n] w = Y^g(L0 u)_n w - (n+1) Y^g(u)_n w for n = j/k, |n| <= n_max
AxiomReport check_grading(const TwistedModule& t, const std::vector<TensorVector>& us,
                          const std::vector<GradedVector>& ws, const Rational& n_max,
                          TwistPath path = TwistPath::automatic);
// <Y^g(gu)_n w, w'> = exp(2 pi i (n+1)) <Y^g(u)_n w, w'> for every mode
AxiomReport check_equivariance(const TwistedModule& t, const std::vector<TensorVector>& us,
                               const std::vector<GradedVector>& ws, const std::vector<GradedVector>& wps,
                               TwistPath path = TwistPath::automatic);
// the algebraic twisted Jacobi identity for |m|, |n| <= range and
// h in (1/k)Z with |h| <= range, applied to w
AxiomReport check_jacobi(const TwistedModule& t, const TensorVector& u, const TensorVector& v, const GradedVector& w,
                         int range, TwistPath path = TwistPath::automatic);
// series along both construction paths agree for v in every slot
AxiomReport check_paths(const TwistedModule& t, const std::vector<GradedVector>& vs,
                        const std::vector<GradedVector>& ws, const std::vector<GradedVector>& wps);

struct FactorizationReport {
    std::vector<std::complex<double>> partial_sums;  // by intermediate grade of W
    std::complex<double> oracle;
    double relative_error = 0;
};

// sum over intermediate grades <= shell_cutoff of
// <Y^g(v, xi) P Y^g(u, z) w, w'> against the 2k-point oracle; 0 < |z| < |xi|
FactorizationReport factorization_check(const TwistedModule& t, const TensorVector& u, const TensorVector& v,
                                        const GradedVector& w, const GradedVector& wp, std::complex<double> z,
                                        std::complex<double> xi, int shell_cutoff);

}  // namespace sewprop
