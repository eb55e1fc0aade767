#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

#include "sewprop/linear_combination.hpp"

namespace sewprop {

/// Raised when a result would live above the weight cutoff. Recoverable:
/// callers raise the cutoff and retry.
class CutoffOverflow : public std::runtime_error {
public:
    CutoffOverflow(int weight, int cutoff);
    int weight;
    int cutoff;
};

class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class AlgebraKind { heisenberg, virasoro };

/// A module over the rank-one Heisenberg VOA (Fock space with a_0 acting by
/// the momentum) or the adjoint module of the universal Virasoro VOA.
///
/// Vectors of the module and of the underlying VOA share the monomial
/// labels; the grade of a monomial is its L~0 eigenvalue (sum of parts).
class Module {
public:
    static std::shared_ptr<const Module> heisenberg(int cutoff, const Rational& momentum = 0);
    static std::shared_ptr<const Module> virasoro(const Rational& central_charge, int cutoff);

    AlgebraKind kind() const { return kind_; }
    int cutoff() const { return cutoff_; }
    const Rational& momentum() const { return momentum_; }
    const Rational& central_charge() const { return central_charge_; }
    bool is_adjoint() const { return kind_ == AlgebraKind::virasoro || momentum_ == 0; }
    int min_part() const { return kind_ == AlgebraKind::heisenberg ? 1 : 2; }
    int generator_weight() const { return kind_ == AlgebraKind::heisenberg ? 1 : 2; }
    // L0 = L~0 + offset on the module
    Rational grading_offset() const;
    std::string describe() const;

    std::vector<Partition> basis(int grade) const;
    GradedVector vacuum() const { return GradedVector(Partition{}); }
    GradedVector conformal_vector() const;
    void validate(const GradedVector& v) const;

    // a_p (Heisenberg) or L_p (Virasoro) on module vectors; no cutoff check.
    GradedVector generator_mode(long p, const Partition& w) const;
    GradedVector generator_mode(long p, const GradedVector& w) const;

    // Y(u)_n w for u in the VOA and w in the module.
    GradedVector mode(const Partition& u, long n, const Partition& w) const;
    GradedVector mode(const GradedVector& u, long n, const GradedVector& w) const;

    // L_n = Y(c)_{n+1} on the module, from the oscillator / PBW formulas.
    GradedVector virasoro(long n, const GradedVector& w) const;
    GradedVector L0_tilde(const GradedVector& w) const;

    // <w, w'> with W'(n) carrying the dual basis of the monomial basis.
    Scalar pairing(const GradedVector& w, const GradedVector& wp) const;

private:
    Module(AlgebraKind kind, int cutoff, Rational momentum, Rational central_charge);

    AlgebraKind kind_;
    int cutoff_;
    Rational momentum_;
    Rational central_charge_;

    using ModeKey = std::tuple<Partition, long, Partition>;
    mutable std::map<ModeKey, GradedVector> mode_cache_;
    mutable std::map<std::pair<long, Partition>, GradedVector> pbw_cache_;
    mutable std::shared_mutex cache_mutex_;

    GradedVector raw_mode(const Partition& u, long n, const Partition& w) const;
    GradedVector gen(long p, const GradedVector& w) const;  // generator field mode g_(p)
    GradedVector virasoro_on_monomial(long p, const Partition& w) const;
    GradedVector sugawara(long n, const Partition& w) const;
    void check_cutoff(const GradedVector& v) const;
};

using ModulePtr = std::shared_ptr<const Module>;

}  // namespace sewprop
