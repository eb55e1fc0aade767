#pragma once

#include "sewprop/voa.hpp"

namespace sewprop {

/// V^{(x)k} over the adjoint module V of a base algebra, with the cyclic
/// permutation g(v_1, ..., v_k) = (v_k, v_1, ..., v_{k-1}).
class TensorPower {
public:
    TensorPower(ModulePtr base, int k);

    const ModulePtr& base() const { return base_; }
    int k() const { return k_; }

    TensorVector tensor(const std::vector<GradedVector>& factors) const;
    TensorVector vacuum() const;
    TensorVector conformal_vector() const;
    // v placed in `slot` (0-based), vacuum elsewhere
    TensorVector in_slot(const GradedVector& v, int slot) const;

    TensorVector g(const TensorVector& v) const;
    TensorVector g_power(const TensorVector& v, int power) const;

    // Y(u)_n v with Y(u_1 x ... x u_k, z) = Y(u_1, z) x ... x Y(u_k, z)
    TensorVector mode(const TensorVector& u, long n, const TensorVector& v) const;
    TensorVector L0(const TensorVector& v) const;

    std::vector<TensorKey> basis(int grade) const;

private:
    ModulePtr base_;
    int k_;
    void check_key(const TensorKey& key) const;
};

}  // namespace sewprop
