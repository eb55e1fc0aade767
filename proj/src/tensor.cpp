#include "sewprop/tensor.hpp"

#include <functional>

namespace sewprop {

TensorPower::TensorPower(ModulePtr base, int k) : base_(std::move(base)), k_(k)
{
    if (k_ < 1) throw MathError("tensor power needs k >= 1");
    if (!base_->is_adjoint()) throw MathError("tensor power is built on the adjoint module");
}

void TensorPower::check_key(const TensorKey& key) const
{
    if (static_cast<int>(key.size()) != k_)
        throw MathError("tensor monomial has " + std::to_string(key.size()) + " factors, expected " +
                        std::to_string(k_));
}

TensorVector TensorPower::tensor(const std::vector<GradedVector>& factors) const
{
    if (static_cast<int>(factors.size()) != k_)
        throw MathError("tensor product of " + std::to_string(factors.size()) + " factors, expected " +
                        std::to_string(k_));
    TensorVector out(TensorKey{}, Scalar(1));
    for (const auto& f : factors) {
        TensorVector next;
        for (const auto& [key, c] : out) {
            for (const auto& [mono, d] : f) {
                TensorKey longer = key;
                longer.push_back(mono);
                next.add(longer, c * d);
            }
        }
        out = std::move(next);
    }
    return out;
}

TensorVector TensorPower::vacuum() const { return TensorVector(TensorKey(k_, Partition{})); }

TensorVector TensorPower::conformal_vector() const
{
    TensorVector out;
    for (int i = 0; i < k_; ++i) out += in_slot(base_->conformal_vector(), i);
    return out;
}

TensorVector TensorPower::in_slot(const GradedVector& v, int slot) const
{
    std::vector<GradedVector> factors(k_, base_->vacuum());
    factors.at(slot) = v;
    return tensor(factors);
}

TensorVector TensorPower::g(const TensorVector& v) const
{
    TensorVector out;
    for (const auto& [key, c] : v) {
        check_key(key);
        TensorKey shifted(k_);
        for (int j = 0; j < k_; ++j) shifted[(j + 1) % k_] = key[j];
        out.add(shifted, c);
    }
    return out;
}

TensorVector TensorPower::g_power(const TensorVector& v, int power) const
{
    power %= k_;
    if (power < 0) power += k_;
    TensorVector out = v;
    for (int i = 0; i < power; ++i) out = g(out);
    return out;
}

TensorVector TensorPower::mode(const TensorVector& u, long n, const TensorVector& v) const
{
    TensorVector out;
    for (const auto& [uk, uc] : u) {
        check_key(uk);
        for (const auto& [vk, vc] : v) {
            check_key(vk);
            // slot modes n_i with sum n_i = n + 1 - k; slot i vanishes unless n_i <= top_i
            std::vector<long> top(k_);
            long top_sum = 0;
            for (int i = 0; i < k_; ++i) {
                top[i] = uk[i].empty() ? -1 : weight(uk[i]) + weight(vk[i]) - 1;
                top_sum += top[i];
            }
            const long total = n + 1 - k_;
            if (total > top_sum) continue;
            std::vector<GradedVector> parts(k_);
            std::function<void(int, long, long, const TensorVector&)> rec =
                [&](int i, long remaining, long rest_top, const TensorVector& acc) {
                    if (i == k_) {
                        if (remaining == 0) out.add_scaled(acc, uc * vc);
                        return;
                    }
                    const long others = rest_top - top[i];
                    const long lo = uk[i].empty() ? -1 : remaining - others;
                    const long hi = uk[i].empty() ? -1 : top[i];
                    for (long ni = lo; ni <= hi; ++ni) {
                        if (remaining - ni > others) continue;
                        GradedVector slot = base_->mode(uk[i], ni, vk[i]);
                        if (slot.is_zero()) continue;
                        TensorVector next;
                        for (const auto& [key, c] : acc) {
                            for (const auto& [mono, d] : slot) {
                                TensorKey longer = key;
                                longer.push_back(mono);
                                next.add(longer, c * d);
                            }
                        }
                        rec(i + 1, remaining - ni, others, next);
                    }
                };
            rec(0, total, top_sum, TensorVector(TensorKey{}, Scalar(1)));
        }
    }
    return out;
}

TensorVector TensorPower::L0(const TensorVector& v) const { return mode(conformal_vector(), 1, v); }

std::vector<TensorKey> TensorPower::basis(int grade) const
{
    std::vector<TensorKey> out;
    TensorKey current;
    std::function<void(int, int)> rec = [&](int slot, int remaining) {
        if (slot == k_ - 1) {
            for (const auto& p : base_->basis(remaining)) {
                current.push_back(p);
                out.push_back(current);
                current.pop_back();
            }
            return;
        }
        for (int g = 0; g <= remaining; ++g) {
            for (const auto& p : base_->basis(g)) {
                current.push_back(p);
                rec(slot + 1, remaining - g);
                current.pop_back();
            }
        }
    };
    rec(0, grade);
    return out;
}

}  // namespace sewprop
