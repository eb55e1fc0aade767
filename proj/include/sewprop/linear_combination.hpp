#pragma once

#include <map>
#include <vector>

#include "sewprop/scalar.hpp"

namespace sewprop {

// Basis monomial a_{-n1} ... a_{-nm} 1 (or L_{-n1} ... L_{-nm} 1), parts
// nonincreasing. Its weight is the sum of the parts.
using Partition = std::vector<int>;

int weight(const Partition& p);
bool is_partition(const Partition& p, int min_part);
// All partitions of n with parts >= min_part, in lexicographically
// decreasing order; max_length < 0 means unbounded.
std::vector<Partition> partitions(int n, int min_part = 1, int max_length = -1);
Partition insert_part(const Partition& p, int part);
std::string to_string(const Partition& p);

/// Finite sparse combination of basis keys; zero coefficients are never stored.
template <class Key, class Coeff = Scalar>
class LinearCombination {
public:
    using map_type = std::map<Key, Coeff>;

    LinearCombination() = default;
    LinearCombination(const Key& key, Coeff c = Coeff(1)) { add(key, c); }

    const map_type& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

    Coeff coeff(const Key& key) const
    {
        auto it = terms_.find(key);
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    void add(const Key& key, const Coeff& c)
    {
        if (c == Coeff(0)) return;
        auto [it, inserted] = terms_.emplace(key, c);
        if (!inserted) {
            it->second += c;
            if (it->second == Coeff(0)) terms_.erase(it);
        }
    }

    void add_scaled(const LinearCombination& o, const Coeff& c)
    {
        if (c == Coeff(0)) return;
        for (const auto& [k, v] : o.terms_) add(k, v * c);
    }

    LinearCombination& operator+=(const LinearCombination& o)
    {
        for (const auto& [k, v] : o.terms_) add(k, v);
        return *this;
    }
    LinearCombination& operator-=(const LinearCombination& o)
    {
        for (const auto& [k, v] : o.terms_) add(k, -v);
        return *this;
    }
    LinearCombination& operator*=(const Coeff& c)
    {
        if (c == Coeff(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, v] : terms_) v *= c;
        return *this;
    }

    friend LinearCombination operator+(LinearCombination a, const LinearCombination& b) { return a += b; }
    friend LinearCombination operator-(LinearCombination a, const LinearCombination& b) { return a -= b; }
    friend LinearCombination operator*(LinearCombination a, const Coeff& c) { return a *= c; }
    friend LinearCombination operator*(const Coeff& c, LinearCombination a) { return a *= c; }
    friend bool operator==(const LinearCombination& a, const LinearCombination& b)
    {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto it = b.terms_.begin();
        for (const auto& [k, v] : a.terms_) {
            if (!(it->first == k) || !(it->second == v)) return false;
            ++it;
        }
        return true;
    }

private:
    map_type terms_;
};

using GradedVector = LinearCombination<Partition>;
using TensorKey = std::vector<Partition>;
using TensorVector = LinearCombination<TensorKey>;

int max_weight(const GradedVector& v);  // -1 for the zero vector
bool is_homogeneous(const GradedVector& v);
// Weight of a homogeneous nonzero vector; throws otherwise.
int homogeneous_weight(const GradedVector& v);
std::map<int, GradedVector> split_by_weight(const GradedVector& v);
GradedVector project(const GradedVector& v, int grade);

int weight(const TensorKey& key);
int max_weight(const TensorVector& v);
std::map<int, TensorVector> split_by_weight(const TensorVector& v);

std::string to_string(const GradedVector& v);
std::string to_string(const TensorVector& v);

}  // namespace sewprop
