#include "sewprop/linear_combination.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace sewprop {

int weight(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

bool is_partition(const Partition& p, int min_part)
{
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < min_part) return false;
        if (i > 0 && p[i] > p[i - 1]) return false;
    }
    return true;
}

std::vector<Partition> partitions(int n, int min_part, int max_length)
{
    std::vector<Partition> out;
    Partition current;
    std::function<void(int, int)> rec = [&](int remaining, int largest) {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        if (max_length >= 0 && static_cast<int>(current.size()) >= max_length) return;
        for (int part = std::min(remaining, largest); part >= min_part; --part) {
            current.push_back(part);
            rec(remaining - part, part);
            current.pop_back();
        }
    };
    if (n >= 0) rec(n, n);
    return out;
}

Partition insert_part(const Partition& p, int part)
{
    Partition out = p;
    auto pos = std::find_if(out.begin(), out.end(), [&](int x) { return x < part; });
    out.insert(pos, part);
    return out;
}

std::string to_string(const Partition& p)
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << "]";
    return os.str();
}

int max_weight(const GradedVector& v)
{
    int w = -1;
    for (const auto& [p, c] : v) w = std::max(w, weight(p));
    return w;
}

bool is_homogeneous(const GradedVector& v)
{
    if (v.is_zero()) return true;
    int w = weight(v.begin()->first);
    return std::all_of(v.begin(), v.end(), [&](const auto& t) { return weight(t.first) == w; });
}

int homogeneous_weight(const GradedVector& v)
{
    if (v.is_zero() || !is_homogeneous(v)) throw MathError("expected a nonzero homogeneous vector");
    return weight(v.begin()->first);
}

std::map<int, GradedVector> split_by_weight(const GradedVector& v)
{
    std::map<int, GradedVector> out;
    for (const auto& [p, c] : v) out[weight(p)].add(p, c);
    return out;
}

GradedVector project(const GradedVector& v, int grade)
{
    GradedVector out;
    for (const auto& [p, c] : v)
        if (weight(p) == grade) out.add(p, c);
    return out;
}

int weight(const TensorKey& key)
{
    int w = 0;
    for (const auto& p : key) w += weight(p);
    return w;
}

int max_weight(const TensorVector& v)
{
    int w = -1;
    for (const auto& [k, c] : v) w = std::max(w, weight(k));
    return w;
}

std::map<int, TensorVector> split_by_weight(const TensorVector& v)
{
    std::map<int, TensorVector> out;
    for (const auto& [k, c] : v) out[weight(k)].add(k, c);
    return out;
}

std::string to_string(const GradedVector& v)
{
    if (v.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, c] : v) {
        os << (first ? "" : " + ") << "(" << c.to_string() << ")" << to_string(p);
        first = false;
    }
    return os.str();
}

std::string to_string(const TensorVector& v)
{
    if (v.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : v) {
        os << (first ? "" : " + ") << "(" << c.to_string() << ")";
        for (std::size_t i = 0; i < key.size(); ++i) os << (i ? "x" : "") << to_string(key[i]);
        first = false;
    }
    return os.str();
}

}  // namespace sewprop
