#include "sewprop/propagate.hpp"

#include <algorithm>
#include <cmath>

#include "sewprop/parallel.hpp"

namespace sewprop {

namespace {

template <class T>
T lift(const Scalar& s);
template <>
Scalar lift<Scalar>(const Scalar& s)
{
    return s;
}
template <>
std::complex<double> lift<std::complex<double>>(const Scalar& s)
{
    return s.to_complex();
}

double magnitude(const Scalar& s) { return std::abs(s.to_complex()); }
double magnitude(std::complex<double> z) { return std::abs(z); }

bool less_in_modulus(const Scalar& a, const Scalar& b)
{
    if (a.is_rational() && b.is_rational()) return abs(a.rational()) < abs(b.rational());
    return std::abs(a.to_complex()) < std::abs(b.to_complex());
}
bool less_in_modulus(std::complex<double> a, std::complex<double> b) { return std::abs(a) < std::abs(b); }
bool is_zero_point(const Scalar& a) { return a.is_zero(); }
bool is_zero_point(std::complex<double> a) { return a == std::complex<double>(0.0, 0.0); }

template <class T>
using Vec = std::map<Partition, T>;

template <class T>
void check_radial(const std::vector<T>& zs)
{
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if (is_zero_point(zs[i])) throw MathError("insertion point at the origin");
        if (i > 0 && !less_in_modulus(zs[i - 1], zs[i]))
            throw MathError("insertion points are not radially ordered at position " + std::to_string(i));
    }
}

template <class T>
Propagation<T> propagate_impl(const Module& m, const std::vector<GradedVector>& vs, const std::vector<T>& zs,
                              const GradedVector& w, const GradedVector& wp, int cutoff)
{
    if (vs.size() != zs.size()) throw MathError("need one point per inserted vector");
    if (cutoff < 0) throw MathError("grade cutoff must be nonnegative");
    if (cutoff > m.cutoff()) throw CutoffOverflow(cutoff, m.cutoff());
    check_radial(zs);
    m.validate(w);
    m.validate(wp);
    const std::size_t n = vs.size();

    Propagation<T> out;
    out.shells.assign(cutoff + 1, lift<T>(Scalar(0)));
    if (n == 0) {
        out.shells[0] = lift<T>(m.pairing(w, wp));
    } else {
        // z_i^e for every exponent a step can produce
        std::vector<std::map<long, T>> zpow(n);
        for (std::size_t i = 0; i < n; ++i) {
            m.validate(vs[i]);
            int top = std::max(max_weight(vs[i]), 0);
            int gmax = std::max(cutoff, std::max(max_weight(w), max_weight(wp)));
            for (long e = -gmax - top; e <= gmax; ++e) {
                if constexpr (std::is_same_v<T, Scalar>)
                    zpow[i].emplace(e, pow(zs[i], e));
                else
                    zpow[i].emplace(e, std::pow(zs[i], static_cast<int>(e)));
            }
        }

        std::map<std::pair<int, int>, Vec<T>> cur;
        for (const auto& [p, c] : w) cur[{weight(p), 0}][p] += lift<T>(c);

        for (std::size_t i = 0; i < n; ++i) {
            const bool last = i + 1 == n;
            std::vector<int> targets;
            if (last) {
                for (const auto& [g, piece] : split_by_weight(wp)) targets.push_back(g);
            } else {
                for (int g = 0; g <= cutoff; ++g) targets.push_back(g);
            }
            std::vector<std::map<int, Vec<T>>> buckets(targets.size());
            parallel_for(targets.size(), [&](std::size_t ti) {
                const int g2 = targets[ti];
                for (const auto& [key, vec] : cur) {
                    const auto [g, mx] = key;
                    const int new_mx = last ? mx : std::max(mx, g2);
                    for (const auto& [u, cu] : vs[i]) {
                        const int wu = weight(u);
                        const long mode = static_cast<long>(g) + wu - 1 - g2;
                        const T factor = lift<T>(cu) * zpow[i].at(g2 - g - wu);
                        Vec<T>* dst = nullptr;
                        for (const auto& [b, cb] : vec) {
                            GradedVector r = m.mode(u, mode, b);
                            if (r.is_zero()) continue;
                            if (!dst) dst = &buckets[ti][new_mx];
                            const T scale = cb * factor;
                            for (const auto& [p, c] : r) {
                                auto [it, inserted] = dst->try_emplace(p, lift<T>(c) * scale);
                                if (!inserted) it->second += lift<T>(c) * scale;
                            }
                        }
                    }
                }
            });
            if (last) {
                for (std::size_t ti = 0; ti < targets.size(); ++ti)
                    for (const auto& [mx, vec] : buckets[ti])
                        for (const auto& [p, c] : vec) {
                            Scalar d = wp.coeff(p);
                            if (!d.is_zero()) out.shells[mx] += c * lift<T>(d);
                        }
            } else {
                std::map<std::pair<int, int>, Vec<T>> next;
                for (std::size_t ti = 0; ti < targets.size(); ++ti)
                    for (auto& [mx, vec] : buckets[ti]) next.emplace(std::make_pair(targets[ti], mx), std::move(vec));
                cur = std::move(next);
            }
        }
    }

    out.partial_sums.resize(out.shells.size());
    T running = lift<T>(Scalar(0));
    std::vector<double> mags;
    for (std::size_t s = 0; s < out.shells.size(); ++s) {
        running += out.shells[s];
        out.partial_sums[s] = running;
        mags.push_back(magnitude(out.shells[s]));
    }
    out.value = running;
    out.tail_estimate = tail_estimate(mags);
    return out;
}

}  // namespace

double tail_estimate(const std::vector<double>& mags)
{
    const std::size_t window = 5;
    if (mags.empty()) return 0.0;
    const std::size_t start = mags.size() > window ? mags.size() - window : 0;
    double total = 0.0;
    for (std::size_t i = start; i < mags.size(); ++i) total += mags[i];
    if (total == 0.0) return 0.0;
    // geometric mean of successive ratios over the window
    double log_ratio = 0.0;
    int count = 0;
    for (std::size_t i = start + 1; i < mags.size(); ++i) {
        if (mags[i - 1] == 0.0 || mags[i] == 0.0) continue;
        log_ratio += std::log(mags[i] / mags[i - 1]);
        ++count;
    }
    if (count == 0) return total;
    const double r = std::exp(log_ratio / count);
    if (r >= 1.0) return total;
    return mags.back() * r / (1.0 - r);
}

Propagation<Scalar> propagate(const Module& m, const std::vector<GradedVector>& vs, const std::vector<Scalar>& zs,
                              const GradedVector& w, const GradedVector& wp, int cutoff)
{
    return propagate_impl<Scalar>(m, vs, zs, w, wp, cutoff);
}

Propagation<std::complex<double>> propagate(const Module& m, const std::vector<GradedVector>& vs,
                                            const std::vector<std::complex<double>>& zs, const GradedVector& w,
                                            const GradedVector& wp, int cutoff)
{
    return propagate_impl<std::complex<double>>(m, vs, zs, w, wp, cutoff);
}

MultiLaurent propagate_expand(const Module& m, const std::vector<GradedVector>& vs, const GradedVector& w,
                              const GradedVector& wp, long d_max)
{
    const std::size_t n = vs.size();
    m.validate(w);
    m.validate(wp);
    MultiLaurent out;
    if (n == 0) {
        Scalar c = m.pairing(w, wp);
        if (!c.is_zero()) out.emplace(std::vector<long>{}, c);
        return out;
    }
    using Key = std::pair<std::vector<long>, int>;  // (exponents so far, grade)
    std::map<Key, GradedVector> cur;
    for (const auto& [p, c] : w) cur[{{}, weight(p)}].add(p, c);
    const auto wp_grades = split_by_weight(wp);

    for (std::size_t i = 0; i < n; ++i) {
        m.validate(vs[i]);
        const bool last = i + 1 == n;
        std::map<Key, GradedVector> next;
        for (const auto& [key, vec] : cur) {
            const auto& [exps, g] = key;
            long partial = 0;
            for (long e : exps) partial += e;
            for (const auto& [u, cu] : vs[i]) {
                const int wu = weight(u);
                std::vector<int> targets;
                if (last) {
                    for (const auto& [g2, piece] : wp_grades) targets.push_back(g2);
                } else {
                    const long top = g + wu + d_max - partial;
                    if (top > m.cutoff()) throw CutoffOverflow(static_cast<int>(top), m.cutoff());
                    for (int g2 = 0; g2 <= top; ++g2) targets.push_back(g2);
                }
                for (int g2 : targets) {
                    const long mode = static_cast<long>(g) + wu - 1 - g2;
                    GradedVector r;
                    for (const auto& [b, cb] : vec) r.add_scaled(m.mode(u, mode, b), cb);
                    if (r.is_zero()) continue;
                    std::vector<long> e2 = exps;
                    e2.push_back(g2 - g - wu);
                    next[{e2, g2}].add_scaled(r, cu);
                }
            }
        }
        cur = std::move(next);
    }
    for (const auto& [key, vec] : cur) {
        Scalar c = m.pairing(vec, wp);
        if (c.is_zero()) continue;
        auto [it, inserted] = out.emplace(key.first, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) out.erase(it);
        }
    }
    return out;
}

}  // namespace sewprop
