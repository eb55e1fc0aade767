#include "sewprop/wick.hpp"

#include <functional>

namespace sewprop {

void Correlator::add(const Key& key, const Scalar& c)
{
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Correlator& Correlator::operator+=(const Correlator& o)
{
    if (o.n_ != n_ && !o.terms_.empty()) throw MathError("adding correlators with different point counts");
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
}

Correlator& Correlator::operator*=(const Scalar& c)
{
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
}

Scalar Correlator::evaluate(const std::vector<Scalar>& zs) const
{
    if (static_cast<int>(zs.size()) != n_) throw MathError("wrong number of points");
    std::vector<Scalar> diffs(static_cast<std::size_t>(n_) * (n_ - 1) / 2 + 1);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < a; ++b) {
            diffs[pair_index(a, b)] = zs[a] - zs[b];
            if (diffs[pair_index(a, b)].is_zero()) throw MathError("coincident insertion points");
        }
    Scalar sum(0);
    for (const auto& [key, c] : terms_) {
        Scalar t = c;
        for (int i = 0; i < n_; ++i)
            if (key.first[i]) t *= pow(zs[i], key.first[i]);
        for (std::size_t p = 0; p < key.second.size(); ++p)
            if (key.second[p]) t *= pow(diffs[p], -key.second[p]);
        sum += t;
    }
    return sum;
}

std::complex<double> Correlator::evaluate(const std::vector<std::complex<double>>& zs) const
{
    if (static_cast<int>(zs.size()) != n_) throw MathError("wrong number of points");
    std::complex<double> sum{0.0, 0.0};
    for (const auto& [key, c] : terms_) {
        std::complex<double> t = c.to_complex();
        for (int i = 0; i < n_; ++i)
            if (key.first[i]) t *= std::pow(zs[i], key.first[i]);
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < a; ++b)
                if (int f = key.second[pair_index(a, b)]) t *= std::pow(zs[a] - zs[b], -f);
        sum += t;
    }
    return sum;
}

FracLaurent Correlator::evaluate_scaled(const std::vector<Scalar>& base, const std::string& var) const
{
    if (static_cast<int>(base.size()) != n_) throw MathError("wrong number of points");
    FracLaurent out(1, var);
    for (const auto& [key, c] : terms_) {
        Scalar t = c;
        long degree = 0;
        for (int i = 0; i < n_; ++i) {
            if (!key.first[i]) continue;
            t *= pow(base[i], key.first[i]);
            degree += key.first[i];
        }
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < a; ++b) {
                int f = key.second[pair_index(a, b)];
                if (!f) continue;
                Scalar d = base[a] - base[b];
                if (d.is_zero()) throw MathError("coincident insertion points");
                t *= pow(d, -f);
                degree -= f;
            }
        out.add_term(Rational(degree), t);
    }
    return out;
}

MultiLaurent Correlator::expand_radial(long d_max) const
{
    MultiLaurent out;
    for (const auto& [key, c] : terms_) {
        std::vector<long> e(key.first.begin(), key.first.end());
        std::vector<std::pair<int, int>> pairs;
        std::vector<int> fs;
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < a; ++b)
                if (int f = key.second[pair_index(a, b)]) {
                    pairs.emplace_back(a, b);
                    fs.push_back(f);
                    e[a] -= f;
                }
        auto within = [&] {
            long d = 0;
            for (int i = 0; i + 1 < n_; ++i) {
                d += e[i];
                if (d > d_max) return false;
            }
            return true;
        };
        // (z_a - z_b)^{-f} = sum_j binom(f+j-1, j) z_b^j z_a^{-f-j}; raising j only raises partial sums
        std::function<void(std::size_t, const Scalar&)> rec = [&](std::size_t p, const Scalar& coeff) {
            if (!within()) return;
            if (p == pairs.size()) {
                auto [it, inserted] = out.emplace(e, coeff);
                if (!inserted) {
                    it->second += coeff;
                    if (it->second.is_zero()) out.erase(it);
                }
                return;
            }
            const auto [a, b] = pairs[p];
            for (long j = 0;; ++j) {
                e[b] += j;
                e[a] -= j;
                const bool ok = within();
                if (ok) rec(p + 1, coeff * Scalar(binomial(Rational(fs[p] + j - 1), j)));
                e[b] -= j;
                e[a] += j;
                if (!ok) break;
            }
        };
        rec(0, c);
    }
    return out;
}

namespace {

struct Element {
    enum Kind { out, field, in } kind;
    int group;
    long mode;  // a_m for out, a_{-n} for in (n stored)
    int point;
    int deriv;  // p in d^p a / p!
};

Rational z_partition(const Partition& p)
{
    Rational z = 1;
    std::map<int, long> mult;
    for (int part : p) ++mult[part];
    for (const auto& [part, m] : mult) z *= factorial(m) * pow(Rational(part), m);
    return z;
}

}  // namespace

Correlator heisenberg_correlator(const Module& fock, const std::vector<GradedVector>& vs, const GradedVector& w,
                                 const GradedVector& wp)
{
    if (fock.kind() != AlgebraKind::heisenberg) throw Unsupported("the Wick oracle covers the Heisenberg algebra only");
    const int n = static_cast<int>(vs.size());
    const Rational lambda = fock.momentum();
    const std::size_t npairs = static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2;
    Correlator result(n);

    std::vector<const Partition*> chosen(n);
    std::vector<Scalar> chosen_coeff(n);

    auto contract = [&](const Partition& mu, const Partition& nu, const Scalar& prefactor) {
        std::vector<Element> els;
        for (int m : mu) els.push_back({Element::out, -1, m, -1, 0});
        for (int i = n - 1; i >= 0; --i)
            for (int part : *chosen[i]) els.push_back({Element::field, i, 0, i, part - 1});
        for (int m : nu) els.push_back({Element::in, -2, m, -1, 0});

        std::vector<int> e(n, 0), f(npairs, 0);
        std::vector<bool> used(els.size(), false);
        std::function<void(std::size_t, const Scalar&)> rec = [&](std::size_t idx, const Scalar& coeff) {
            while (idx < els.size() && used[idx]) ++idx;
            if (idx == els.size()) {
                result.add({e, f}, coeff);
                return;
            }
            const Element& x = els[idx];
            used[idx] = true;
            if (x.kind == Element::field && lambda != 0) {
                // zero-mode part lambda * d^(p) z^{-1}
                e[x.point] += -1 - x.deriv;
                rec(idx + 1, coeff * Scalar(lambda * (x.deriv % 2 ? -1 : 1)));
                e[x.point] -= -1 - x.deriv;
            }
            for (std::size_t j = idx + 1; j < els.size(); ++j) {
                if (used[j]) continue;
                const Element& y = els[j];
                if (x.group == y.group) continue;
                Rational c = 0;
                int* slot = nullptr;
                int delta = 0;
                if (x.kind == Element::out && y.kind == Element::in) {
                    if (x.mode == y.mode) c = Rational(x.mode);
                } else if (x.kind == Element::out && y.kind == Element::field) {
                    c = Rational(x.mode) * binomial(Rational(x.mode - 1), y.deriv);
                    slot = &e[y.point];
                    delta = static_cast<int>(x.mode) - 1 - y.deriv;
                } else if (x.kind == Element::field && y.kind == Element::in) {
                    c = Rational(y.mode) * binomial(Rational(-y.mode - 1), x.deriv);
                    slot = &e[x.point];
                    delta = static_cast<int>(-y.mode) - 1 - x.deriv;
                } else if (x.kind == Element::field && y.kind == Element::field) {
                    const int p = x.deriv, q = y.deriv;
                    c = factorial(p + q + 1) / (factorial(p) * factorial(q)) * (p % 2 ? -1 : 1);
                    slot = &f[Correlator::pair_index(x.point, y.point)];
                    delta = 2 + p + q;
                }
                if (c == 0) continue;
                used[j] = true;
                if (slot) *slot += delta;
                rec(idx + 1, coeff * Scalar(c));
                if (slot) *slot -= delta;
                used[j] = false;
            }
            used[idx] = false;
        };
        rec(0, prefactor);
    };

    std::vector<std::vector<std::pair<Partition, Scalar>>> monos(n);
    for (int i = 0; i < n; ++i) {
        fock.validate(vs[i]);
        for (const auto& [p, c] : vs[i]) monos[i].emplace_back(p, c);
    }
    fock.validate(w);
    fock.validate(wp);
    std::function<void(int, const Scalar&, const Partition&, const Partition&)> choose =
        [&](int i, const Scalar& c, const Partition& mu, const Partition& nu) {
            if (i == n) {
                contract(mu, nu, c);
                return;
            }
            for (const auto& [p, pc] : monos[i]) {
                chosen[i] = &p;
                choose(i + 1, c * pc, mu, nu);
            }
        };
    for (const auto& [mu, cp] : wp) {
        for (const auto& [nu, cw] : w) {
            choose(0, cp * cw * Scalar(Rational(1) / z_partition(mu)), mu, nu);
        }
    }
    return result;
}

}  // namespace sewprop
