#include "sewprop/twist.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace sewprop {

namespace {

Scalar root_of_unity(int k, long e)
{
    e %= k;
    if (e < 0) e += k;
    if (e == 0) return Scalar(1);
    if (k == 2) return Scalar(-1);
    return Scalar::omega(k, e);
}

std::complex<double> numeric_root(int k, long e) { return std::polar(1.0, -2.0 * std::numbers::pi * e / k); }

int nonvacuum_slots(const TensorKey& key)
{
    int n = 0;
    for (const auto& p : key) n += !p.empty();
    return n;
}

int first_nonvacuum(const TensorKey& key)
{
    for (std::size_t i = 0; i < key.size(); ++i)
        if (!key[i].empty()) return static_cast<int>(i);
    return 0;
}

void add_series(FracLaurent& out, const FracLaurent& f, const Scalar& c)
{
    if (!c.is_zero()) out += f * c;
}

void record(AxiomReport& r, bool ok, bool nonzero, const std::string& what)
{
    ++r.checked;
    r.nonzero += nonzero;
    if (ok) return;
    ++r.failures;
    if (r.passed) r.first_failure = what;
    r.passed = false;
}

// U operators act on V, modes on W
ModulePtr algebra_of(const ModulePtr& w)
{
    if (w->kind() == AlgebraKind::heisenberg && !w->is_adjoint()) return Module::heisenberg(w->cutoff());
    return w;
}

}  // namespace

TwistedModule::TwistedModule(ModulePtr w, int k, int order)
    : w_(std::move(w)), v_(algebra_of(w_)), k_(k), order_(order), tensor_(v_, std::max(k, 1))
{
    if (k_ < 1) throw MathError("twisting needs k >= 1");

    const Taylor delta = delta_kz_taylor(k_, order_, "s");
    for (int i = 0; i < k_; ++i) {
        // varrho at the i-th root is omega^i delta
        Taylor rotated = delta;
        for (auto& c : rotated) c *= root_of_unity(k_, i);
        generator_changes_.push_back(k_ == 1 ? CoordChange::identity(order_, "s")
                                             : CoordChange::solve_coefficients(rotated));

        // near p: eta = zeta - p and mu = zeta^k - p^k as functions of x = zeta - p
        Taylor eta(order_, FracLaurent(1, "s"));
        eta[0] = FracLaurent::constant(Scalar(1), "s");
        Taylor mu(order_, FracLaurent(1, "s"));
        for (int n = 1; n <= std::min(order_, k_); ++n)
            mu[n - 1] = FracLaurent::monomial(Scalar(binomial(Rational(k_), n)) * root_of_unity(k_, static_cast<long>(i) * (k_ - n)),
                                              static_cast<long>(k_ - n), "s");
        oracle_changes_.push_back(transition(eta, mu));
    }
}

Rational TwistedModule::grade(const GradedVector& w) const
{
    return Rational(homogeneous_weight(w)) / Rational(k_);
}

GradedVector TwistedModule::L0g(const GradedVector& w) const
{
    GradedVector out = w_->L0_tilde(w);
    out *= Scalar(make_rational(1, k_));
    return out;
}

std::optional<int> TwistedModule::target_grade(int weight_v, const Rational& n, int grade_w) const
{
    const Rational g = Rational(k_) * (Rational(weight_v) - n - 1) + grade_w;
    if (!is_integer(g) || g < 0) return std::nullopt;
    return static_cast<int>(to_long(g));
}

ParamVector TwistedModule::corrected(const GradedVector& v, int slot, TwistPath path) const
{
    if (slot < 0 || slot >= k_) throw MathError("no slot " + std::to_string(slot));
    const auto& changes = path == TwistPath::oracle ? oracle_changes_ : generator_changes_;
    return changes[slot].apply_U(*v_, v);
}

TwistPath TwistedModule::resolve(const TensorKey& key, TwistPath path) const
{
    const int slots = nonvacuum_slots(key);
    if (path == TwistPath::automatic) path = slots <= 1 ? TwistPath::generator : TwistPath::oracle;
    if (path == TwistPath::generator && slots > 1)
        throw Unsupported("the generator formula covers vectors with one non-vacuum slot");
    if (path == TwistPath::oracle && w_->kind() != AlgebraKind::heisenberg)
        throw Unsupported("the correlator oracle is only available for the Heisenberg algebra");
    return path;
}

FracLaurent TwistedModule::generator_series(const TensorKey& key, const Partition& w, const Partition& wp) const
{
    const int slot = first_nonvacuum(key);
    FracLaurent out(1, "s");
    const ParamVector pv = corrected(GradedVector(key[slot]), slot, TwistPath::generator);
    const int ww = weight(w), wwp = weight(wp);
    const GradedVector wv(w), wpv(wp);
    for (const auto& [e, u] : pv.terms()) {
        for (const auto& [wu, part] : split_by_weight(u)) {
            const long p = static_cast<long>(wu) + ww - 1 - wwp;
            const Scalar c = w_->pairing(w_->mode(part, p, wv), wpv);
            if (c.is_zero()) continue;
            out.add_term(e - Rational(p + 1), c * root_of_unity(k_, -static_cast<long>(slot) * (p + 1)));
        }
    }
    return out;
}

FracLaurent TwistedModule::oracle_series(const TensorKey& key, const Partition& w, const Partition& wp) const
{
    std::vector<std::vector<std::pair<Rational, GradedVector>>> parts;
    std::vector<Scalar> bases;
    for (int i = 0; i < k_; ++i) {
        if (key[i].empty()) continue;
        const ParamVector pv = corrected(GradedVector(key[i]), i, TwistPath::oracle);
        std::vector<std::pair<Rational, GradedVector>> terms(pv.terms().begin(), pv.terms().end());
        parts.push_back(std::move(terms));
        bases.push_back(root_of_unity(k_, i));
    }
    FracLaurent out(1, "s");
    std::vector<std::size_t> idx(parts.size(), 0);
    for (;;) {
        Rational shift(0);
        std::vector<GradedVector> fields;
        for (std::size_t j = 0; j < parts.size(); ++j) {
            shift += parts[j][idx[j]].first;
            fields.push_back(parts[j][idx[j]].second);
        }
        const Correlator c = heisenberg_correlator(*w_, fields, GradedVector(w), GradedVector(wp));
        if (!c.is_zero()) out += c.evaluate_scaled(bases, "s") * FracLaurent::monomial(Scalar(1), shift, "s");
        std::size_t j = 0;
        while (j < parts.size() && ++idx[j] == parts[j].size()) idx[j++] = 0;
        if (j == parts.size()) break;
    }
    return out;
}

FracLaurent TwistedModule::key_series(const TensorKey& key, const Partition& w, const Partition& wp,
                                      TwistPath path) const
{
    if (static_cast<int>(key.size()) != k_) throw MathError("tensor vector has the wrong number of slots");
    path = resolve(key, path);
    SeriesKey ck{key, w, wp, static_cast<int>(path)};
    {
        std::shared_lock lock(cache_mutex_);
        auto it = cache_.find(ck);
        if (it != cache_.end()) return it->second;
    }
    FracLaurent f = path == TwistPath::generator ? generator_series(key, w, wp) : oracle_series(key, w, wp);
    std::unique_lock lock(cache_mutex_);
    cache_.emplace(ck, f);
    return f;
}

FracLaurent TwistedModule::series(const TensorVector& v, const GradedVector& w, const GradedVector& wp,
                                  TwistPath path) const
{
    FracLaurent out(1, "s");
    for (const auto& [key, cv] : v)
        for (const auto& [pw, cw] : w)
            for (const auto& [pwp, cwp] : wp) add_series(out, key_series(key, pw, pwp, path), cv * cw * cwp);
    return out;
}

Scalar TwistedModule::mode(const TensorVector& v, const Rational& n, const GradedVector& w, const GradedVector& wp,
                           TwistPath path) const
{
    const Rational e = -Rational(k_) * (n + 1);
    if (!is_integer(e)) return Scalar(0);
    return series(v, w, wp, path).coeff(e);
}

GradedVector TwistedModule::generator_apply(const TensorKey& key, const Rational& n, const GradedVector& w) const
{
    const int slot = first_nonvacuum(key);
    GradedVector out;
    const ParamVector pv = corrected(GradedVector(key[slot]), slot, TwistPath::generator);
    for (const auto& [e, u] : pv.terms()) {
        const Rational p = e - 1 + Rational(k_) * (n + 1);
        if (!is_integer(p)) continue;
        const long pl = to_long(p);
        GradedVector r = w_->mode(u, pl, w);
        if (r.is_zero()) continue;
        out.add_scaled(r, root_of_unity(k_, -static_cast<long>(slot) * (pl + 1)));
    }
    return out;
}

GradedVector TwistedModule::apply(const TensorVector& v, const Rational& n, const GradedVector& w,
                                  TwistPath path) const
{
    GradedVector out;
    for (const auto& [key, cv] : v) {
        if (resolve(key, path) == TwistPath::generator) {
            out.add_scaled(generator_apply(key, n, w), cv);
            continue;
        }
        const int wv = weight(key);
        for (const auto& [gw, wpart] : split_by_weight(w)) {
            const auto g = target_grade(wv, n, gw);
            if (!g) continue;
            if (*g > w_->cutoff()) throw CutoffOverflow(*g, w_->cutoff());
            for (const auto& m : w_->basis(*g)) {
                const Scalar c = mode(TensorVector(key), n, wpart, GradedVector(m), TwistPath::oracle);
                if (!c.is_zero()) out.add(m, c * cv);
            }
        }
    }
    return out;
}

std::complex<double> TwistedModule::oracle_value(const std::vector<TensorVector>& vs,
                                                 const std::vector<std::complex<double>>& roots, const GradedVector& w,
                                                 const GradedVector& wp) const
{
    if (w_->kind() != AlgebraKind::heisenberg)
        throw Unsupported("the correlator oracle is only available for the Heisenberg algebra");
    if (vs.size() != roots.size()) throw MathError("one root per twisted insertion");
    // every slot of every group becomes a list of (numeric factor, vector) choices
    std::vector<std::vector<std::pair<std::complex<double>, GradedVector>>> slots;
    std::vector<std::complex<double>> points;
    std::vector<std::vector<std::pair<TensorKey, Scalar>>> keys;
    for (const auto& v : vs) keys.emplace_back(v.begin(), v.end());

    std::complex<double> total = 0;
    std::vector<std::size_t> kidx(vs.size(), 0);
    if (std::any_of(keys.begin(), keys.end(), [](const auto& k) { return k.empty(); })) return 0;
    for (;;) {
        std::complex<double> coeff = 1;
        slots.clear();
        points.clear();
        for (std::size_t j = 0; j < vs.size(); ++j) {
            const auto& [key, c] = keys[j][kidx[j]];
            coeff *= c.to_complex();
            for (int i = 0; i < k_; ++i) {
                if (key[i].empty()) continue;
                std::vector<std::pair<std::complex<double>, GradedVector>> choices;
                const ParamVector pv = corrected(GradedVector(key[i]), i, TwistPath::oracle);
                for (const auto& [e, u] : pv.terms())
                    choices.emplace_back(std::pow(roots[j], e.get_d()), u);
                slots.push_back(std::move(choices));
                points.push_back(numeric_root(k_, i) * roots[j]);
            }
        }
        std::vector<std::size_t> idx(slots.size(), 0);
        for (;;) {
            std::complex<double> factor = coeff;
            std::vector<GradedVector> fields;
            for (std::size_t s = 0; s < slots.size(); ++s) {
                factor *= slots[s][idx[s]].first;
                fields.push_back(slots[s][idx[s]].second);
            }
            const Correlator c = heisenberg_correlator(*w_, fields, w, wp);
            if (!c.is_zero()) total += factor * c.evaluate(points);
            std::size_t s = 0;
            while (s < slots.size() && ++idx[s] == slots[s].size()) idx[s++] = 0;
            if (s == slots.size()) break;
        }
        std::size_t j = 0;
        while (j < keys.size() && ++kidx[j] == keys[j].size()) kidx[j++] = 0;
        if (j == keys.size()) break;
    }
    return total;
}

std::vector<std::pair<int, TensorVector>> eigencomponents(const TensorPower& t, const TensorVector& u)
{
    const int k = t.k();
    std::vector<std::pair<int, TensorVector>> out;
    std::vector<TensorVector> orbit{u};
    for (int i = 1; i < k; ++i) orbit.push_back(t.g(orbit.back()));
    for (int j = 0; j < k; ++j) {
        TensorVector uj;
        for (int i = 0; i < k; ++i) uj.add_scaled(orbit[i], root_of_unity(k, static_cast<long>(i) * j) * Scalar(make_rational(1, k)));
        if (!uj.is_zero()) out.emplace_back(j, std::move(uj));
    }
    return out;
}

AxiomReport check_grading(const TwistedModule& t, const std::vector<TensorVector>& us,
                          const std::vector<GradedVector>& ws, const Rational& n_max, TwistPath path)
{
    AxiomReport r;
    const int k = t.k();
    const long top = to_long(Rational(n_max * k));
    for (const auto& u : us) {
        const TensorVector l0u = t.tensor().L0(u);
        for (const auto& w : ws)
            for (long j = -top; j <= top; ++j) {
                const Rational n = make_rational(j, k);
                const GradedVector yw = t.apply(u, n, w, path);
                GradedVector lhs = t.L0g(yw);
                lhs -= t.apply(u, n, t.L0g(w), path);
                GradedVector rhs = t.apply(l0u, n, w, path);
                GradedVector scaled = yw;
                scaled *= Scalar(Rational(n + 1));
                rhs -= scaled;
                record(r, lhs == rhs, !lhs.is_zero() || !rhs.is_zero(), "grading fails for u = " + to_string(u) + " at n = " + to_string(n));
            }
    }
    return r;
}

AxiomReport check_equivariance(const TwistedModule& t, const std::vector<TensorVector>& us,
                               const std::vector<GradedVector>& ws, const std::vector<GradedVector>& wps,
                               TwistPath path)
{
    AxiomReport r;
    const int k = t.k();
    for (const auto& u : us) {
        const TensorVector gu = t.tensor().g(u);
        for (const auto& w : ws)
            for (const auto& wp : wps) {
                const FracLaurent a = t.series(u, w, wp, path);
                const FracLaurent b = t.series(gu, w, wp, path);
                // s^e carries n = -1 - e/k, and exp(2 pi i (n+1)) = omega_k^e
                FracLaurent rotated(1, "s");
                for (const auto& [num, c] : a.terms()) {
                    const Rational e = make_rational(num, a.denominator());
                    rotated.add_term(e, c * root_of_unity(k, to_long(e)));
                }
                record(r, rotated == b, !b.is_zero(), "equivariance fails for u = " + to_string(u));
            }
    }
    return r;
}

AxiomReport check_jacobi(const TwistedModule& t, const TensorVector& u, const TensorVector& v, const GradedVector& w,
                         int range, TwistPath path)
{
    AxiomReport r;
    const int k = t.k();
    const TensorPower& tp = t.tensor();
    const int wu = std::max(0, max_weight(u)), wv = std::max(0, max_weight(v)), gw = std::max(0, max_weight(w));

    // Y^g(x)_a w vanishes once the target grade drops below zero
    auto alive = [&](int weight_x, const Rational& a) { return Rational(k * (Rational(weight_x) - a - 1) + gw) >= 0; };

    for (const auto& [j, uj] : eigencomponents(tp, u)) {
        const Rational jk = make_rational(j, k);
        for (long m = -range; m <= range; ++m)
            for (long n = -range; n <= range; ++n)
                for (long hn = -range * k; hn <= range * k; ++hn) {
                    const Rational h = make_rational(hn, k);
                    GradedVector lhs, rhs;
                    for (long l = 0; n + l <= wu + wv - 1; ++l) {
                        const TensorVector uv = tp.mode(uj, n + l, v);
                        if (uv.is_zero()) continue;
                        const Rational b = binomial(jk + m, l);
                        if (b == 0) continue;
                        lhs.add_scaled(t.apply(uv, jk + m + h - l, w, path), Scalar(b));
                    }
                    for (long l = 0; (n < 0 || l <= n) && alive(wv, h + l); ++l) {
                        const GradedVector x = t.apply(v, h + l, w, path);
                        if (x.is_zero()) continue;
                        const Rational b = binomial(Rational(n), l) * ((l % 2) ? -1 : 1);
                        rhs.add_scaled(t.apply(uj, jk + m + n - l, x, path), Scalar(b));
                    }
                    for (long l = 0; (n < 0 || l <= n) && alive(wu, jk + m + l); ++l) {
                        const GradedVector x = t.apply(uj, jk + m + l, w, path);
                        if (x.is_zero()) continue;
                        const Rational b = binomial(Rational(n), l) * (((n - l) % 2) ? -1 : 1);
                        rhs.add_scaled(t.apply(v, n + h - l, x, path), -Scalar(b));
                    }
                    record(r, lhs == rhs, !lhs.is_zero() || !rhs.is_zero(),
                           "Jacobi fails at j = " + std::to_string(j) + ", m = " + std::to_string(m) + ", n = " +
                               std::to_string(n) + ", h = " + to_string(h));
                }
    }
    return r;
}

AxiomReport check_paths(const TwistedModule& t, const std::vector<GradedVector>& vs,
                        const std::vector<GradedVector>& ws, const std::vector<GradedVector>& wps)
{
    AxiomReport r;
    for (const auto& v : vs)
        for (int slot = 0; slot < t.k(); ++slot) {
            const TensorVector tv = t.tensor().in_slot(v, slot);
            for (const auto& w : ws)
                for (const auto& wp : wps)
                {
                    const FracLaurent a = t.series(tv, w, wp, TwistPath::generator);
                    record(r, a == t.series(tv, w, wp, TwistPath::oracle), !a.is_zero(),
                           "construction paths differ for " + to_string(tv));
                }
        }
    return r;
}

FactorizationReport factorization_check(const TwistedModule& t, const TensorVector& u, const TensorVector& v,
                                        const GradedVector& w, const GradedVector& wp, std::complex<double> z,
                                        std::complex<double> xi, int shell_cutoff)
{
    if (!(std::abs(z) > 0 && std::abs(z) < std::abs(xi))) throw MathError("need 0 < |z| < |xi|");
    const int k = t.k();
    const std::complex<double> sz = std::pow(z, 1.0 / k), sxi = std::pow(xi, 1.0 / k);

    // intermediate states Y^g(u, z) w, one shell per grade of W
    std::vector<std::map<Partition, std::complex<double>>> shells(shell_cutoff + 1);
    for (const auto& [key, cu] : u) {
        const int wu = weight(key);
        for (const auto& [gw, wpart] : split_by_weight(w))
            for (int g = 0; g <= shell_cutoff; ++g) {
                // target grade g = k (wu - n - 1) + gw
                const Rational n = Rational(wu) - 1 - make_rational(g - gw, k);
                const GradedVector x = t.apply(TensorVector(key), n, wpart);
                if (x.is_zero()) continue;
                const std::complex<double> zpow = std::pow(sz, static_cast<double>(g - gw - k * wu)) * cu.to_complex();
                for (const auto& [p, c] : x) shells[g][p] += c.to_complex() * zpow;
            }
    }

    FactorizationReport r;
    std::complex<double> sum = 0;
    for (int g = 0; g <= shell_cutoff; ++g) {
        for (const auto& [p, c] : shells[g]) {
            if (c == 0.0) continue;
            sum += c * t.series(v, GradedVector(p), wp).eval_root(sxi);
        }
        r.partial_sums.push_back(sum);
    }
    r.oracle = t.oracle_value({u, v}, {sz, sxi}, w, wp);
    r.relative_error = std::abs(sum - r.oracle) / std::abs(r.oracle);
    return r;
}

}  // namespace sewprop
