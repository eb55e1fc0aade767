#include "sewprop/sewing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "sewprop/coord_change.hpp"
#include "sewprop/parallel.hpp"
#include "sewprop/propagate.hpp"

namespace sewprop {

namespace {

void accumulate(MultiLaurent& out, const std::vector<long>& key, const Scalar& c)
{
    if (c.is_zero()) return;
    auto [it, inserted] = out.emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) out.erase(it);
    }
}

// sum_p <Y(v)_p w, wp> keyed by -p-1, the exponent of the insertion point
std::map<long, Scalar> field_coefficients(const Module& m, const GradedVector& v, const GradedVector& w,
                                          const GradedVector& wp)
{
    std::map<long, Scalar> out;
    const auto wp_parts = split_by_weight(wp);
    for (const auto& [wv, vpart] : split_by_weight(v))
        for (const auto& [ww, wpart] : split_by_weight(w))
            for (const auto& [g, wppart] : wp_parts) {
                const long p = static_cast<long>(wv) + ww - 1 - g;
                const Scalar c = m.pairing(m.mode(vpart, p, wpart), wppart);
                if (!c.is_zero()) out[-p - 1] += c;
            }
    return out;
}

Scalar phi_value(const SewingSetup& s, const GradedVector& mvec)
{
    if (!s.outer) return s.module->pairing(mvec, s.wp);
    Scalar v(0);
    for (const auto& [e, c] : field_coefficients(*s.module, s.outer->first, mvec, s.wp)) v += c * pow(s.outer->second, e);
    return v;
}

double modulus(const Scalar& x) { return std::abs(x.to_complex()); }

}  // namespace

CasimirShell CasimirShell::standard(const Module& m, int grade)
{
    CasimirShell shell;
    shell.grade = grade;
    for (const auto& p : m.basis(grade)) shell.pairs.emplace_back(GradedVector(p), GradedVector(p));
    return shell;
}

CasimirShell CasimirShell::changed(const Module& m, int grade, const Matrix& a)
{
    const auto basis = m.basis(grade);
    if (a.size() != basis.size()) throw MathError("basis change has the wrong size");
    const Matrix inv = invert(a);
    CasimirShell shell;
    shell.grade = grade;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        GradedVector v, dual;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            v.add(basis[b], a[b][i]);
            dual.add(basis[b], inv[i][b]);
        }
        shell.pairs.emplace_back(std::move(v), std::move(dual));
    }
    return shell;
}

bool CasimirShell::is_dual(const Module& m) const
{
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = 0; j < pairs.size(); ++j)
            if (m.pairing(pairs[i].first, pairs[j].second) != Scalar(i == j ? 1 : 0)) return false;
    return true;
}

QSeries sew(const SewingFunctional& psi, const std::vector<CasimirShell>& shells)
{
    std::vector<std::pair<std::size_t, std::size_t>> items;
    for (std::size_t s = 0; s < shells.size(); ++s)
        for (std::size_t a = 0; a < shells[s].pairs.size(); ++a) items.emplace_back(s, a);
    std::vector<Scalar> values(items.size());
    parallel_for(items.size(), [&](std::size_t i) {
        const auto& [m, mdual] = shells[items[i].first].pairs[items[i].second];
        values[i] = psi(m, mdual);
    });
    QSeries out;
    out.cutoff = -1;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const int g = shells[items[i].first].grade;
        if (!values[i].is_zero()) out.series.add_term(Rational(g), values[i]);
    }
    for (const auto& shell : shells) out.cutoff = std::max(out.cutoff, shell.grade);
    out.series.truncate(Rational(out.cutoff + 1));
    return out;
}

QSeries sew(const Module& m, const SewingFunctional& psi, int cutoff)
{
    if (cutoff > m.cutoff()) throw CutoffOverflow(cutoff, m.cutoff());
    std::vector<CasimirShell> shells;
    for (int n = 0; n <= cutoff; ++n) shells.push_back(CasimirShell::standard(m, n));
    return sew(psi, shells);
}

ConvergenceReport converge_diag(const QSeries& s, std::complex<double> q0)
{
    ConvergenceReport r;
    std::vector<double> mags(s.cutoff + 1, 0.0);
    std::vector<std::complex<double>> terms(s.cutoff + 1);
    for (const auto& [e, c] : s.series.terms()) {
        if (e < 0 || e > s.cutoff) throw MathError("sewing series must be a power series in q");
        const auto a = c.to_complex();
        mags[e] = std::abs(a);
        terms[e] = a * std::pow(q0, static_cast<double>(e));
    }
    std::complex<double> sum = 0;
    for (int n = 0; n <= s.cutoff; ++n) {
        sum += terms[n];
        r.partial_sums.push_back(sum);
        if (n < s.cutoff && std::abs(terms[n]) > 0) r.ratios.push_back(std::abs(terms[n + 1]) / std::abs(terms[n]));
    }

    // log|a_n| ~ const - n log R, least squares over the last ten coefficients
    std::vector<std::pair<double, double>> pts;
    for (int n = std::max(0, s.cutoff - 9); n <= s.cutoff; ++n)
        if (mags[n] > 0) pts.emplace_back(n, std::log(mags[n]));
    if (pts.empty()) {
        r.radius = std::numeric_limits<double>::infinity();
    } else if (pts.size() == 1) {
        r.radius = pts[0].first > 0 ? std::exp(-pts[0].second / pts[0].first) : std::numeric_limits<double>::infinity();
    } else {
        double mx = 0, my = 0;
        for (const auto& [x, y] : pts) mx += x, my += y;
        mx /= pts.size();
        my /= pts.size();
        double sxy = 0, sxx = 0;
        for (const auto& [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
        r.radius = std::exp(-sxy / sxx);
    }
    return r;
}

SewingFunctional sewing_functional(const SewingSetup& s)
{
    return [s](const GradedVector& mvec, const GradedVector& mdual) {
        Scalar omega(0);
        for (const auto& [e, c] : field_coefficients(*s.module, s.u, s.w_in, mdual)) omega += c;
        if (omega.is_zero()) return omega;
        return phi_value(s, mvec) * omega;
    };
}

MultiLaurent specialize_to_one(const MultiLaurent& f, std::size_t index)
{
    MultiLaurent out;
    for (const auto& [key, c] : f) {
        if (index >= key.size()) throw MathError("no such variable");
        std::vector<long> k2 = key;
        k2.erase(k2.begin() + static_cast<long>(index));
        accumulate(out, k2, c);
    }
    return out;
}

CommuteReport sew_propagate_commute_check(const SewingSetup& s, const std::vector<GradedVector>& vs,
                                          const std::vector<Scalar>& ys, int N, int L)
{
    const Module& m = *s.module;
    if (m.kind() != AlgebraKind::heisenberg) throw Unsupported("the sewn-block oracle needs a Heisenberg module");
    if (vs.size() != ys.size()) throw MathError("one point per insertion");
    if (N < 0 || L < 0) throw MathError("cutoffs must be nonnegative");
    if (L > m.cutoff()) throw CutoffOverflow(L, m.cutoff());
    if (s.outer && modulus(s.outer->second) < 1) throw MathError("insertion on C lies inside the sewing disc |zeta| < 1");

    CommuteReport report;
    report.radial_order.resize(ys.size());
    std::iota(report.radial_order.begin(), report.radial_order.end(), 0);
    for (const auto& y : ys) {
        const double r = modulus(y);
        if (r >= 1) throw MathError("insertion point " + y.to_string() + " lies in the sewing disc |zeta| > 1");
        if (r == 0) throw MathError("insertion point collides with the marked point 0");
    }
    std::sort(report.radial_order.begin(), report.radial_order.end(),
              [&](std::size_t a, std::size_t b) { return modulus(ys[a]) < modulus(ys[b]); });
    for (std::size_t i = 1; i < ys.size(); ++i)
        if (modulus(ys[report.radial_order[i]]) == modulus(ys[report.radial_order[i - 1]]))
            throw MathError("insertion points need distinct moduli");

    // fields on P, innermost first; u at 1 is outermost
    std::vector<GradedVector> inner;
    for (std::size_t i : report.radial_order) inner.push_back(vs[i]);
    inner.push_back(s.u);
    int weights = std::max(0, max_weight(s.w_in));
    for (const auto& v : inner) weights += std::max(0, max_weight(v));
    const int needed = N + weights;
    if (needed > L) throw CutoffOverflow(needed, L);
    const long window = L - weights;
    report.window = window;

    // sewing of the propagation: sum_n q^n sum_a phi(m_a) <...Y(u,1)... w_in, m'_a>
    std::vector<std::pair<int, std::pair<GradedVector, GradedVector>>> items;
    for (int n = 0; n <= N; ++n) {
        CasimirShell shell = CasimirShell::standard(m, n);
        for (auto& pr : shell.pairs) items.emplace_back(n, std::move(pr));
    }
    std::vector<MultiLaurent> pieces(items.size());
    parallel_for(items.size(), [&](std::size_t i) {
        const auto& [mvec, mdual] = items[i].second;
        std::map<long, Scalar> phi;
        if (s.outer)
            phi = field_coefficients(m, s.outer->first, mvec, s.wp);
        else if (Scalar c = m.pairing(mvec, s.wp); !c.is_zero())
            phi[0] = c;
        if (phi.empty()) return;
        const MultiLaurent omega = propagate_expand(m, inner, s.w_in, mdual, window);
        for (const auto& [key, c] : omega)
            for (const auto& [e, cphi] : phi) {
                std::vector<long> k2 = key;
                if (s.outer) k2.push_back(e);
                accumulate(pieces[i], k2, c * cphi);
            }
    });
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto& slot = report.lhs[items[i].first];
        for (const auto& [key, c] : pieces[i]) accumulate(slot, key, c);
    }

    // propagation of the sewn block: points of P become q * z, and every
    // vector on P is acted on by U(z -> q z) = q^{L~0}
    const CoordChange dil = CoordChange::dilation(FracLaurent::monomial(Scalar(1), 1L, "q"), 1);
    std::vector<std::vector<std::pair<long, GradedVector>>> parts;
    auto graded = [&](const GradedVector& v) {
        std::vector<std::pair<long, GradedVector>> out;
        const ParamVector scaled = dil.apply_U(m, v);
        for (const auto& [e, piece] : scaled.terms()) out.emplace_back(to_long(e), piece);
        return out;
    };
    parts.push_back(graded(s.w_in));
    for (const auto& v : inner) parts.push_back(graded(v));
    std::vector<std::size_t> idx(parts.size(), 0);
    const bool empty = std::any_of(parts.begin(), parts.end(), [](const auto& p) { return p.empty(); });
    while (!empty) {
        long qshift = 0;
        std::vector<GradedVector> fields;
        for (std::size_t j = 0; j < parts.size(); ++j) {
            qshift += parts[j][idx[j]].first;
            if (j > 0) fields.push_back(parts[j][idx[j]].second);
        }
        if (s.outer) fields.push_back(s.outer->first);
        const Correlator corr = heisenberg_correlator(m, fields, parts[0][idx[0]].second, s.wp);
        for (const auto& [key, c] : corr.expand_radial(window)) {
            long qexp = qshift;
            for (std::size_t i = 0; i < inner.size(); ++i) qexp += key[i];
            if (qexp <= N) accumulate(report.rhs[qexp], key, c);
        }
        std::size_t j = 0;
        while (j < parts.size() && ++idx[j] == parts[j].size()) idx[j++] = 0;
        if (j == parts.size()) break;
    }

    std::set<long> qs;
    for (const auto& [q, f] : report.lhs) qs.insert(q);
    for (const auto& [q, f] : report.rhs) qs.insert(q);
    for (long q : qs) {
        const MultiLaurent& a = report.lhs[q];
        const MultiLaurent& b = report.rhs[q];
        MultiLaurent diff = a;
        for (const auto& [key, c] : b) accumulate(diff, key, -c);
        for (const auto& entry : diff) {
            const Scalar& c = entry.second;
            report.passed = false;
            report.max_discrepancy = std::max(report.max_discrepancy, std::abs(c.to_complex()));
        }
    }
    for (auto it = report.lhs.begin(); it != report.lhs.end();) it = it->second.empty() ? report.lhs.erase(it) : std::next(it);
    for (auto it = report.rhs.begin(); it != report.rhs.end();) it = it->second.empty() ? report.rhs.erase(it) : std::next(it);
    return report;
}

}  // namespace sewprop
