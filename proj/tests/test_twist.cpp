#include <doctest.h>

#include <cmath>

#include "sewprop/twist.hpp"

using namespace sewprop;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }
Scalar sq(long a, long b = 1) { return Scalar(q(a, b)); }

const GradedVector a1(Partition{1});

std::vector<GradedVector> basis_vectors(const Module& m, int max_grade)
{
    std::vector<GradedVector> out;
    for (int g = 0; g <= max_grade; ++g)
        for (const auto& p : m.basis(g)) out.emplace_back(p);
    return out;
}

TensorVector a_in_first(const TwistedModule& t) { return t.tensor().in_slot(a1, 0); }

Scalar root_power(int k, int i) { return i % k == 0 ? sq(1) : Scalar::omega(k, i); }

FracLaurent signed_power(const FracLaurent& f, long e, long order)
{
    if (e >= 0) return f.pow(e);
    return f.inverse(Rational(order)).pow(-e);
}

// <Y^g(u, z) Y^g(v, 1) w, w'> from the Wick oracle with z = 1 + x, expanded in x;
// u sits at omega^i (1 + x)^{1/k}, v at omega^i
FracLaurent oracle_near_one(const TwistedModule& t, const TensorKey& ku, const TensorKey& kv, const GradedVector& w,
                            const GradedVector& wp, long order)
{
    const int k = t.k();
    FracLaurent sz(1, "x");
    for (long m = 0; m < order; ++m) sz.add_term(Rational(m), Scalar(binomial(q(1, k), m)));
    sz.truncate(Rational(order));
    const FracLaurent one = FracLaurent::constant(sq(1), "x");

    struct Slot {
        std::vector<std::pair<Rational, GradedVector>> terms;
        FracLaurent point;
        FracLaurent base;
    };
    std::vector<Slot> slots;
    for (const auto* key : {&ku, &kv})
        for (int i = 0; i < k; ++i) {
            if ((*key)[i].empty()) continue;
            const ParamVector pv = t.corrected(GradedVector((*key)[i]), i, TwistPath::oracle);
            const FracLaurent& base = key == &ku ? sz : one;
            slots.push_back({{pv.terms().begin(), pv.terms().end()}, base * root_power(k, i), base});
        }

    FracLaurent total(1, "x");
    std::vector<std::size_t> idx(slots.size(), 0);
    for (;;) {
        FracLaurent prefactor = one;
        std::vector<GradedVector> fields;
        for (std::size_t j = 0; j < slots.size(); ++j) {
            const auto& [e, v] = slots[j].terms[idx[j]];
            prefactor *= signed_power(slots[j].base, to_long(e), order);
            fields.push_back(v);
        }
        const Correlator c = heisenberg_correlator(t.module(), fields, w, wp);
        for (const auto& [key, coeff] : c.terms()) {
            const auto& [es, fs] = key;
            FracLaurent term = prefactor * coeff;
            for (std::size_t a = 0; a < es.size(); ++a) term *= signed_power(slots[a].point, es[a], order);
            for (int a = 1; a < c.points(); ++a)
                for (int b = 0; b < a; ++b) {
                    const int f = fs[Correlator::pair_index(a, b)];
                    if (f != 0) term *= signed_power(slots[a].point - slots[b].point, -f, order);
                }
            total += term;
        }
        std::size_t j = 0;
        while (j < slots.size() && ++idx[j] == slots[j].terms.size()) idx[j++] = 0;
        if (j == slots.size()) break;
    }
    return total;
}

}  // namespace

TEST_CASE("the vacuum acts as the identity field")
{
    for (int k : {1, 2, 3}) {
        TwistedModule t(Module::heisenberg(10), k);
        const auto ws = basis_vectors(t.module(), 3);
        for (const auto& w : ws)
            for (const auto& wp : ws) {
                FracLaurent expected(1, "s");
                expected.add_term(Rational(0), t.module().pairing(w, wp));
                CHECK(t.series(t.tensor().vacuum(), w, wp) == expected);
                CHECK(t.series(t.tensor().vacuum(), w, wp, TwistPath::oracle) == expected);
            }
        CHECK(t.apply(t.tensor().vacuum(), q(-1), GradedVector(Partition{2, 1})) == GradedVector(Partition{2, 1}));
        CHECK(t.apply(t.tensor().vacuum(), q(-1, k), GradedVector(Partition{2, 1})).is_zero() == (k != 1));
    }
}

TEST_CASE("k = 1 gives the ordinary vertex operator")
{
    TwistedModule t(Module::heisenberg(10), 1);
    const auto& m = t.module();
    const auto vs = basis_vectors(m, 3);
    for (const auto& v : vs)
        for (const auto& w : basis_vectors(m, 2))
            for (long n = -4; n <= 4; ++n) {
                const TensorVector tv = t.tensor().in_slot(v, 0);
                const int target = homogeneous_weight(v) + homogeneous_weight(w) - static_cast<int>(n) - 1;
                if (target < 0 || target > m.cutoff()) continue;
                CHECK(t.apply(tv, Rational(n), w, TwistPath::generator) == m.mode(v, n, w));
                CHECK(t.apply(tv, Rational(n), w, TwistPath::oracle) == m.mode(v, n, w));
            }
}

TEST_CASE("the primary a gives a rescaled untwisted field")
{
    // Y^g(a x 1, z) = (1/k) z^{1/k - 1} Y(a, z^{1/k}), so the s^e coefficient is
    // (1/k) <a_{1-k-e}... > read off in s
    for (int k : {2, 3, 4}) {
        TwistedModule t(Module::heisenberg(10), k);
        const auto& m = t.module();
        const auto ws = basis_vectors(m, 3);
        for (const auto& w : ws)
            for (const auto& wp : ws) {
                FracLaurent expected(1, "s");
                for (long p = -6; p <= 6; ++p) {
                    const Scalar c = m.pairing(m.mode(a1, p, w), wp);
                    expected.add_term(Rational(1 - k - p - 1), c * Scalar(q(1, k)));
                }
                CHECK(t.series(a_in_first(t), w, wp) == expected);
            }
    }
}

TEST_CASE("both construction paths agree on one-slot vectors")
{
    for (int k : {2, 3}) {
        TwistedModule t(Module::heisenberg(12), k);
        const auto vs = basis_vectors(*t.algebra(), 3);
        const auto ws = basis_vectors(t.module(), 4);
        const auto r = check_paths(t, vs, ws, ws);
        CHECK_MESSAGE(r.passed, r.first_failure);
        CHECK(r.checked == vs.size() * k * ws.size() * ws.size());
        CHECK(r.nonzero > r.checked / 5);
    }
}

TEST_CASE("paths agree with a nonzero momentum")
{
    TwistedModule t(Module::heisenberg(10, q(1, 2)), 2);
    const auto vs = basis_vectors(*t.algebra(), 2);
    const auto ws = basis_vectors(t.module(), 3);
    const auto r = check_paths(t, vs, ws, ws);
    CHECK_MESSAGE(r.passed, r.first_failure);
}

TEST_CASE("grading")
{
    SUBCASE("a in the first slot, ten modes")
    {
        TwistedModule t(Module::heisenberg(14), 2);
        const auto r = check_grading(t, {a_in_first(t)}, basis_vectors(t.module(), 3), q(5, 2));
        CHECK_MESSAGE(r.passed, r.first_failure);
        CHECK(r.checked >= 10);
    }
    for (int k : {2, 3}) {
        TwistedModule t(Module::heisenberg(16), k);
        std::vector<TensorVector> us;
        for (const auto& v : basis_vectors(*t.algebra(), 3))
            for (int slot = 0; slot < k; ++slot) us.push_back(t.tensor().in_slot(v, slot));
        const auto r = check_grading(t, us, basis_vectors(t.module(), 2), q(2));
        CHECK_MESSAGE(r.passed, r.first_failure);
    }
}

TEST_CASE("a two-slot vector on the oracle path is graded")
{
    TwistedModule t(Module::heisenberg(14), 2);
    const TensorVector u = t.tensor().tensor({a1, a1});
    const auto r = check_grading(t, {u}, basis_vectors(t.module(), 2), q(3, 2));
    CHECK_MESSAGE(r.passed, r.first_failure);
}

TEST_CASE("g-equivariance")
{
    SUBCASE("k = 2 sign")
    {
        TwistedModule t(Module::heisenberg(12), 2);
        const auto ws = basis_vectors(t.module(), 3);
        const auto u = a_in_first(t);
        const auto gu = t.tensor().g(u);
        for (const auto& w : ws)
            for (const auto& wp : ws)
                for (long m = -8; m <= 4; ++m) {
                    const Rational n = q(m, 2);
                    const Scalar sign = m % 2 ? sq(-1) : sq(1);
                    CHECK(t.mode(gu, n, w, wp, TwistPath::oracle) == sign * t.mode(u, n, w, wp, TwistPath::oracle));
                }
    }
    SUBCASE("k = 3 phase")
    {
        TwistedModule t(Module::heisenberg(12), 3);
        const auto ws = basis_vectors(t.module(), 2);
        const auto u = a_in_first(t);
        const auto gu = t.tensor().g(u);
        bool saw_phase = false;
        for (const auto& w : ws)
            for (const auto& wp : ws)
                for (long m = -9; m <= 3; ++m) {
                    const Rational n = q(m, 3);
                    const Scalar base = t.mode(u, n, w, wp);
                    // exp(2 pi i (n + 1)) = omega_3^{-m}
                    CHECK(t.mode(gu, n, w, wp) == Scalar::omega(3, -m) * base);
                    saw_phase = saw_phase || (!base.is_zero() && m % 3 != 0);
                }
        CHECK(saw_phase);
    }
    for (int k : {2, 3}) {
        TwistedModule t(Module::heisenberg(14), k);
        std::vector<TensorVector> us;
        for (const auto& v : basis_vectors(*t.algebra(), 4))
            for (int slot = 0; slot < k; ++slot) us.push_back(t.tensor().in_slot(v, slot));
        const auto ws = basis_vectors(t.module(), 2);
        const auto r = check_equivariance(t, us, ws, ws);
        CHECK_MESSAGE(r.passed, r.first_failure);
    }
    SUBCASE("invariant vectors have integral modes")
    {
        TwistedModule t(Module::heisenberg(12), 2);
        const auto omega = t.tensor().conformal_vector();
        const auto ws = basis_vectors(t.module(), 3);
        for (const auto& w : ws)
            for (const auto& wp : ws) {
                const FracLaurent f = t.series(omega, w, wp);
                for (const auto& [e, c] : f.terms()) CHECK(e % 2 == 0);
            }
    }
}

TEST_CASE("eigencomponents")
{
    TwistedModule t(Module::heisenberg(8), 3);
    const auto u = a_in_first(t);
    const auto parts = eigencomponents(t.tensor(), u);
    REQUIRE(parts.size() == 3);
    TensorVector sum;
    for (const auto& [j, uj] : parts) {
        sum += uj;
        TensorVector scaled = uj;
        scaled *= Scalar::omega(3, -j);
        CHECK(t.tensor().g(uj) == scaled);
    }
    CHECK(sum == u);
}

TEST_CASE("twisted Jacobi identity")
{
    SUBCASE("k = 2 with u = v = a x 1 on the vacuum")
    {
        TwistedModule t(Module::heisenberg(24), 2);
        const auto u = a_in_first(t);
        const auto r = check_jacobi(t, u, u, t.module().vacuum(), 3);
        CHECK_MESSAGE(r.passed, r.first_failure);
        CHECK(r.checked == 2 * 7 * 7 * 13);
        CHECK(r.nonzero > 100);
    }
    SUBCASE("k = 3 with a descendant")
    {
        TwistedModule t(Module::heisenberg(30), 3);
        const auto u = a_in_first(t);
        const auto v = t.tensor().in_slot(GradedVector(Partition{2}), 1);
        const auto r = check_jacobi(t, u, v, a1, 2);
        CHECK_MESSAGE(r.passed, r.first_failure);
    }
    SUBCASE("k = 1 is the Borcherds identity")
    {
        TwistedModule t(Module::heisenberg(16), 1);
        const auto& m = *t.algebra();
        for (const auto& u : basis_vectors(m, 2))
            for (const auto& v : basis_vectors(m, 2)) {
                const auto r = check_jacobi(t, t.tensor().in_slot(u, 0), t.tensor().in_slot(v, 0),
                                            GradedVector(Partition{1}), 2);
                CHECK_MESSAGE(r.passed, r.first_failure);
            }
    }
}

TEST_CASE("factorization through the intermediate grades")
{
    TwistedModule t(Module::heisenberg(46), 2);
    const auto u = a_in_first(t);
    const auto v = t.tensor().in_slot(a1, 1);
    GradedVector wp(Partition{1}, sq(1));
    wp.add(Partition{1, 1}, sq(2));
    const std::vector<std::pair<std::complex<double>, std::complex<double>>> points{
        {{0.01, 0}, {1, 0}}, {{0.02, 0.01}, {0.5, 0}}, {{-1.0 / 50, 0}, {2.0 / 3, 0}}};
    for (const auto& [z, xi] : points) {
        const auto r = factorization_check(t, u, v, a1, wp, z, xi, 40);
        CHECK(r.relative_error < 1e-8);
        CHECK(std::abs(r.oracle) > 0);
        REQUIRE(r.partial_sums.size() == 41);
    }
}

TEST_CASE("the oracle near xi expands into the iterated field")
{
    // <Y^g(u, 1 + x) Y^g(v, 1) w, w'> = sum_n x^{-n-1} <Y^g(u_n v, 1) w, w'> through x^4
    for (int k : {2, 3}) {
        TwistedModule t(Module::heisenberg(20), k);
        const auto u = a_in_first(t);
        const std::vector<TensorVector> vs{a_in_first(t), t.tensor().in_slot(a1, 1),
                                           t.tensor().in_slot(GradedVector(Partition{2}), 0)};
        const std::vector<GradedVector> ws{t.module().vacuum(), a1};
        std::size_t nonzero = 0;
        for (const auto& v : vs)
            for (const auto& w : ws)
                for (const auto& wp : basis_vectors(t.module(), 3)) {
                    const FracLaurent lhs =
                        oracle_near_one(t, u.begin()->first, v.begin()->first, w, wp, 16);
                    FracLaurent rhs(1, "x");
                    for (long n = -6; n <= 3; ++n) {
                        const TensorVector uv = t.tensor().mode(u, n, v);
                        if (uv.is_zero()) continue;
                        rhs.add_term(Rational(-n - 1), t.series(uv, w, wp).eval_root_exact(sq(1)));
                    }
                    for (long e = -4; e <= 4; ++e) {
                        CHECK(lhs.coeff(Rational(e)) == rhs.coeff(Rational(e)));
                        nonzero += !rhs.coeff(Rational(e)).is_zero();
                    }
                }
        CHECK(nonzero > 20);
    }
}

TEST_CASE("unsupported requests are reported")
{
    TwistedModule t(Module::virasoro(q(1, 2), 10), 2);
    const auto two = t.tensor().tensor({GradedVector(Partition{2}), GradedVector(Partition{2})});
    CHECK_THROWS_AS(t.series(two, t.module().vacuum(), t.module().vacuum()), Unsupported);
    const auto one = t.tensor().in_slot(GradedVector(Partition{2}), 0);
    CHECK_THROWS_AS(t.series(one, t.module().vacuum(), t.module().vacuum(), TwistPath::oracle), Unsupported);
    CHECK_NOTHROW(t.series(one, t.module().vacuum(), t.module().vacuum()));
    TwistedModule h(Module::heisenberg(8), 2);
    CHECK_THROWS_AS(h.series(h.tensor().tensor({a1, a1}), a1, a1, TwistPath::generator), Unsupported);
    CHECK_THROWS_AS(TwistedModule(Module::heisenberg(8), 0), MathError);
}
