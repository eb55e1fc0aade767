#include <doctest.h>

#include <random>

#include "sewprop/tensor.hpp"

using namespace sewprop;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

std::vector<Partition> basis_upto(const Module& m, int grade)
{
    std::vector<Partition> out;
    for (int g = 0; g <= grade; ++g)
        for (const auto& p : m.basis(g)) out.push_back(p);
    return out;
}

GradedVector mode(const Module& m, const Partition& u, long n, const GradedVector& w)
{
    return m.mode(GradedVector(u), n, w);
}

// Y(Y(u)_{n+l} v)_{m+h-l} w summed against binom(m, l), and the two
// ordered-product sums; all three terminate by lower truncation.
void check_borcherds(const Module& mod, const Partition& u, const Partition& v, const Partition& w, long m, long n,
                     long h)
{
    const GradedVector wv(w);
    GradedVector lhs;
    for (long l = 0;; ++l) {
        if (weight(u) + weight(v) - (n + l) - 1 < 0) break;
        GradedVector uv = mode(mod, u, n + l, GradedVector(v));
        if (uv.is_zero()) continue;
        lhs.add_scaled(mod.mode(uv, m + h - l, wv), Scalar(binomial(Rational(m), l)));
    }
    GradedVector rhs;
    for (long l = 0; weight(v) + weight(w) - (h + l) - 1 >= 0; ++l) {
        GradedVector vw = mode(mod, v, h + l, wv);
        Scalar c(binomial(Rational(n), l) * (l % 2 ? -1 : 1));
        rhs.add_scaled(mode(mod, u, m + n - l, vw), c);
    }
    for (long l = 0; weight(u) + weight(w) - (m + l) - 1 >= 0; ++l) {
        GradedVector uw = mode(mod, u, m + l, wv);
        Scalar c(binomial(Rational(n), l) * ((n - l) % 2 ? -1 : 1));
        rhs.add_scaled(mode(mod, v, n + h - l, uw), -c);
    }
    INFO("u=", to_string(u), " v=", to_string(v), " w=", to_string(w), " m=", m, " n=", n, " h=", h);
    CHECK(lhs == rhs);
}

GradedVector random_vector(std::mt19937_64& rng, const Module& m, int max_grade)
{
    std::uniform_int_distribution<long> c(-3, 3);
    GradedVector v;
    for (const auto& p : basis_upto(m, max_grade)) v.add(p, Scalar(c(rng)));
    return v;
}

}  // namespace

TEST_CASE("vacuum acts as the identity field")
{
    auto h = Module::heisenberg(12);
    for (const auto& w : basis_upto(*h, 4)) {
        for (long n = -4; n <= 4; ++n) {
            GradedVector out = h->mode(Partition{}, n, w);
            if (n == -1)
                CHECK(out == GradedVector(w));
            else
                CHECK(out.is_zero());
        }
    }
}

TEST_CASE("heisenberg mode examples")
{
    auto h = Module::heisenberg(12);
    CHECK(h->mode(Partition{1}, 1, Partition{1}) == h->vacuum());
    CHECK(h->mode(Partition{1}, -1, Partition{}) == GradedVector(Partition{1}));
    CHECK(h->mode(Partition{1}, -2, Partition{1}) == GradedVector(Partition{2, 1}));
    // Y(a_{-1}a_{-1}1)_3 a_{-1}a_{-1}1 = 2 (two contractions)
    CHECK(h->mode(Partition{1, 1}, 3, Partition{1, 1}) == GradedVector(Partition{}, Scalar(2)));
    // weight rule: result weight wt(u)+wt(w)-n-1
    for (const auto& u : basis_upto(*h, 3))
        for (const auto& w : basis_upto(*h, 3))
            for (long n = -3; n <= 6; ++n)
                for (const auto& [mono, c] : h->mode(u, n, w)) CHECK(weight(mono) == weight(u) + weight(w) - n - 1);
}

TEST_CASE("virasoro modes on the heisenberg algebra")
{
    auto h = Module::heisenberg(14);
    const GradedVector a(Partition{1});
    for (const auto& w : basis_upto(*h, 5)) {
        const GradedVector wv(w);
        CHECK(h->virasoro(0, wv) == GradedVector(w, Scalar(weight(w))));
        CHECK(h->mode(h->conformal_vector(), 1, wv) == GradedVector(w, Scalar(weight(w))));
    }
    CHECK(h->virasoro(1, a).is_zero());
    CHECK(h->virasoro(-1, a) == GradedVector(Partition{2}));
    CHECK(h->virasoro(2, h->conformal_vector()) == GradedVector(Partition{}, Scalar(q(1, 2))));
    for (const auto& w : basis_upto(*h, 4))
        for (long n = -3; n <= 5; ++n)
            CHECK(h->virasoro(n, GradedVector(w)) == h->mode(h->conformal_vector(), n + 1, GradedVector(w)));
}

TEST_CASE("virasoro bracket relation")
{
    auto check = [](const Module& mod) {
        const Rational c = mod.central_charge();
        for (const auto& p : basis_upto(mod, 4)) {
            const GradedVector w(p);
            for (long m = -4; m <= 4; ++m) {
                for (long n = -4; n <= 4; ++n) {
                    GradedVector lhs = mod.virasoro(m, mod.virasoro(n, w)) - mod.virasoro(n, mod.virasoro(m, w));
                    GradedVector rhs = mod.virasoro(m + n, w) * Scalar(Rational(m - n));
                    if (m + n == 0) rhs.add(p, Scalar(c * Rational(m * m * m - m) / 12));
                    CHECK(lhs == rhs);
                }
            }
        }
    };
    check(*Module::heisenberg(16));
    check(*Module::heisenberg(16, q(3, 2)));
    check(*Module::virasoro(q(1, 2), 16));
    check(*Module::virasoro(q(-22, 5), 16));
}

TEST_CASE("virasoro voa modes match the conformal field")
{
    auto v = Module::virasoro(q(7, 10), 14);
    for (const auto& w : basis_upto(*v, 5))
        for (long n = -3; n <= 5; ++n)
            CHECK(v->mode(Partition{2}, n + 1, w) == v->virasoro(n, GradedVector(w)));
    CHECK(v->virasoro(2, GradedVector(Partition{2})) == GradedVector(Partition{}, Scalar(q(7, 20))));
}

TEST_CASE("borcherds identity on the heisenberg algebra")
{
    auto h = Module::heisenberg(30);
    const auto b = basis_upto(*h, 4);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> idx(-3, 3);
    for (const auto& u : b)
        for (const auto& v : b)
            for (const auto& w : b)
                for (int trial = 0; trial < 2; ++trial) check_borcherds(*h, u, v, w, idx(rng), idx(rng), idx(rng));
}

TEST_CASE("borcherds identity on the virasoro algebra")
{
    auto vir = Module::virasoro(q(1, 2), 26);
    const auto b = basis_upto(*vir, 4);
    for (const auto& u : b)
        for (const auto& v : b)
            for (const auto& w : b)
                for (long m : {-1, 1})
                    for (long n : {-1, 0, 2}) check_borcherds(*vir, u, v, w, m, n, 0);
}

TEST_CASE("skew symmetry")
{
    auto h = Module::heisenberg(20);
    const auto b = basis_upto(*h, 3);
    for (const auto& u : b) {
        for (const auto& v : b) {
            for (long n = -3; n <= 4; ++n) {
                GradedVector lhs = h->mode(u, n, v);
                GradedVector rhs;
                Rational fact = 1;
                for (long j = 0; weight(u) + weight(v) - (n + j) - 1 >= 0; ++j) {
                    if (j > 0) fact *= j;
                    GradedVector term = h->mode(v, n + j, u);
                    for (long i = 0; i < j; ++i) term = h->virasoro(-1, term);
                    rhs.add_scaled(term, Scalar(Rational((n + j + 1) % 2 ? -1 : 1) / fact));
                }
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("lower truncation")
{
    auto h = Module::heisenberg(20, q(1, 3));
    for (const auto& u : basis_upto(*h, 3)) {
        for (const auto& w : basis_upto(*h, 3)) {
            long last_nonzero = -100;
            for (long n = -2; n <= weight(u) + weight(w) + 2; ++n)
                if (!h->mode(u, n, w).is_zero()) last_nonzero = n;
            CHECK(last_nonzero <= weight(u) + weight(w) - 1);
        }
    }
}

TEST_CASE("fock module momentum")
{
    auto f = Module::heisenberg(10, q(2, 3));
    CHECK(f->mode(Partition{1}, 0, Partition{}) == GradedVector(Partition{}, Scalar(q(2, 3))));
    CHECK(f->virasoro(0, f->vacuum()) == GradedVector(Partition{}, Scalar(q(2, 9))));
    CHECK(f->grading_offset() == q(2, 9));
    CHECK_FALSE(f->is_adjoint());
}

TEST_CASE("cutoff overflow is reported")
{
    auto h = Module::heisenberg(4);
    CHECK_THROWS_AS(h->mode(Partition{1}, -5, Partition{}), CutoffOverflow);
    CHECK_THROWS_AS(h->basis(5), CutoffOverflow);
    CHECK_NOTHROW(h->mode(Partition{1}, -4, Partition{}));
    try {
        h->virasoro(-3, GradedVector(Partition{2}));
        FAIL("expected overflow");
    } catch (const CutoffOverflow& e) {
        CHECK(e.weight == 5);
        CHECK(e.cutoff == 4);
    }
}

TEST_CASE("dual pairing")
{
    auto h = Module::heisenberg(8);
    CHECK(h->pairing(h->vacuum(), h->vacuum()) == Scalar(1));
    CHECK(h->pairing(GradedVector(Partition{1}), GradedVector(Partition{1})) == Scalar(1));
    CHECK(h->pairing(GradedVector(Partition{2}), GradedVector(Partition{1, 1})).is_zero());
    CHECK(h->pairing(GradedVector(Partition{1}), h->vacuum()).is_zero());
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        GradedVector w = random_vector(rng, *h, 4), wp = random_vector(rng, *h, 4);
        CHECK(h->pairing(h->L0_tilde(w), wp) == h->pairing(w, h->L0_tilde(wp)));
    }
    CHECK_THROWS_AS(Module::virasoro(1, 8)->pairing(GradedVector(Partition{1}), GradedVector(Partition{1})), MathError);
}

TEST_CASE("tensor power and cyclic permutation")
{
    auto h = Module::heisenberg(12);
    TensorPower t(h, 3);
    const GradedVector a(Partition{1});
    CHECK(t.g(t.in_slot(a, 0)) == t.in_slot(a, 1));
    CHECK(t.g(t.in_slot(a, 2)) == t.in_slot(a, 0));
    CHECK(t.g(t.vacuum()) == t.vacuum());
    CHECK(t.g(t.conformal_vector()) == t.conformal_vector());
    CHECK_THROWS_AS(t.tensor({a, a}), MathError);

    std::mt19937_64 rng(3);
    for (int k = 1; k <= 4; ++k) {
        TensorPower tk(h, k);
        for (int i = 0; i < 50 / 4 + 1; ++i) {
            std::vector<GradedVector> fs;
            for (int j = 0; j < k; ++j) fs.push_back(random_vector(rng, *h, 2));
            TensorVector v = tk.tensor(fs);
            CHECK(tk.g_power(v, k) == v);
            CHECK(tk.g_power(v, -1) == tk.g_power(v, k - 1));
        }
    }
}

TEST_CASE("tensor power modes")
{
    auto h = Module::heisenberg(12);
    TensorPower t(h, 2);
    const GradedVector a(Partition{1}), aa(Partition{1, 1});
    // slotwise action
    CHECK(t.mode(t.in_slot(a, 0), 1, t.tensor({a, a})) == t.in_slot(a, 1));
    CHECK(t.mode(t.in_slot(a, 1), -1, t.vacuum()) == t.in_slot(a, 1));
    CHECK(t.mode(t.tensor({a, a}), -1, t.vacuum()) == t.tensor({a, a}));
    CHECK(t.mode(t.tensor({a, a}), 3, t.tensor({a, a})) == t.vacuum());
    for (int g = 0; g <= 3; ++g)
        for (const auto& key : t.basis(g)) CHECK(t.L0(TensorVector(key)) == TensorVector(key, Scalar(g)));
    CHECK(t.basis(2).size() == 5);
    // g is an automorphism: g(Y(u)_n v) = Y(gu)_n gv
    for (const auto& uk : t.basis(2))
        for (const auto& vk : t.basis(2))
            for (long n = -2; n <= 3; ++n) {
                TensorVector u(uk), v(vk);
                CHECK(t.g(t.mode(u, n, v)) == t.mode(t.g(u), n, t.g(v)));
            }
}
