#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "sewprop/propagate.hpp"
#include "sewprop/sewing.hpp"

using namespace sewprop;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }
Scalar sq(long a, long b = 1) { return Scalar(q(a, b)); }

const GradedVector a1(Partition{1});

Matrix random_invertible(std::mt19937& rng, std::size_t n)
{
    std::uniform_int_distribution<int> d(-3, 3);
    for (;;) {
        Matrix a(n, std::vector<Scalar>(n));
        for (auto& row : a)
            for (auto& x : row) x = Scalar(d(rng));
        std::vector<Scalar> zero(n, Scalar(0));
        if (solve_linear(a, zero).status == LinearSolution::Status::unique) return a;
    }
}

GradedVector mixed_dual()
{
    GradedVector wp;
    wp.add(Partition{1}, sq(1));
    wp.add(Partition{2}, sq(-2));
    wp.add(Partition{1, 1}, sq(3));
    wp.add(Partition{2, 1}, sq(1, 2));
    wp.add(Partition{3, 1}, sq(5));
    wp.add(Partition{2, 2}, sq(-1, 3));
    return wp;
}

}  // namespace

TEST_CASE("casimir shells pair dually")
{
    auto h = Module::heisenberg(12);
    std::mt19937 rng(11);
    for (int n = 0; n <= 6; ++n) {
        CHECK(CasimirShell::standard(*h, n).is_dual(*h));
        const auto a = random_invertible(rng, h->basis(n).size());
        CHECK(CasimirShell::changed(*h, n, a).is_dual(*h));
    }
}

TEST_CASE("sewing a contracted pairing gives q to the weight")
{
    auto h = Module::heisenberg(12);
    for (int g = 0; g <= 4; ++g)
        for (const auto& p : h->basis(g)) {
            const GradedVector w(p);
            GradedVector wp(p, sq(3));
            wp.add(Partition{1}, sq(1));
            // psi(w . m . m') = tau(m . wp) tau(w . m')
            SewingFunctional psi = [&](const GradedVector& m, const GradedVector& md) {
                return h->pairing(m, wp) * h->pairing(w, md);
            };
            const QSeries s = sew(*h, psi, 8);
            CHECK(s.series == FracLaurent::monomial(h->pairing(w, wp), static_cast<long>(g), "q").truncate(Rational(9)));
        }
}

TEST_CASE("sewing over the trivial module is constant in q")
{
    auto h = Module::heisenberg(4);
    CasimirShell one;
    one.pairs.emplace_back(h->vacuum(), h->vacuum());
    SewingFunctional psi = [](const GradedVector& m, const GradedVector& md) {
        return Scalar(7) * Scalar(m.coeff(Partition{})) * Scalar(md.coeff(Partition{}));
    };
    const QSeries s = sew(psi, {one});
    CHECK(s.series == FracLaurent::constant(Scalar(7), "q").truncate(Rational(1)));
}

TEST_CASE("sewing the three-point block reproduces the graded mode sum")
{
    auto h = Module::heisenberg(14);
    const GradedVector wp = mixed_dual();
    std::vector<GradedVector> us{a1, GradedVector(Partition{2}), GradedVector(Partition{1, 1})};
    for (const auto& u : us)
        for (int g = 0; g <= 2; ++g)
            for (const auto& p : h->basis(g)) {
                const GradedVector w(p);
                SewingSetup setup{h, w, u, wp, std::nullopt};
                const QSeries s = sew(*h, sewing_functional(setup), 10);
                FracLaurent expected(1, "q");
                const int wu = homogeneous_weight(u);
                for (long n = -6; n <= 6; ++n) {
                    const long e = wu + g - n - 1;
                    if (e < 0 || e > 10) continue;
                    expected.add_term(Rational(e), h->pairing(h->mode(u, n, w), wp));
                }
                expected.truncate(Rational(11));
                CHECK(s.series == expected);
                for (const auto& [e, c] : s.series.terms()) CHECK(e >= 0);
            }
}

TEST_CASE("sewing does not depend on the basis of the sewn module")
{
    auto h = Module::heisenberg(12);
    std::mt19937 rng(5);
    GradedVector w(Partition{1}, sq(2));
    w.add(Partition{2, 1}, sq(-1));
    SewingSetup setup{h, w, GradedVector(Partition{1}), mixed_dual(), std::make_pair(a1, sq(3, 2))};
    const auto psi = sewing_functional(setup);
    std::vector<CasimirShell> changed;
    for (int n = 0; n <= 7; ++n) changed.push_back(CasimirShell::changed(*h, n, random_invertible(rng, h->basis(n).size())));
    CHECK(sew(psi, changed).series == sew(*h, psi, 7).series);
}

TEST_CASE("convergence diagnostics")
{
    SUBCASE("geometric series")
    {
        QSeries s;
        s.cutoff = 30;
        for (int n = 0; n <= 30; ++n) s.series.add_term(Rational(n), Scalar(q(1, 3)) * pow(sq(1, 3), n - 1));
        const auto r = converge_diag(s, {1.0, 0.0});
        CHECK(std::abs(r.radius - 3.0) < 0.15);
        for (double x : r.ratios) CHECK(std::abs(x - 1.0 / 3) < 1e-12);
        CHECK(std::abs(r.partial_sums.back() - std::complex<double>(1.5, 0)) < 1e-12);
    }
    SUBCASE("vanishing tail")
    {
        QSeries s;
        s.cutoff = 20;
        s.series.add_term(Rational(0), sq(1));
        s.series.add_term(Rational(3), sq(2));
        CHECK(std::isinf(converge_diag(s, {0.5, 0.0}).radius));
    }
    SUBCASE("three-point block with an outer insertion")
    {
        auto h = Module::heisenberg(44);
        GradedVector wp(Partition{1}, sq(1));
        wp.add(Partition{1, 1}, sq(2));
        const Scalar x = sq(2);
        SewingSetup setup{h, a1, a1, wp, std::make_pair(a1, x)};
        const QSeries s = sew(*h, sewing_functional(setup), 40);
        const auto r = converge_diag(s, {1.0, 0.0});
        REQUIRE(r.ratios.size() > 10);
        for (std::size_t i = r.ratios.size() - 10; i < r.ratios.size(); ++i) CHECK(r.ratios[i] < 0.6);
        // the limit at q = 1 is <Y(a, 2) Y(a, 1) a, w'>
        const Correlator c = heisenberg_correlator(*h, {a1, a1}, a1, wp);
        const auto exact = c.evaluate(std::vector<Scalar>{sq(1), x}).to_complex();
        CHECK(std::abs(r.partial_sums.back() - exact) < 1e-8 * std::abs(exact));
        CHECK(r.radius > 1.5);
        CHECK(r.radius < 2.5);
    }
}

TEST_CASE("commute check without insertions is the sewing series")
{
    auto h = Module::heisenberg(24);
    GradedVector w(Partition{1});
    w.add(Partition{2}, sq(1, 2));
    SewingSetup setup{h, w, GradedVector(Partition{1, 1}), mixed_dual(), std::nullopt};
    const auto report = sew_propagate_commute_check(setup, {}, {}, 8, 24);
    CHECK(report.passed);
    CHECK(report.max_discrepancy == 0);
    const QSeries s = sew(*h, sewing_functional(setup), 8);
    FracLaurent from_check(1, "q");
    for (const auto& [n, f] : report.lhs)
        for (const auto& [key, c] : specialize_to_one(f, 0)) {
            CHECK(key.empty());
            from_check.add_term(Rational(n), c);
        }
    from_check.truncate(Rational(9));
    CHECK(from_check == s.series);
    CHECK(report.lhs.size() >= 2);
}

TEST_CASE("commute check with a vacuum insertion reduces to no insertion")
{
    auto h = Module::heisenberg(24);
    SewingSetup setup{h, a1, a1, mixed_dual(), std::nullopt};
    const auto none = sew_propagate_commute_check(setup, {}, {}, 8, 24);
    const auto vac = sew_propagate_commute_check(setup, {h->vacuum()}, {sq(1, 2)}, 8, 24);
    CHECK(vac.passed);
    REQUIRE(vac.lhs.size() == none.lhs.size());
    for (const auto& [n, f] : vac.lhs) CHECK(specialize_to_one(f, 0) == none.lhs.at(n));
}

TEST_CASE("sewing commutes with propagation")
{
    auto h = Module::heisenberg(24);
    const GradedVector wp = mixed_dual();
    SUBCASE("one insertion")
    {
        SewingSetup setup{h, a1, a1, wp, std::nullopt};
        const auto r = sew_propagate_commute_check(setup, {a1}, {sq(1, 2)}, 8, 24);
        CHECK(r.passed);
        CHECK(r.max_discrepancy == 0);
        CHECK(r.lhs.size() >= 2);
    }
    SUBCASE("one descendant insertion with an insertion on C")
    {
        SewingSetup setup{h, GradedVector(Partition{1, 1}), a1, wp, std::make_pair(a1, sq(3))};
        const auto r = sew_propagate_commute_check(setup, {GradedVector(Partition{2})}, {sq(-1, 3)}, 6, 20);
        CHECK(r.passed);
        CHECK(r.lhs.size() >= 5);
    }
    SUBCASE("two insertions")
    {
        SewingSetup setup{h, h->vacuum(), a1, wp, std::nullopt};
        const auto r = sew_propagate_commute_check(setup, {a1, a1}, {sq(2, 3), sq(-1, 4)}, 8, 24);
        CHECK(r.passed);
        CHECK(r.radial_order == std::vector<std::size_t>{1, 0});
        CHECK_FALSE(r.lhs.empty());
    }
    SUBCASE("a wrong sewn block is detected")
    {
        SewingSetup setup{h, a1, a1, wp, std::nullopt};
        auto r = sew_propagate_commute_check(setup, {a1}, {sq(1, 2)}, 8, 24);
        REQUIRE_FALSE(r.lhs.empty());
        auto& f = r.lhs.begin()->second;
        f.begin()->second += sq(1);
        CHECK(f != r.rhs[r.lhs.begin()->first]);
    }
}

TEST_CASE("commute check rejects bad configurations")
{
    auto h = Module::heisenberg(24);
    SewingSetup setup{h, a1, a1, mixed_dual(), std::nullopt};
    CHECK_THROWS_AS(sew_propagate_commute_check(setup, {a1}, {sq(3, 2)}, 4, 20), MathError);
    CHECK_THROWS_AS(sew_propagate_commute_check(setup, {a1, a1}, {sq(1, 2), sq(-1, 2)}, 4, 20), MathError);
    CHECK_THROWS_AS(sew_propagate_commute_check(setup, {a1}, {sq(1, 2)}, 8, 10), CutoffOverflow);
    CHECK_THROWS_AS(sew_propagate_commute_check(setup, {a1}, {sq(1, 2)}, 8, 30), CutoffOverflow);
    setup.outer = std::make_pair(a1, sq(1, 2));
    CHECK_THROWS_AS(sew_propagate_commute_check(setup, {}, {}, 4, 20), MathError);
    auto vir = Module::virasoro(q(1, 2), 12);
    SewingSetup vsetup{vir, vir->vacuum(), vir->vacuum(), vir->vacuum(), std::nullopt};
    CHECK_THROWS_AS(sew_propagate_commute_check(vsetup, {}, {}, 4, 8), Unsupported);
}
