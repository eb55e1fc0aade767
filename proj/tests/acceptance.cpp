#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "sewprop/cli.hpp"
#include "sewprop/coord_change.hpp"
#include "sewprop/propagate.hpp"
#include "sewprop/residue.hpp"
#include "sewprop/sewing.hpp"
#include "sewprop/twist.hpp"

using namespace sewprop;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = true;
    std::string detail;
};

Rational q(long a, long b = 1) { return make_rational(a, b); }
Scalar sq(long a, long b = 1) { return Scalar(q(a, b)); }

const GradedVector a1(Partition{1});

FracLaurent cst(const Rational& r) { return FracLaurent::constant(Scalar(r), "s"); }

Rational random_rational(std::mt19937_64& rng, bool nonzero)
{
    std::uniform_int_distribution<long> num(-5, 5), den(1, 4);
    for (;;) {
        Rational r = make_rational(num(rng), den(rng));
        if (!nonzero || r != 0) return r;
    }
}

CoordChange random_change(std::mt19937_64& rng, int order)
{
    std::vector<FracLaurent> cs;
    for (int n = 1; n < order; ++n) {
        const Rational r = random_rational(rng, false);
        cs.push_back(r == 0 ? FracLaurent(1, "s") : cst(r));
    }
    return CoordChange(cst(random_rational(rng, true)), cs);
}

std::vector<GradedVector> basis_upto(const Module& m, int grade)
{
    std::vector<GradedVector> out;
    for (int g = 0; g <= grade; ++g)
        for (const auto& p : m.basis(g)) out.emplace_back(p);
    return out;
}

void fold(Verdict& v, const AxiomReport& r, const std::string& what)
{
    if (!r.passed) {
        v.pass = false;
        v.detail += what + " failed: " + r.first_failure + "; ";
    }
}

// 1. U(rho1 o rho2) = U(rho1) U(rho2)
Verdict u_homomorphism()
{
    auto h = Module::heisenberg(8);
    const auto basis = basis_upto(*h, 4);
    std::mt19937_64 rng(101);
    Verdict v;
    std::size_t checked = 0;
    for (int pair = 0; pair < 50; ++pair) {
        const CoordChange r1 = random_change(rng, 8), r2 = random_change(rng, 8);
        const CoordChange both = r1.compose(r2, 8);
        for (const auto& w : basis) {
            ++checked;
            if (both.apply_U_scalar(*h, w) != r1.apply_U_scalar(*h, r2.apply_U_scalar(*h, w))) v.pass = false;
        }
    }
    v.detail = std::to_string(checked) + " vectors over 50 pairs";
    return v;
}

// 2. solve_coefficients o taylor_of = id
Verdict solver_round_trip()
{
    std::mt19937_64 rng(202);
    Verdict v;
    for (int i = 0; i < 100; ++i) {
        const CoordChange r = random_change(rng, 10);
        if (!(CoordChange::solve_coefficients(r.taylor_of()) == r)) v.pass = false;
    }
    v.detail = "100 changes of order 10";
    return v;
}

// 3. untwisted Jacobi on all basis triples of grade <= 3
Verdict untwisted_jacobi()
{
    const TwistedModule t(Module::heisenberg(24), 1);
    const auto basis = basis_upto(*t.algebra(), 3);
    Verdict v;
    std::size_t checked = 0, nonzero = 0;
    for (const auto& u : basis)
        for (const auto& x : basis)
            for (const auto& w : basis) {
                const auto r = check_jacobi(t, t.tensor().in_slot(u, 0), t.tensor().in_slot(x, 0), w, 3);
                checked += r.checked;
                nonzero += r.nonzero;
                fold(v, r, "Jacobi");
            }
    v.detail = std::to_string(basis.size() * basis.size() * basis.size()) + " triples, " + std::to_string(checked) +
               " identities (" + std::to_string(nonzero) + " nonzero)";
    return v;
}

// 4. propagation against the Wick oracle
Verdict propagation_oracle()
{
    auto h = Module::heisenberg(40);
    using C = std::complex<double>;
    // (w, w') pairs with an even number of oscillators overall
    const std::vector<std::pair<Partition, Partition>> ends = {
        {{}, {}}, {{1}, {1}}, {{}, {1, 1}}, {{2}, {1}}, {{1, 1}, {}}, {{2}, {2}}};
    // moduli ratios exactly 1/2 between neighbours
    const std::vector<std::vector<C>> configs = {
        {C(0.25, 0.0), C(0.0, 0.5)},
        {C(-0.3, 0.4), C(0.6, -0.8)},
        {C(0.05, 0.0), C(0.0, 0.1), C(-0.12, 0.16), C(0.4, 0.0)},
        {C(0.1, 0.1), C(-0.2, 0.2), C(0.4, -0.4), C(0.8, 0.8)}};
    Verdict v;
    double worst = 0;
    std::size_t exact_checked = 0;
    for (const auto& [wpart, wppart] : ends) {
        const GradedVector w(wpart), wp(wppart);
        for (int n : {2, 4}) {
            const std::vector<GradedVector> vs(n, a1);
            const Correlator c = heisenberg_correlator(*h, vs, w, wp);
            if (propagate_expand(*h, vs, w, wp, 10) != c.expand_radial(10)) v.pass = false;
            ++exact_checked;
            for (const auto& zs : configs) {
                if (static_cast<int>(zs.size()) != n) continue;
                const C exact = c.evaluate(zs);
                if (std::abs(exact) == 0) continue;
                const auto p = propagate(*h, vs, zs, w, wp, 40);
                worst = std::max(worst, std::abs(p.value - exact) / std::abs(exact));
            }
        }
    }
    if (worst >= 1e-8) v.pass = false;
    char buf[160];
    std::snprintf(buf, sizeof buf, "worst relative error %.3g (< 1e-8), %zu exact expansions through degree 10", worst,
                  exact_checked);
    v.detail = buf;
    return v;
}

// 5. residue criterion fixtures
Verdict residue_fixtures()
{
    const std::vector<MarkedPoint> pts{MarkedPoint::finite(Scalar(0)), MarkedPoint::infinity()};
    auto series = [](std::initializer_list<std::pair<long, long>> terms) {
        FracLaurent f(1, "z");
        for (const auto& [e, c] : terms) f.add_term(Rational(e), Scalar(c));
        f.truncate(Rational(6));
        return f;
    };
    struct Fixture {
        const char* name;
        std::vector<FracLaurent> data;
        bool expected;
    };
    const std::vector<Fixture> fixtures = {{"constant", {series({{0, 1}}), series({{0, 1}})}, true},
                                           {"1/zeta", {series({{-1, 1}}), series({{1, 1}})}, true},
                                           {"perturbed", {series({{0, 1}}), series({{0, 1}, {1, 1}})}, false}};
    Verdict v;
    for (const auto& f : fixtures) {
        const bool passed = residue_criterion(pts, f.data, 4).passed;
        if (passed != f.expected) {
            v.pass = false;
            v.detail += std::string(f.name) + " misclassified; ";
        }
        const auto g = reconstruct_global(pts, f.data, 2);
        if (g.has_value() != f.expected) v.pass = false;
        if (g)
            for (std::size_t j = 0; j < f.data.size(); ++j)
                if (!(g->expand_at(j, 6) == f.data[j])) v.pass = false;
    }
    if (v.pass) v.detail = "constant and 1/zeta glue, perturbed fails, reconstructions re-expand exactly";
    return v;
}

// 6. sewing commutes with propagation
Verdict sew_commute()
{
    auto h = Module::heisenberg(24);
    GradedVector wp(Partition{1});
    wp.add(Partition{2}, sq(-2));
    wp.add(Partition{1, 1}, sq(3));
    wp.add(Partition{2, 1}, sq(1, 2));
    wp.add(Partition{3, 1}, sq(5));
    Verdict v;
    std::size_t coefficients = 0;
    struct Case {
        GradedVector w_in;
        std::vector<GradedVector> vs;
        std::vector<Scalar> ys;
    };
    const std::vector<Case> cases = {{a1, {}, {}},
                                     {a1, {a1}, {sq(1, 2)}},
                                     {h->vacuum(), {a1, a1}, {sq(2, 3), sq(-1, 4)}},
                                     {GradedVector(Partition{1, 1}), {GradedVector(Partition{2})}, {sq(-1, 3)}}};
    for (const auto& c : cases) {
        const SewingSetup setup{h, c.w_in, a1, wp, std::nullopt};
        const auto r = sew_propagate_commute_check(setup, c.vs, c.ys, 8, 24);
        if (!r.passed) {
            v.pass = false;
            v.detail += "n = " + std::to_string(c.vs.size()) + " disagrees; ";
        }
        for (const auto& [n, f] : r.lhs) coefficients += f.size();
    }
    if (coefficients == 0) v.pass = false;
    v.detail += "n = 0, 1, 2 through q^8, " + std::to_string(coefficients) + " nonzero coefficients";
    return v;
}

// 7. twisted module axioms for k = 2, 3
Verdict twisted_axioms()
{
    Verdict v;
    std::size_t checked = 0;
    for (int k : {2, 3}) {
        const TwistedModule t(Module::heisenberg(30), k);
        const auto vs = basis_upto(*t.algebra(), 4);
        const auto ws = basis_upto(t.module(), 2);
        std::vector<TensorVector> us;
        for (const auto& x : vs)
            for (int slot = 0; slot < k; ++slot) us.push_back(t.tensor().in_slot(x, slot));
        const auto grading = check_grading(t, us, ws, q(2));
        const auto equivariance = check_equivariance(t, us, ws, ws);
        const auto wps = basis_upto(t.module(), 4);
        const auto paths = check_paths(t, vs, wps, wps);
        fold(v, grading, "grading k=" + std::to_string(k));
        fold(v, equivariance, "equivariance k=" + std::to_string(k));
        fold(v, paths, "paths k=" + std::to_string(k));
        checked += grading.checked + equivariance.checked + paths.checked;

        const TensorVector u = t.tensor().in_slot(a1, 0);
        const auto jacobi = k == 2 ? check_jacobi(t, u, u, t.module().vacuum(), 3)
                                   : check_jacobi(t, u, t.tensor().in_slot(GradedVector(Partition{2}), 1), a1, 2);
        fold(v, jacobi, "Jacobi k=" + std::to_string(k));
        checked += jacobi.checked;
    }
    v.detail += std::to_string(checked) + " identities";
    return v;
}

// 8. factorization through the intermediate grades
Verdict factorization()
{
    Verdict v;
    double worst = 0;
    GradedVector wp(Partition{1}, sq(1));
    wp.add(Partition{1, 1}, sq(2));
    const std::vector<std::pair<std::complex<double>, std::complex<double>>> points{
        {{1.0 / 100, 0}, {1, 0}}, {{-1.0 / 50, 0}, {2.0 / 3, 0}}, {{1.0 / 40, 0}, {-3.0 / 4, 0}}};
    for (int k : {2, 3}) {
        const TwistedModule t(Module::heisenberg(46), k);
        const TensorVector u = t.tensor().in_slot(a1, 0), x = t.tensor().in_slot(a1, 1);
        for (const auto& [z, xi] : points) {
            const auto r = factorization_check(t, u, x, a1, wp, z, xi, 40);
            if (!std::isfinite(r.relative_error) || std::abs(r.oracle) == 0) v.pass = false;
            worst = std::max(worst, r.relative_error);
        }
    }
    if (worst >= 1e-8) v.pass = false;
    char buf[120];
    std::snprintf(buf, sizeof buf, "worst relative error %.3g (< 1e-8) at shell cutoff 40, k = 2, 3", worst);
    v.detail = buf;
    return v;
}

// 9. exact CLI outputs across thread counts
Verdict determinism()
{
    std::vector<RunConfig> suite;
    auto add = [&](const std::string& command, const std::function<void(RunConfig&)>& edit) {
        RunConfig c;
        c.command = command;
        edit(c);
        suite.push_back(c);
    };
    add("uc-solve", [](RunConfig& c) { c.taylor = {q(2), q(-1, 3), q(5, 7), q(1), q(-2)}; });
    add("propagate", [](RunConfig& c) {
        c.insertions = {{1}, {2}, {1, 1}};
        c.points = {q(1, 4), q(1, 2), q(1)};
        c.w = {1};
        c.wp = {1};
        c.cutoff_q = 4;
        c.cutoff_grade = 20;
    });
    add("residue-check", [](RunConfig& c) { c.fixture = "all"; });
    add("sew", [](RunConfig& c) {
        c.w = {1};
        c.wp = {1};
        c.outer = OuterInsertion{{1}, q(2)};
        c.cutoff_q = 12;
        c.cutoff_grade = 16;
    });
    add("commute-check", [](RunConfig& c) {
        c.insertions = {{1}, {1}};
        c.points = {q(2, 3), q(-1, 4)};
        c.wp = {2};
    });
    add("twist-check", [](RunConfig& c) {
        c.k = 3;
        c.grade = 3;
        c.range = 2;
    });
    add("twist-modes", [](RunConfig& c) {
        c.k = 3;
        c.grade = 3;
        c.insertions = {{1}, {}, {2}};
    });
    add("jacobi-check", [](RunConfig& c) {
        c.grade = 2;
        c.range = 3;
    });
    Verdict v;
    for (auto& c : suite) {
        std::string reference;
        for (int threads : {1, 4, 8}) {
            c.threads = threads;
            std::ostringstream out, err;
            const int status = run(c, out, err);
            if (status != 0) {
                v.pass = false;
                v.detail += c.command + " exited " + std::to_string(status) + "; ";
            }
            if (threads == 1)
                reference = out.str();
            else if (out.str() != reference) {
                v.pass = false;
                v.detail += c.command + " differs at " + std::to_string(threads) + " threads; ";
            }
        }
    }
    v.detail += std::to_string(suite.size()) + " subcommands at 1, 4 and 8 threads";
    return v;
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        Verdict (*fn)();
        double limit_seconds;  // 0 when no runtime bound applies
    };
    const Criterion criteria[] = {
        {1, "U homomorphism", u_homomorphism, 10},
        {2, "coefficient solver round trip", solver_round_trip, 0},
        {3, "untwisted Jacobi", untwisted_jacobi, 60},
        {4, "propagation vs Wick oracle", propagation_oracle, 0},
        {5, "residue criterion fixtures", residue_fixtures, 0},
        {6, "sewing commutes with propagation", sew_commute, 300},
        {7, "twisted module axioms", twisted_axioms, 0},
        {8, "factorization convergence", factorization, 0},
        {9, "determinism across threads", determinism, 0},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = Clock::now();
        Verdict v;
        try {
            v = c.fn();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("threw: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        char timing[64];
        if (c.limit_seconds > 0) {
            std::snprintf(timing, sizeof timing, "%.2f s < %.0f s", seconds, c.limit_seconds);
            if (seconds >= c.limit_seconds) v.pass = false;
        } else {
            std::snprintf(timing, sizeof timing, "%.2f s", seconds);
        }
        std::printf("criterion %d: %s  %s [%s] %s\n", c.id, v.pass ? "PASS" : "FAIL", c.name, timing, v.detail.c_str());
        std::fflush(stdout);
        failed += !v.pass;
    }
    return failed == 0 ? 0 : 1;
}
