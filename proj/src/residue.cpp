#include "sewprop/residue.hpp"

#include <sstream>

#include "sewprop/linalg.hpp"

namespace sewprop {

namespace {

enum class Basis { constant, pole, power };

struct BasisFunction {
    Basis kind;
    int point;  // for poles
    int power;  // pole order or polynomial degree
};

// Local expansion of a basis function at points[at], exponents < order.
FracLaurent expand_function(const std::vector<MarkedPoint>& points, std::size_t at, const BasisFunction& f,
                            long order, const std::string& var)
{
    FracLaurent out(1, var);
    const MarkedPoint& p = points.at(at);
    switch (f.kind) {
    case Basis::constant:
        if (order > 0) out.add_term(Rational(0), Scalar(1));
        break;
    case Basis::pole: {
        const Scalar& xj = *points.at(f.point).x;
        const int m = f.power;
        if (p.at_infinity()) {
            // w^m (1 - x_j w)^{-m}
            for (long l = 0; m + l < order; ++l)
                out.add_term(Rational(m + l), Scalar(binomial(Rational(m + l - 1), l)) * pow(xj, l));
        } else if (static_cast<int>(at) == f.point) {
            if (-m < order) out.add_term(Rational(-m), Scalar(1));
        } else {
            const Scalar c = *p.x - xj;
            for (long l = 0; l < order; ++l) out.add_term(Rational(l), Scalar(binomial(Rational(-m), l)) * pow(c, -m - l));
        }
        break;
    }
    case Basis::power: {
        const int d = f.power;
        if (p.at_infinity()) {
            if (-d < order) out.add_term(Rational(-d), Scalar(1));
        } else {
            for (long l = 0; l <= d && l < order; ++l)
                out.add_term(Rational(l), Scalar(binomial(Rational(d), l)) * pow(*p.x, d - l));
        }
        break;
    }
    }
    out.truncate(Rational(order));
    return out;
}

// f(zeta) d zeta in the local coordinate at points[at]; exponents < order
FracLaurent expand_form(const std::vector<MarkedPoint>& points, std::size_t at,
                        const std::vector<std::pair<BasisFunction, Scalar>>& form, long order, const std::string& var)
{
    const bool inf = points.at(at).at_infinity();
    FracLaurent out(1, var);
    for (const auto& [f, c] : form) out += expand_function(points, at, f, inf ? order + 2 : order, var) * c;
    if (inf) out *= FracLaurent::monomial(Scalar(-1), -2L, var);  // d zeta = -w^{-2} dw
    return out;
}

std::vector<std::vector<std::pair<BasisFunction, Scalar>>> spanning_forms(const std::vector<MarkedPoint>& points,
                                                                           int k)
{
    std::vector<std::vector<std::pair<BasisFunction, Scalar>>> forms;
    bool inf_marked = false;
    std::vector<int> finite;
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (points[j].at_infinity())
            inf_marked = true;
        else
            finite.push_back(static_cast<int>(j));
    }
    for (int j : finite)
        for (int m = 2; m <= k; ++m) forms.push_back({{{Basis::pole, j, m}, Scalar(1)}});
    if (k >= 1) {
        if (inf_marked) {
            for (int j : finite) forms.push_back({{{Basis::pole, j, 1}, Scalar(1)}});
        } else {
            for (std::size_t i = 1; i < finite.size(); ++i)
                forms.push_back({{{Basis::pole, finite[i], 1}, Scalar(1)}, {{Basis::pole, finite[0], 1}, Scalar(-1)}});
        }
    }
    if (inf_marked) {
        // zeta^d d zeta has a pole of order d + 2 at infinity
        if (k >= 2) forms.push_back({{{Basis::constant, -1, 0}, Scalar(1)}});
        for (int d = 1; d <= k - 2; ++d) forms.push_back({{{Basis::power, -1, d}, Scalar(1)}});
    }
    return forms;
}

void check_points(const std::vector<MarkedPoint>& points, std::size_t series_count)
{
    if (points.size() != series_count) throw MathError("need one series per marked point");
    int inf = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].at_infinity()) {
            ++inf;
            continue;
        }
        for (std::size_t j = 0; j < i; ++j)
            if (!points[j].at_infinity() && *points[j].x == *points[i].x) throw MathError("marked points coincide");
    }
    if (inf > 1) throw MathError("infinity marked twice");
}

void check_series(const FracLaurent& s, long needed)
{
    if (s.denominator() != 1) throw MathError("local data must have integer exponents");
    if (s.lower_order()) throw MathError("local data must be bounded below");
    if (s.order() && *s.order() < needed)
        throw MathError("local series known below order " + sewprop::to_string(*s.order()) + " but order " +
                        std::to_string(needed) + " is needed to pair against the deepest pole");
}

}  // namespace

ResidueReport residue_criterion(const std::vector<MarkedPoint>& points, const std::vector<FracLaurent>& series,
                                int dual_pole_bound)
{
    std::vector<std::vector<FracLaurent>> wrapped;
    for (const auto& s : series) wrapped.push_back({s});
    return residue_criterion(points, wrapped, dual_pole_bound);
}

ResidueReport residue_criterion(const std::vector<MarkedPoint>& points,
                                const std::vector<std::vector<FracLaurent>>& series, int dual_pole_bound)
{
    check_points(points, series.size());
    if (dual_pole_bound < 1) throw MathError("dual pole bound must be positive");
    const std::size_t r = series.empty() ? 0 : series.front().size();
    for (const auto& comp : series) {
        if (comp.size() != r) throw MathError("every marked point needs the same number of components");
        for (const auto& s : comp) check_series(s, dual_pole_bound);
    }
    ResidueReport report;
    const auto forms = spanning_forms(points, dual_pole_bound);
    report.forms_checked = forms.size();
    for (const auto& form : forms) {
        for (std::size_t c = 0; c < r; ++c) {
            Scalar total(0);
            for (std::size_t j = 0; j < points.size(); ++j) {
                const FracLaurent& s = series[j][c];
                if (s.is_zero()) continue;
                const long val = to_long(*s.valuation());
                FracLaurent sigma = expand_form(points, j, form, -val, s.var());
                for (const auto& [e, coeff] : s.terms()) {
                    if (e > dual_pole_bound - 1) break;
                    total += coeff * sigma.coeff(Rational(-1 - e));
                }
            }
            report.pairings.push_back(total);
            if (!total.is_zero()) report.passed = false;
        }
    }
    return report;
}

FracLaurent GlobalFunction::expand_at(std::size_t j, long order) const
{
    FracLaurent out(1, "z");
    out += expand_function(points, j, {Basis::constant, -1, 0}, order, "z") * constant;
    for (const auto& [key, c] : principal) out += expand_function(points, j, {Basis::pole, key.first, key.second}, order, "z") * c;
    for (std::size_t d = 0; d < polynomial.size(); ++d)
        out += expand_function(points, j, {Basis::power, -1, static_cast<int>(d) + 1}, order, "z") * polynomial[d];
    out.truncate(Rational(order));
    return out;
}

Scalar GlobalFunction::evaluate(const Scalar& zeta) const
{
    Scalar v = constant;
    for (const auto& [key, c] : principal) v += c * pow(zeta - *points[key.first].x, -key.second);
    for (std::size_t d = 0; d < polynomial.size(); ++d) v += polynomial[d] * pow(zeta, static_cast<long>(d) + 1);
    return v;
}

std::string GlobalFunction::to_string() const
{
    std::ostringstream os;
    os << constant.to_string();
    for (const auto& [key, c] : principal)
        if (!c.is_zero()) os << " + (" << c.to_string() << ")(zeta - " << points[key.first].x->to_string() << ")^-" << key.second;
    for (std::size_t d = 0; d < polynomial.size(); ++d)
        if (!polynomial[d].is_zero()) os << " + (" << polynomial[d].to_string() << ")zeta^" << d + 1;
    return os.str();
}

std::optional<GlobalFunction> reconstruct_global(const std::vector<MarkedPoint>& points,
                                                 const std::vector<FracLaurent>& series, int pole_bound)
{
    check_points(points, series.size());
    if (pole_bound < 0) throw MathError("pole bound must be nonnegative");
    std::vector<BasisFunction> unknowns{{Basis::constant, -1, 0}};
    bool inf_marked = false;
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (points[j].at_infinity()) {
            inf_marked = true;
            continue;
        }
        for (int m = 1; m <= pole_bound; ++m) unknowns.push_back({Basis::pole, static_cast<int>(j), m});
    }
    if (inf_marked)
        for (int d = 1; d <= pole_bound; ++d) unknowns.push_back({Basis::power, -1, d});

    Matrix rows;
    std::vector<Scalar> rhs;
    for (std::size_t j = 0; j < points.size(); ++j) {
        const FracLaurent& s = series[j];
        check_series(s, 0);
        if (s.valuation() && *s.valuation() < -pole_bound) return std::nullopt;
        long hi;
        if (s.order())
            hi = to_long(*s.order());
        else
            hi = (s.top() ? to_long(*s.top()) : 0) + pole_bound + 2;
        std::vector<FracLaurent> basis_exp;
        for (const auto& u : unknowns) basis_exp.push_back(expand_function(points, j, u, hi, s.var()));
        for (long e = -pole_bound; e < hi; ++e) {
            std::vector<Scalar> row;
            for (const auto& b : basis_exp) row.push_back(b.coeff(Rational(e)));
            rows.push_back(std::move(row));
            rhs.push_back(s.coeff(Rational(e)));
        }
    }
    LinearSolution sol = solve_linear(rows, rhs);
    if (sol.status == LinearSolution::Status::inconsistent) return std::nullopt;
    if (sol.status == LinearSolution::Status::underdetermined)
        throw MathError("local data do not determine a unique global function");

    GlobalFunction g;
    g.points = points;
    g.constant = sol.x[0];
    if (inf_marked) g.polynomial.assign(pole_bound, Scalar(0));
    for (std::size_t u = 1; u < unknowns.size(); ++u) {
        const auto& b = unknowns[u];
        if (b.kind == Basis::pole) {
            if (!sol.x[u].is_zero()) g.principal[{b.point, b.power}] = sol.x[u];
        } else {
            g.polynomial[b.power - 1] = sol.x[u];
        }
    }
    while (!g.polynomial.empty() && g.polynomial.back().is_zero()) g.polynomial.pop_back();
    return g;
}

}  // namespace sewprop
