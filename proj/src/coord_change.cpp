#include "sewprop/coord_change.hpp"

#include <algorithm>
#include <sstream>

namespace sewprop {

namespace {

using Poly = std::vector<FracLaurent>;  // index = degree in z

FracLaurent zero(const std::string& var) { return FracLaurent(1, var); }

Rational exponent_of(long numerator, int k) { return make_rational(numerator, k); }

// exp(sum_n c_n z^{n+1} d/dz) z through z^max_degree; cs[i] = c_{i+1}
Poly exp_flow(const std::vector<FracLaurent>& cs, const std::string& var, int max_degree)
{
    Poly result(max_degree + 1, zero(var));
    if (max_degree >= 1) result[1] = FracLaurent::constant(Scalar(1), var);
    Poly term = result;
    for (int j = 1; j < max_degree; ++j) {
        Poly next(max_degree + 1, zero(var));
        bool any = false;
        for (int d = 1; d <= max_degree; ++d) {
            if (term[d].is_zero()) continue;
            for (std::size_t i = 0; i < cs.size(); ++i) {
                const int n = static_cast<int>(i) + 1;
                if (d + n > max_degree) break;
                if (cs[i].is_zero()) continue;
                next[d + n] += term[d] * cs[i] * Scalar(make_rational(d, j));
                any = true;
            }
        }
        if (!any) break;
        term = std::move(next);
        for (int d = 0; d <= max_degree; ++d) result[d] += term[d];
    }
    return result;
}

Poly mul_trunc(const Poly& a, const Poly& b, int max_degree, const std::string& var)
{
    Poly out(max_degree + 1, zero(var));
    for (std::size_t i = 0; i < a.size() && static_cast<int>(i) <= max_degree; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && static_cast<int>(i + j) <= max_degree; ++j) {
            if (b[j].is_zero()) continue;
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

const std::string& taylor_var(const Taylor& t)
{
    if (t.empty()) throw MathError("empty Taylor data");
    return t.front().var();
}

FracLaurent invert_leading(const FracLaurent& a1)
{
    if (a1.is_zero()) throw MathError("leading Taylor coefficient is zero: not a coordinate");
    if (!a1.is_monomial() || !a1.is_exact())
        throw MathError("leading Taylor coefficient must be an exact monomial, got " + a1.to_string());
    return a1.pow(-1);
}

bool all_zero(const std::vector<FracLaurent>& v)
{
    return std::all_of(v.begin(), v.end(), [](const FracLaurent& f) { return f.is_zero(); });
}

}  // namespace

ParamVector::ParamVector(const GradedVector& v, std::string var) : var_(std::move(var))
{
    if (!v.is_zero()) terms_.emplace(Rational(0), v);
}

void ParamVector::add(const Rational& exponent, const GradedVector& v, const Scalar& c)
{
    if (v.is_zero() || c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(exponent, GradedVector());
    it->second.add_scaled(v, c);
    if (it->second.is_zero()) terms_.erase(it);
}

void ParamVector::add_scaled(const ParamVector& o, const FracLaurent& c)
{
    if (c.var() != var_ || o.var_ != var_) throw MathError("parameter mismatch between " + var_ + " and " + c.var());
    for (const auto& [e, v] : o.terms_)
        for (const auto& [n, a] : c.terms()) add(e + exponent_of(n, c.denominator()), v, a);
}

GradedVector ParamVector::at(const Rational& exponent) const
{
    auto it = terms_.find(exponent);
    return it == terms_.end() ? GradedVector() : it->second;
}

GradedVector ParamVector::constant() const
{
    for (const auto& [e, v] : terms_)
        if (e != 0) throw MathError("vector depends on the parameter " + var_);
    return at(Rational(0));
}

Taylor compose_taylor(const Taylor& outer, const Taylor& inner, int order)
{
    const std::string& var = taylor_var(outer);
    Poly g(order + 1, zero(var));
    for (int d = 1; d <= order && d <= static_cast<int>(inner.size()); ++d) g[d] = inner[d - 1];
    Poly result(order + 1, zero(var));
    Poly power = g;
    for (int j = 1; j <= order && j <= static_cast<int>(outer.size()); ++j) {
        if (j > 1) power = mul_trunc(power, g, order, var);
        if (outer[j - 1].is_zero()) continue;
        for (int d = 0; d <= order; ++d)
            if (!power[d].is_zero()) result[d] += outer[j - 1] * power[d];
    }
    return Taylor(result.begin() + 1, result.end());
}

Taylor reverse_taylor(const Taylor& f)
{
    const int order = static_cast<int>(f.size());
    const FracLaurent inv = invert_leading(f.front());
    Taylor g(order, zero(f.front().var()));
    g[0] = inv;
    for (int m = 2; m <= order; ++m) {
        Taylor partial(g.begin(), g.begin() + m);
        Taylor fg = compose_taylor(f, partial, m);
        g[m - 1] = -(fg[m - 1] * inv);
    }
    return g;
}

Taylor scalar_taylor(const std::vector<Scalar>& coeffs, const std::string& var)
{
    Taylor out;
    for (const auto& c : coeffs) out.push_back(c.is_zero() ? zero(var) : FracLaurent::constant(c, var));
    return out;
}

CoordChange::CoordChange(FracLaurent c0, std::vector<FracLaurent> cs, bool exact_tail)
    : c0_(std::move(c0)), cs_(std::move(cs)), exact_tail_(exact_tail)
{
    if (c0_.is_zero()) throw MathError("c0 must be nonzero");
    for (const auto& c : cs_)
        if (c.var() != c0_.var()) throw MathError("coordinate change coefficients use mixed parameters");
}

CoordChange CoordChange::identity(int order, const std::string& var)
{
    return dilation(FracLaurent::constant(Scalar(1), var), order);
}

CoordChange CoordChange::dilation(const FracLaurent& c0, int order)
{
    if (order < 1) throw MathError("order must be at least 1");
    return CoordChange(c0, std::vector<FracLaurent>(order - 1, zero(c0.var())), true);
}

CoordChange CoordChange::solve_coefficients(const Taylor& taylor)
{
    const std::string& var = taylor_var(taylor);
    const int order = static_cast<int>(taylor.size());
    const FracLaurent inv = invert_leading(taylor.front());
    std::vector<FracLaurent> cs;
    for (int m = 1; m < order; ++m) {
        // c_m enters [z^{m+1}] exp(D) z linearly with coefficient 1
        Poly flow = exp_flow(cs, var, m + 1);
        cs.push_back(taylor[m] * inv - flow[m + 1]);
    }
    return CoordChange(taylor.front(), std::move(cs));
}

CoordChange CoordChange::solve_coefficients(const std::vector<Scalar>& taylor, const std::string& var)
{
    return solve_coefficients(scalar_taylor(taylor, var));
}

FracLaurent CoordChange::c(int n) const
{
    if (n < 1) throw MathError("c_n is defined for n >= 1");
    if (n <= static_cast<int>(cs_.size())) return cs_[n - 1];
    if (exact_tail_) return zero(var());
    throw MathError("c_" + std::to_string(n) + " lies beyond the working order " + std::to_string(order()));
}

Taylor CoordChange::taylor_of() const
{
    Poly flow = exp_flow(cs_, var(), order());
    Taylor out;
    for (int d = 1; d <= order(); ++d) out.push_back(flow[d] * c0_);
    return out;
}

CoordChange CoordChange::compose(const CoordChange& inner, int order) const
{
    auto taylor_to = [order](const CoordChange& r) {
        if (order <= r.order()) {
            Taylor t = r.taylor_of();
            t.resize(order);
            return t;
        }
        if (!r.exact_tail_) throw MathError("composition order exceeds the known order of a factor");
        CoordChange longer(r.c0_, r.cs_, true);
        longer.cs_.resize(order - 1, zero(r.var()));
        return longer.taylor_of();
    };
    Taylor t = compose_taylor(taylor_to(*this), taylor_to(inner), order);
    if (exact_tail_ && inner.exact_tail_ && all_zero(cs_) && all_zero(inner.cs_)) return dilation(t.front(), order);
    return solve_coefficients(t);
}

CoordChange CoordChange::inverse() const
{
    if (exact_tail_ && all_zero(cs_)) return dilation(c0_.pow(-1), order());
    return solve_coefficients(reverse_taylor(taylor_of()));
}

ParamVector CoordChange::apply_U(const Module& m, const GradedVector& w) const
{
    if (!c0_.is_monomial() || !c0_.is_exact())
        throw MathError("c0^{L0} needs c0 to be an exact monomial, got " + c0_.to_string());
    const int top = max_weight(w);
    if (!exact_tail_ && top >= order())
        throw MathError("coordinate change known to order " + std::to_string(order()) + " cannot act on weight " +
                        std::to_string(top));

    // exp(X) w with X = sum_n c_n L_n; X lowers weight, so the series stops
    ParamVector result(w, var());
    ParamVector term = result;
    for (long j = 1; !term.is_zero(); ++j) {
        ParamVector next(var());
        for (const auto& [e, v] : term.terms()) {
            const int wt = max_weight(v);
            for (int n = 1; n <= wt && n <= static_cast<int>(cs_.size()); ++n) {
                const FracLaurent& c = cs_[n - 1];
                if (c.is_zero()) continue;
                GradedVector ln = m.virasoro(n, v);
                for (const auto& [num, a] : c.terms())
                    next.add(e + exponent_of(num, c.denominator()), ln, a * Scalar(make_rational(1, j)));
            }
        }
        term = std::move(next);
        for (const auto& [e, v] : term.terms()) result.add(e, v);
    }

    const auto& [num, alpha] = *c0_.terms().begin();
    const Rational c0_exp = exponent_of(num, c0_.denominator());
    ParamVector out(var());
    for (const auto& [e, v] : result.terms())
        for (const auto& [h, piece] : split_by_weight(v)) out.add(e + c0_exp * h, piece, pow(alpha, h));
    return out;
}

GradedVector CoordChange::apply_U_scalar(const Module& m, const GradedVector& w) const
{
    return apply_U(m, w).constant();
}

bool operator==(const CoordChange& a, const CoordChange& b) { return a.c0_ == b.c0_ && a.cs_ == b.cs_; }

std::string CoordChange::to_string() const
{
    std::ostringstream os;
    os << "c0=" << c0_.to_string();
    for (std::size_t i = 0; i < cs_.size(); ++i) os << ", c" << i + 1 << "=" << cs_[i].to_string();
    return os.str();
}

Taylor delta_kz_taylor(int k, int order, const std::string& var)
{
    if (k < 1) throw MathError("delta_kz needs k >= 1");
    Taylor out;
    const Rational top = make_rational(1, k);
    for (int m = 1; m <= order; ++m) {
        Rational b = binomial(top, m);
        out.push_back(b == 0 ? zero(var) : FracLaurent::monomial(Scalar(b), 1L - static_cast<long>(k) * m, var));
    }
    return out;
}

CoordChange delta_kz(int k, int order, const std::string& var)
{
    if (k == 1) return CoordChange::identity(order, var);
    return CoordChange::solve_coefficients(delta_kz_taylor(k, order, var));
}

CoordChange transition(const Taylor& eta, const Taylor& mu)
{
    const int order = static_cast<int>(std::min(eta.size(), mu.size()));
    Taylor m(mu.begin(), mu.begin() + order);
    return CoordChange::solve_coefficients(compose_taylor(eta, reverse_taylor(m), order));
}

}  // namespace sewprop
