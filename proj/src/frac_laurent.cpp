#include "sewprop/frac_laurent.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace sewprop {

namespace {

long numerator_on(const Rational& e, int k)
{
    Rational scaled = e * k;
    if (!is_integer(scaled))
        throw MathError("exponent " + to_string(e) + " is not on the lattice (1/" + std::to_string(k) + ")Z");
    return to_long(scaled);
}

int lattice_of(const Rational& e)
{
    mpz_class d = e.get_den();
    if (!d.fits_sint_p()) throw MathError("exponent denominator too large");
    return static_cast<int>(d.get_si());
}

constexpr long kInf = std::numeric_limits<long>::max() / 4;

}  // namespace

FracLaurent::FracLaurent(int denominator, std::string var) : k_(denominator), var_(std::move(var))
{
    if (k_ < 1) throw MathError("series lattice denominator must be positive");
}

FracLaurent FracLaurent::constant(const Scalar& c, std::string var)
{
    FracLaurent out(1, std::move(var));
    if (!c.is_zero()) out.terms_.emplace(0, c);
    return out;
}

FracLaurent FracLaurent::monomial(const Scalar& c, const Rational& exponent, std::string var)
{
    FracLaurent out(lattice_of(exponent), std::move(var));
    if (!c.is_zero()) out.terms_.emplace(numerator_on(exponent, out.k_), c);
    return out;
}

FracLaurent FracLaurent::monomial(const Scalar& c, long exponent, std::string var)
{
    return monomial(c, Rational(exponent), std::move(var));
}

std::optional<Rational> FracLaurent::order() const
{
    if (!hi_) return std::nullopt;
    return make_rational(*hi_, k_);
}

std::optional<Rational> FracLaurent::lower_order() const
{
    if (!lo_) return std::nullopt;
    return make_rational(*lo_, k_);
}

void FracLaurent::drop_unknown()
{
    if (hi_) terms_.erase(terms_.lower_bound(*hi_), terms_.end());
    if (lo_) terms_.erase(terms_.begin(), terms_.lower_bound(*lo_));
}

FracLaurent& FracLaurent::truncate(const Rational& order)
{
    int need = std::lcm(k_, lattice_of(order));
    if (need != k_) *this = on_lattice(need);
    long h = numerator_on(order, k_);
    hi_ = hi_ ? std::min(*hi_, h) : h;
    drop_unknown();
    return *this;
}

FracLaurent& FracLaurent::bound_below(const Rational& order)
{
    int need = std::lcm(k_, lattice_of(order));
    if (need != k_) *this = on_lattice(need);
    long l = numerator_on(order, k_);
    lo_ = lo_ ? std::max(*lo_, l) : l;
    drop_unknown();
    return *this;
}

std::optional<Rational> FracLaurent::valuation() const
{
    if (terms_.empty()) return std::nullopt;
    return make_rational(terms_.begin()->first, k_);
}

std::optional<Rational> FracLaurent::top() const
{
    if (terms_.empty()) return std::nullopt;
    return make_rational(terms_.rbegin()->first, k_);
}

Scalar FracLaurent::coeff(const Rational& exponent) const
{
    Rational scaled = exponent * k_;
    if (!is_integer(scaled)) return Scalar(0);
    long n = to_long(scaled);
    if ((hi_ && n >= *hi_) || (lo_ && n < *lo_))
        throw MathError("coefficient of " + var_ + "^" + sewprop::to_string(exponent) +
                        " lies beyond the known range of a truncated series");
    auto it = terms_.find(n);
    return it == terms_.end() ? Scalar(0) : it->second;
}

void FracLaurent::add_term(const Rational& exponent, const Scalar& c)
{
    if (c.is_zero()) return;
    int need = std::lcm(k_, lattice_of(exponent));
    if (need != k_) *this = on_lattice(need);
    long n = numerator_on(exponent, k_);
    if ((hi_ && n >= *hi_) || (lo_ && n < *lo_)) return;
    auto [it, inserted] = terms_.emplace(n, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

FracLaurent FracLaurent::on_lattice(int multiple) const
{
    if (multiple % k_ != 0)
        throw MathError("lattice (1/" + std::to_string(k_) + ")Z does not refine to (1/" +
                        std::to_string(multiple) + ")Z");
    if (multiple == k_) return *this;
    const long step = multiple / k_;
    FracLaurent out(multiple, var_);
    for (const auto& [n, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), n * step, c);
    if (hi_) out.hi_ = *hi_ * step;
    if (lo_) out.lo_ = *lo_ * step;
    return out;
}

FracLaurent FracLaurent::renamed(std::string var) const
{
    FracLaurent out = *this;
    out.var_ = std::move(var);
    return out;
}

void FracLaurent::check_compatible(const FracLaurent& o) const
{
    if (var_ != o.var_) throw MathError("series in different variables: " + var_ + " and " + o.var_);
}

FracLaurent& FracLaurent::operator+=(const FracLaurent& o)
{
    check_compatible(o);
    int k = std::lcm(k_, o.k_);
    if (k != k_) *this = on_lattice(k);
    FracLaurent refined;
    const FracLaurent* src = &o;
    if (o.k_ != k) {
        refined = o.on_lattice(k);
        src = &refined;
    }
    for (const auto& [n, c] : src->terms_) {
        auto [it, inserted] = terms_.emplace(n, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    if (src->hi_) hi_ = hi_ ? std::min(*hi_, *src->hi_) : *src->hi_;
    if (src->lo_) lo_ = lo_ ? std::max(*lo_, *src->lo_) : *src->lo_;
    drop_unknown();
    return *this;
}

FracLaurent& FracLaurent::operator-=(const FracLaurent& o) { return *this += -o; }

FracLaurent& FracLaurent::operator*=(const FracLaurent& o)
{
    check_compatible(o);
    if ((hi_ && o.lo_) || (lo_ && o.hi_) || (hi_ && lo_) || (o.hi_ && o.lo_))
        throw MathError("product of series unbounded in both directions is not defined");
    int k = std::lcm(k_, o.k_);
    FracLaurent a = on_lattice(k);
    FracLaurent b = o.on_lattice(k);

    auto low_end = [](const FracLaurent& s) -> long {
        if (!s.terms_.empty()) return s.terms_.begin()->first;
        return s.hi_ ? *s.hi_ : kInf;
    };
    auto high_end = [](const FracLaurent& s) -> long {
        if (!s.terms_.empty()) return s.terms_.rbegin()->first;
        return s.lo_ ? *s.lo_ : -kInf;
    };
    std::optional<long> hi, lo;
    auto take_min = [&](long v) { hi = hi ? std::min(*hi, v) : v; };
    auto take_max = [&](long v) { lo = lo ? std::max(*lo, v) : v; };
    if (a.hi_ && low_end(b) < kInf) take_min(*a.hi_ + low_end(b));
    if (b.hi_ && low_end(a) < kInf) take_min(*b.hi_ + low_end(a));
    if (a.lo_ && high_end(b) > -kInf) take_max(*a.lo_ + high_end(b));
    if (b.lo_ && high_end(a) > -kInf) take_max(*b.lo_ + high_end(a));

    FracLaurent out(k, var_);
    for (const auto& [na, ca] : a.terms_) {
        for (const auto& [nb, cb] : b.terms_) {
            long n = na + nb;
            if ((hi && n >= *hi) || (lo && n < *lo)) continue;
            auto [it, inserted] = out.terms_.emplace(n, ca * cb);
            if (!inserted) it->second += ca * cb;
        }
    }
    for (auto it = out.terms_.begin(); it != out.terms_.end();) {
        if (it->second.is_zero())
            it = out.terms_.erase(it);
        else
            ++it;
    }
    out.hi_ = hi;
    out.lo_ = lo;
    *this = std::move(out);
    return *this;
}

FracLaurent& FracLaurent::operator*=(const Scalar& c)
{
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [n, v] : terms_) v *= c;
    return *this;
}

FracLaurent FracLaurent::operator-() const
{
    FracLaurent out = *this;
    for (auto& [n, v] : out.terms_) v = -v;
    return out;
}

bool operator==(const FracLaurent& a, const FracLaurent& b)
{
    if (a.var_ != b.var_) return false;
    int k = std::lcm(a.k_, b.k_);
    FracLaurent x = a.on_lattice(k), y = b.on_lattice(k);
    if (x.hi_ != y.hi_ || x.lo_ != y.lo_ || x.terms_.size() != y.terms_.size()) return false;
    auto it = y.terms_.begin();
    for (const auto& [n, c] : x.terms_) {
        if (it->first != n || !(it->second == c)) return false;
        ++it;
    }
    return true;
}

Scalar FracLaurent::residue() const { return coeff(Rational(-1)); }

FracLaurent FracLaurent::compose(const FracLaurent& g, const Rational& order) const
{
    if (lo_ || g.lo_) throw MathError("composition needs series bounded below");
    for (const auto& [n, c] : terms_) {
        if (n < 0 || n % k_ != 0) throw MathError("outer series of a composition must be a power series");
    }
    if (!g.terms_.empty() && g.terms_.begin()->first <= 0)
        throw MathError("inner series of a composition must vanish at 0");
    if (g.terms_.empty() && !g.hi_) return constant(coeff(Rational(0)), g.var_);

    Rational vg = g.terms_.empty() ? *g.order() : *g.valuation();
    Rational known = order;
    bool uses_g = std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first > 0; });
    if (hi_) {
        known = std::min(known, Rational(*this->order() * vg));
        uses_g = true;
    }
    if (uses_g && g.hi_) known = std::min(known, *g.order());

    FracLaurent result(g.k_, g.var_);
    FracLaurent power = constant(Scalar(1), g.var_);
    long last = terms_.empty() ? 0 : terms_.rbegin()->first / k_;
    if (hi_) last = std::max(last, (*hi_ + k_ - 1) / k_);
    for (long n = 0; n <= last; ++n) {
        if (Rational(n) * vg >= known) break;
        Scalar c = coeff(Rational(n));
        if (!c.is_zero()) result += power * c;
        power *= g;
        power.truncate(known);
    }
    result.truncate(known);
    return result;
}

FracLaurent FracLaurent::inverse(const Rational& order) const
{
    if (terms_.empty()) throw MathError("inverse of the zero series");
    if (lo_) throw MathError("inverse needs a series bounded below");
    Rational v = *valuation();
    Scalar lead = terms_.begin()->second;
    if (is_monomial() && !hi_) return monomial(lead.inverse(), Rational(-v), var_).truncate(order);

    Rational known = order;
    if (hi_) known = std::min(known, Rational(*this->order() - 2 * v));
    // this = lead * z^v * (1 + h)
    FracLaurent h = *this * monomial(lead.inverse(), Rational(-v), var_);
    h -= constant(Scalar(1), var_);
    FracLaurent sum = constant(Scalar(1), var_);
    Rational target = known + v;
    FracLaurent power = constant(Scalar(1), var_);
    FracLaurent neg_h = -h;
    if (!h.is_zero()) {
        Rational vh = *h.valuation();
        for (long j = 1; Rational(j) * vh < target; ++j) {
            power *= neg_h;
            power.truncate(target);
            sum += power;
        }
    }
    sum.truncate(target);
    FracLaurent out = sum * monomial(lead.inverse(), Rational(-v), var_);
    out.truncate(known);
    return out;
}

FracLaurent FracLaurent::pow(long n) const
{
    if (n < 0) {
        if (!is_monomial() || !is_exact()) throw MathError("negative power of a non-monomial series");
        const auto& [e, c] = *terms_.begin();
        return monomial(sewprop::pow(c, n), make_rational(e * n, k_), var_);
    }
    FracLaurent result = constant(Scalar(1), var_);
    for (long i = 0; i < n; ++i) result *= *this;
    return result;
}

std::complex<double> FracLaurent::eval_root(std::complex<double> root) const
{
    std::complex<double> sum{0.0, 0.0};
    for (const auto& [n, c] : terms_) sum += c.to_complex() * std::pow(root, static_cast<int>(n));
    return sum;
}

Scalar FracLaurent::eval_root_exact(const Scalar& root) const
{
    Scalar sum(0);
    for (const auto& [n, c] : terms_) sum += c * sewprop::pow(root, n);
    return sum;
}

std::string FracLaurent::to_string() const
{
    std::ostringstream os;
    bool first = true;
    auto exponent = [&](long n) { return sewprop::to_string(make_rational(n, k_)); };
    if (lo_) {
        os << "O(" << var_ << "^" << exponent(*lo_) << ")";
        first = false;
    }
    for (const auto& [n, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        if (n != 0) os << "*" << var_ << "^" << exponent(n);
    }
    if (hi_) {
        if (!first) os << " + ";
        os << "O(" << var_ << "^" << exponent(*hi_) << ")";
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace sewprop
