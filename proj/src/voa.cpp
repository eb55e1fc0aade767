#include "sewprop/voa.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace sewprop {

CutoffOverflow::CutoffOverflow(int weight_, int cutoff_)
    : std::runtime_error("weight " + std::to_string(weight_) + " exceeds the weight cutoff " +
                         std::to_string(cutoff_)),
      weight(weight_), cutoff(cutoff_)
{
}

Module::Module(AlgebraKind kind, int cutoff, Rational momentum, Rational central_charge)
    : kind_(kind), cutoff_(cutoff), momentum_(std::move(momentum)), central_charge_(std::move(central_charge))
{
    if (cutoff_ < 0) throw MathError("weight cutoff must be nonnegative");
}

std::shared_ptr<const Module> Module::heisenberg(int cutoff, const Rational& momentum)
{
    return std::shared_ptr<const Module>(new Module(AlgebraKind::heisenberg, cutoff, momentum, Rational(1)));
}

std::shared_ptr<const Module> Module::virasoro(const Rational& central_charge, int cutoff)
{
    return std::shared_ptr<const Module>(new Module(AlgebraKind::virasoro, cutoff, Rational(0), central_charge));
}

Rational Module::grading_offset() const
{
    if (kind_ == AlgebraKind::heisenberg) return momentum_ * momentum_ / 2;
    return 0;
}

std::string Module::describe() const
{
    std::ostringstream os;
    if (kind_ == AlgebraKind::heisenberg)
        os << "heisenberg(momentum=" << to_string(momentum_) << ")";
    else
        os << "virasoro(c=" << to_string(central_charge_) << ")";
    os << " cutoff " << cutoff_;
    return os.str();
}

std::vector<Partition> Module::basis(int grade) const
{
    if (grade > cutoff_) throw CutoffOverflow(grade, cutoff_);
    return partitions(grade, min_part());
}

GradedVector Module::conformal_vector() const
{
    if (kind_ == AlgebraKind::heisenberg) return GradedVector(Partition{1, 1}, Scalar(make_rational(1, 2)));
    return GradedVector(Partition{2});
}

void Module::validate(const GradedVector& v) const
{
    for (const auto& [p, c] : v) {
        if (!is_partition(p, min_part()))
            throw MathError("monomial " + to_string(p) + " is not a basis label of " + describe());
    }
}

void Module::check_cutoff(const GradedVector& v) const
{
    int w = max_weight(v);
    if (w > cutoff_) throw CutoffOverflow(w, cutoff_);
}

GradedVector Module::generator_mode(long p, const Partition& w) const
{
    if (kind_ == AlgebraKind::virasoro) return virasoro_on_monomial(p, w);
    if (p < 0) return GradedVector(insert_part(w, static_cast<int>(-p)));
    if (p == 0) {
        GradedVector out;
        out.add(w, Scalar(momentum_));
        return out;
    }
    long mult = 0;
    for (int part : w) mult += (part == p);
    if (mult == 0) return {};
    Partition rest = w;
    rest.erase(std::find(rest.begin(), rest.end(), static_cast<int>(p)));
    return GradedVector(rest, Scalar(Rational(p * mult)));
}

GradedVector Module::generator_mode(long p, const GradedVector& w) const
{
    GradedVector out;
    for (const auto& [mono, c] : w) out.add_scaled(generator_mode(p, mono), c);
    return out;
}

GradedVector Module::virasoro_on_monomial(long p, const Partition& w) const
{
    if (w.empty()) {
        if (p >= -1) return {};
        return GradedVector(Partition{static_cast<int>(-p)});
    }
    if (p < 0 && -p >= w.front()) return GradedVector(insert_part(w, static_cast<int>(-p)));
    if (weight(w) - p < 0) return {};
    {
        std::shared_lock lock(cache_mutex_);
        auto it = pbw_cache_.find({p, w});
        if (it != pbw_cache_.end()) return it->second;
    }
    // L_p L_{-m} rest = L_{-m} L_p rest + (p+m) L_{p-m} rest + c/12 (p^3-p) delta_{p,m} rest
    const long m = w.front();
    Partition rest(w.begin() + 1, w.end());
    GradedVector out;
    GradedVector inner = virasoro_on_monomial(p, rest);
    for (const auto& [mono, c] : inner) out.add_scaled(virasoro_on_monomial(-m, mono), c);
    if (p + m != 0) out.add_scaled(virasoro_on_monomial(p - m, rest), Scalar(Rational(p + m)));
    if (p == m) out.add(rest, Scalar(central_charge_ * Rational(p * p * p - p) / 12));
    std::unique_lock lock(cache_mutex_);
    pbw_cache_.emplace(std::make_pair(p, w), out);
    return out;
}

GradedVector Module::gen(long p, const GradedVector& w) const
{
    if (kind_ == AlgebraKind::heisenberg) return generator_mode(p, w);
    return generator_mode(p - 1, w);
}

GradedVector Module::raw_mode(const Partition& u, long n, const Partition& w) const
{
    if (u.empty()) return n == -1 ? GradedVector(w) : GradedVector();
    const long target = weight(u) + weight(w) - n - 1;
    if (target < 0) return {};
    ModeKey key{u, n, w};
    {
        std::shared_lock lock(cache_mutex_);
        auto it = mode_cache_.find(key);
        if (it != mode_cache_.end()) return it->second;
    }

    // u = g_(-m) rest; iterate formula
    // (g_(-m) b)_(n) = sum_j binom(m+j-1, j) [ g_(-m-j) b_(n+j) - (-1)^m b_(n-m-j) g_(j) ]
    const long m = kind_ == AlgebraKind::heisenberg ? u.front() : u.front() - 1;
    const Partition rest(u.begin() + 1, u.end());
    const long wt_rest = weight(rest);
    const long wt_w = weight(w);
    const long gw = generator_weight();
    GradedVector out;
    for (long j = 0; wt_rest + wt_w - (n + j) - 1 >= 0; ++j) {
        GradedVector inner = raw_mode(rest, n + j, w);
        if (inner.is_zero()) continue;
        out.add_scaled(gen(-m - j, inner), Scalar(binomial(Rational(m + j - 1), j)));
    }
    const Scalar sign = (m % 2 == 0) ? Scalar(-1) : Scalar(1);
    GradedVector wv(w);
    for (long j = 0; wt_w + gw - j - 1 >= 0; ++j) {
        GradedVector gw_vec = gen(j, wv);
        if (gw_vec.is_zero()) continue;
        GradedVector term;
        for (const auto& [mono, c] : gw_vec) term.add_scaled(raw_mode(rest, n - m - j, mono), c);
        out.add_scaled(term, sign * Scalar(binomial(Rational(m + j - 1), j)));
    }
    std::unique_lock lock(cache_mutex_);
    mode_cache_.emplace(std::move(key), out);
    return out;
}

GradedVector Module::mode(const Partition& u, long n, const Partition& w) const
{
    const long target = weight(u) + weight(w) - n - 1;
    if (target > cutoff_) throw CutoffOverflow(static_cast<int>(target), cutoff_);
    return raw_mode(u, n, w);
}

GradedVector Module::mode(const GradedVector& u, long n, const GradedVector& w) const
{
    GradedVector out;
    for (const auto& [um, uc] : u) {
        for (const auto& [wm, wc] : w) out.add_scaled(mode(um, n, wm), uc * wc);
    }
    return out;
}

GradedVector Module::sugawara(long n, const Partition& w) const
{
    const GradedVector wv(w);
    const long wt = weight(w);
    const Scalar half(make_rational(1, 2));
    GradedVector out;
    if (n == 0) {
        out.add(w, Scalar(momentum_ * momentum_ / 2));
        for (long m = 1; m <= wt; ++m) out += generator_mode(-m, generator_mode(m, wv));
        return out;
    }
    if (n > 0) {
        for (long j = 0; j <= n; ++j) out.add_scaled(generator_mode(n - j, generator_mode(j, wv)), half);
        for (long m = 1; n + m <= wt; ++m) out += generator_mode(-m, generator_mode(n + m, wv));
        return out;
    }
    for (long j = n; j <= 0; ++j) out.add_scaled(generator_mode(n - j, generator_mode(j, wv)), half);
    for (long m = 1; m <= wt; ++m) out += generator_mode(n - m, generator_mode(m, wv));
    return out;
}

GradedVector Module::virasoro(long n, const GradedVector& w) const
{
    GradedVector out;
    for (const auto& [mono, c] : w) {
        if (weight(mono) - n < 0) continue;
        if (weight(mono) - n > cutoff_) throw CutoffOverflow(static_cast<int>(weight(mono) - n), cutoff_);
        out.add_scaled(kind_ == AlgebraKind::heisenberg ? sugawara(n, mono) : virasoro_on_monomial(n, mono), c);
    }
    return out;
}

GradedVector Module::L0_tilde(const GradedVector& w) const
{
    GradedVector out;
    for (const auto& [mono, c] : w) out.add(mono, c * Scalar(weight(mono)));
    return out;
}

Scalar Module::pairing(const GradedVector& w, const GradedVector& wp) const
{
    validate(w);
    validate(wp);
    Scalar sum(0);
    for (const auto& [mono, c] : w) {
        auto it = wp.terms().find(mono);
        if (it != wp.terms().end()) sum += c * it->second;
    }
    return sum;
}

}  // namespace sewprop
