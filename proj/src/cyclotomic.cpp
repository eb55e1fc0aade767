#include "sewprop/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <numbers>
#include <sstream>

namespace sewprop {

namespace {

std::vector<long> poly_divide_exact(std::vector<long> num, const std::vector<long>& den)
{
    // den is monic
    const std::size_t dn = den.size() - 1;
    std::vector<long> quot(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
        long c = num[i];
        quot[i - dn] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    return quot;
}

// Reduce a polynomial (lowest degree first) modulo the monic phi_k.
std::vector<Rational> reduce(std::vector<Rational> p, const std::vector<long>& phi)
{
    const std::size_t d = phi.size() - 1;
    for (std::size_t i = p.size(); i-- > d;) {
        if (p[i] == 0) continue;
        Rational c = p[i];
        for (std::size_t j = 0; j <= d; ++j) {
            if (phi[j] != 0) p[i - d + j] -= c * phi[j];
        }
    }
    p.resize(d);
    return p;
}

}  // namespace

const std::vector<long>& cyclotomic_polynomial(int k)
{
    if (k < 1) throw MathError("cyclotomic order must be positive");
    static std::mutex mutex;
    static std::map<int, std::vector<long>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(k); it != cache.end()) return it->second;
    }
    // x^k - 1 divided by phi_d for every proper divisor d
    std::vector<long> p(static_cast<std::size_t>(k) + 1, 0);
    p[0] = -1;
    p[static_cast<std::size_t>(k)] = 1;
    for (int d = 1; d < k; ++d) {
        if (k % d == 0) p = poly_divide_exact(p, cyclotomic_polynomial(d));
    }
    std::lock_guard lock(mutex);
    return cache.emplace(k, std::move(p)).first->second;
}

int euler_phi(int k) { return static_cast<int>(cyclotomic_polynomial(k).size()) - 1; }

Cyclotomic::Cyclotomic(int order) : order_(order), coeffs_(static_cast<std::size_t>(euler_phi(order))) {}

Cyclotomic::Cyclotomic(int order, const Rational& value) : Cyclotomic(order) { coeffs_[0] = value; }

Cyclotomic Cyclotomic::root_power(int order, long exponent)
{
    long e = exponent % order;
    if (e < 0) e += order;
    std::vector<Rational> p(static_cast<std::size_t>(e) + 1);
    p[static_cast<std::size_t>(e)] = 1;
    Cyclotomic out(order);
    const auto& phi = cyclotomic_polynomial(order);
    if (p.size() < phi.size()) p.resize(phi.size() - 1);
    out.coeffs_ = reduce(std::move(p), phi);
    return out;
}

bool Cyclotomic::is_zero() const
{
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return true;
}

bool Cyclotomic::is_rational() const
{
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) return false;
    return true;
}

void Cyclotomic::check_same_field(const Cyclotomic& other) const
{
    if (order_ != other.order_)
        throw MathError("cyclotomic fields of orders " + std::to_string(order_) + " and " +
                        std::to_string(other.order_) + " mixed without an explicit embedding");
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& other)
{
    check_same_field(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& other)
{
    check_same_field(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& other)
{
    check_same_field(other);
    if (other.is_rational()) return *this *= other.coeffs_[0];
    if (is_rational()) {
        Rational r = coeffs_[0];
        *this = other;
        return *this *= r;
    }
    const std::size_t d = coeffs_.size();
    std::vector<Rational> prod(2 * d - 1);
    for (std::size_t i = 0; i < d; ++i) {
        if (coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) {
            if (other.coeffs_[j] != 0) prod[i + j] += coeffs_[i] * other.coeffs_[j];
        }
    }
    coeffs_ = reduce(std::move(prod), cyclotomic_polynomial(order_));
    return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Rational& r)
{
    for (auto& c : coeffs_) c *= r;
    return *this;
}

Cyclotomic Cyclotomic::operator-() const
{
    Cyclotomic out(*this);
    for (auto& c : out.coeffs_) c = -c;
    return out;
}

Cyclotomic Cyclotomic::inverse() const
{
    if (is_zero()) throw MathError("division by zero in cyclotomic field");
    const std::size_t d = coeffs_.size();
    if (is_rational()) return Cyclotomic(order_, Rational(1) / coeffs_[0]);
    // Columns of the multiplication-by-this matrix are this * omega^j.
    std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d + 1));
    for (std::size_t j = 0; j < d; ++j) {
        Cyclotomic col = *this;
        col *= root_power(order_, static_cast<long>(j));
        for (std::size_t i = 0; i < d; ++i) m[i][j] = col.coeffs_[i];
    }
    m[0][d] = 1;
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t piv = c;
        while (piv < d && m[piv][c] == 0) ++piv;
        if (piv == d) throw MathError("singular multiplication matrix in cyclotomic inverse");
        std::swap(m[c], m[piv]);
        Rational inv = Rational(1) / m[c][c];
        for (std::size_t j = c; j <= d; ++j) m[c][j] *= inv;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rational f = m[r][c];
            for (std::size_t j = c; j <= d; ++j) m[r][j] -= f * m[c][j];
        }
    }
    Cyclotomic out(order_);
    for (std::size_t i = 0; i < d; ++i) out.coeffs_[i] = m[i][d];
    return out;
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b)
{
    if (a.order_ == b.order_) return a.coeffs_ == b.coeffs_;
    if (a.is_rational() && b.is_rational()) return a.coeffs_[0] == b.coeffs_[0];
    int l = std::lcm(a.order_, b.order_);
    return a.embed(l).coeffs_ == b.embed(l).coeffs_;
}

Cyclotomic Cyclotomic::embed(int multiple) const
{
    if (multiple % order_ != 0)
        throw MathError("cannot embed Q(omega_" + std::to_string(order_) + ") into Q(omega_" +
                        std::to_string(multiple) + ")");
    if (multiple == order_) return *this;
    const long step = multiple / order_;
    Cyclotomic out(multiple);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        Cyclotomic term = root_power(multiple, static_cast<long>(i) * step);
        term *= coeffs_[i];
        out += term;
    }
    return out;
}

std::complex<double> Cyclotomic::to_complex() const
{
    std::complex<double> out{0.0, 0.0};
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        double angle = -2.0 * std::numbers::pi * static_cast<double>(i) / order_;
        out += to_double(coeffs_[i]) * std::polar(1.0, angle);
    }
    return out;
}

std::string Cyclotomic::to_string() const
{
    std::ostringstream os;
    os << "cyc" << order_ << "[";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << ",";
        os << sewprop::to_string(coeffs_[i]);
    }
    os << "]";
    return os.str();
}

}  // namespace sewprop
