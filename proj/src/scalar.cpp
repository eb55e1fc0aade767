#include "sewprop/scalar.hpp"

#include <numeric>
#include <sstream>

namespace sewprop {

namespace {

[[noreturn]] void mixed_exactness()
{
    throw MathError("exact and floating scalars mixed; convert explicitly with to_complex()");
}

}  // namespace

bool Scalar::is_zero() const
{
    switch (kind()) {
    case Kind::rational: return std::get<Rational>(value_) == 0;
    case Kind::cyclotomic: return std::get<Cyclotomic>(value_).is_zero();
    case Kind::complex: return std::get<std::complex<double>>(value_) == std::complex<double>{};
    }
    return false;
}

bool Scalar::is_one() const
{
    switch (kind()) {
    case Kind::rational: return std::get<Rational>(value_) == 1;
    case Kind::cyclotomic: {
        const auto& c = std::get<Cyclotomic>(value_);
        return c.is_rational() && c.rational_part() == 1;
    }
    case Kind::complex: return std::get<std::complex<double>>(value_) == std::complex<double>{1.0, 0.0};
    }
    return false;
}

const Rational& Scalar::rational() const
{
    if (kind() != Kind::rational) throw MathError("scalar is not rational: " + to_string());
    return std::get<Rational>(value_);
}

Rational Scalar::as_rational() const
{
    if (kind() == Kind::rational) return std::get<Rational>(value_);
    if (kind() == Kind::cyclotomic) {
        const auto& c = std::get<Cyclotomic>(value_);
        if (c.is_rational()) return c.rational_part();
    }
    throw MathError("scalar is not rational: " + to_string());
}

Cyclotomic Scalar::as_cyclotomic(int k) const
{
    switch (kind()) {
    case Kind::rational: return Cyclotomic(k, std::get<Rational>(value_));
    case Kind::cyclotomic: return std::get<Cyclotomic>(value_).embed(k);
    case Kind::complex: mixed_exactness();
    }
    return Cyclotomic(k);
}

std::complex<double> Scalar::to_complex() const
{
    switch (kind()) {
    case Kind::rational: return {to_double(std::get<Rational>(value_)), 0.0};
    case Kind::cyclotomic: return std::get<Cyclotomic>(value_).to_complex();
    case Kind::complex: return std::get<std::complex<double>>(value_);
    }
    return {};
}

int Scalar::field_order() const
{
    if (kind() == Kind::cyclotomic) return std::get<Cyclotomic>(value_).order();
    return 1;
}

// Cyclotomic values that happen to be rational may meet values of another
// field; strip the tag so they combine.
static bool reconcile_fields(Scalar& a, Scalar& b)
{
    if (a.kind() != Scalar::Kind::cyclotomic || b.kind() != Scalar::Kind::cyclotomic) return false;
    if (a.field_order() == b.field_order()) return false;
    Scalar sa = a.simplified(), sb = b.simplified();
    if (sa.kind() == Scalar::Kind::cyclotomic && sb.kind() == Scalar::Kind::cyclotomic) return false;
    a = sa;
    b = sb;
    return true;
}

Scalar& Scalar::operator+=(const Scalar& o)
{
    if (kind() == Kind::cyclotomic && o.kind() == Kind::cyclotomic && field_order() != o.field_order()) {
        Scalar b = o;
        if (reconcile_fields(*this, b)) return *this += b;
    }
    if (kind() == Kind::complex || o.kind() == Kind::complex) {
        if (kind() != o.kind()) mixed_exactness();
        std::get<std::complex<double>>(value_) += std::get<std::complex<double>>(o.value_);
        return *this;
    }
    if (kind() == Kind::rational && o.kind() == Kind::rational) {
        std::get<Rational>(value_) += std::get<Rational>(o.value_);
        return *this;
    }
    if (kind() == Kind::cyclotomic && o.kind() == Kind::rational) {
        auto& c = std::get<Cyclotomic>(value_);
        c += Cyclotomic(c.order(), std::get<Rational>(o.value_));
        return *this;
    }
    const auto& oc = std::get<Cyclotomic>(o.value_);
    Cyclotomic mine = as_cyclotomic(oc.order());
    mine += oc;
    value_ = std::move(mine);
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o)
{
    if (kind() == Kind::cyclotomic && o.kind() == Kind::cyclotomic && field_order() != o.field_order()) {
        Scalar b = o;
        if (reconcile_fields(*this, b)) return *this *= b;
    }
    if (kind() == Kind::complex || o.kind() == Kind::complex) {
        if (kind() != o.kind()) mixed_exactness();
        std::get<std::complex<double>>(value_) *= std::get<std::complex<double>>(o.value_);
        return *this;
    }
    if (o.kind() == Kind::rational) {
        if (kind() == Kind::rational)
            std::get<Rational>(value_) *= std::get<Rational>(o.value_);
        else
            std::get<Cyclotomic>(value_) *= std::get<Rational>(o.value_);
        return *this;
    }
    const auto& oc = std::get<Cyclotomic>(o.value_);
    if (kind() == Kind::rational) {
        Cyclotomic out = oc;
        out *= std::get<Rational>(value_);
        value_ = std::move(out);
        return *this;
    }
    std::get<Cyclotomic>(value_) *= oc;
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Scalar Scalar::operator-() const
{
    switch (kind()) {
    case Kind::rational: return Scalar(Rational(-std::get<Rational>(value_)));
    case Kind::cyclotomic: return Scalar(-std::get<Cyclotomic>(value_));
    case Kind::complex: return Scalar(-std::get<std::complex<double>>(value_));
    }
    return {};
}

Scalar Scalar::inverse() const
{
    if (is_zero()) throw MathError("division by zero");
    switch (kind()) {
    case Kind::rational: return Scalar(Rational(Rational(1) / std::get<Rational>(value_)));
    case Kind::cyclotomic: return Scalar(std::get<Cyclotomic>(value_).inverse());
    case Kind::complex: return Scalar(1.0 / std::get<std::complex<double>>(value_));
    }
    return {};
}

bool operator==(const Scalar& a, const Scalar& b)
{
    using K = Scalar::Kind;
    if (a.kind() == K::complex || b.kind() == K::complex) {
        if (a.kind() != b.kind()) mixed_exactness();
        return std::get<std::complex<double>>(a.value_) == std::get<std::complex<double>>(b.value_);
    }
    if (a.kind() == K::rational && b.kind() == K::rational)
        return std::get<Rational>(a.value_) == std::get<Rational>(b.value_);
    int k = std::lcm(a.field_order(), b.field_order());
    return a.as_cyclotomic(k) == b.as_cyclotomic(k);
}

Scalar Scalar::simplified() const
{
    if (kind() == Kind::cyclotomic) {
        const auto& c = std::get<Cyclotomic>(value_);
        if (c.is_rational()) return Scalar(c.rational_part());
    }
    return *this;
}

std::string Scalar::to_string() const
{
    switch (kind()) {
    case Kind::rational: return sewprop::to_string(std::get<Rational>(value_));
    case Kind::cyclotomic: return std::get<Cyclotomic>(value_).to_string();
    case Kind::complex: {
        std::ostringstream os;
        os.precision(17);
        auto z = std::get<std::complex<double>>(value_);
        os << "(" << z.real() << "," << z.imag() << ")";
        return os.str();
    }
    }
    return {};
}

Scalar pow(const Scalar& base, long exponent)
{
    if (exponent < 0) return pow(base.inverse(), -exponent);
    Scalar result(1);
    if (base.kind() == Scalar::Kind::complex) result = Scalar(std::complex<double>{1.0, 0.0});
    Scalar b = base;
    while (exponent > 0) {
        if (exponent & 1) result *= b;
        exponent >>= 1;
        if (exponent > 0) b *= b;
    }
    return result;
}

}  // namespace sewprop
