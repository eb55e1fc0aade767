#include "sewprop/rational.hpp"

#include <limits>

namespace sewprop {

Rational make_rational(long num, long den)
{
    if (den == 0) throw MathError("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (s.empty()) throw MathError("empty rational literal");
    if (s.front() == '+') s.erase(s.begin());
    Rational q;
    if (q.set_str(s, 10) != 0) throw MathError("malformed rational literal '" + std::string(text) + "'");
    if (q.get_den() == 0) throw MathError("rational literal with zero denominator");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

long to_long(const Rational& q)
{
    if (!is_integer(q)) throw MathError("expected an integer, got " + to_string(q));
    if (!q.get_num().fits_slong_p()) throw MathError("integer out of range: " + to_string(q));
    return q.get_num().get_si();
}

Rational pow(const Rational& base, long exponent)
{
    if (exponent < 0) {
        if (base == 0) throw MathError("zero to a negative power");
        return pow(Rational(1) / base, -exponent);
    }
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    Rational out(num, den);
    out.canonicalize();
    return out;
}

Rational binomial(const Rational& top, long k)
{
    if (k < 0) return 0;
    Rational out = 1;
    for (long i = 0; i < k; ++i) {
        out *= (top - i);
        out /= (i + 1);
    }
    return out;
}

Rational factorial(long n)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(f);
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace sewprop
