#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace thetaq
{

using Integer = mpz_class;
// mpq_class keeps numerator/denominator coprime with a positive denominator.
using Rational = mpq_class;

// n / d in canonical form (d != 0).
inline Rational rat(const Integer &n, const Integer &d = 1)
{
    Rational r(n, d);
    r.canonicalize();
    return r;
}

// Accepts "p", "-p", "p/q" (q > 0). Throws ParseError on malformed input.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational &r);

Integer floor(const Rational &r);
Integer ceil(const Rational &r);
// r - floor(r), in [0, 1).
Rational frac(const Rational &r);
// r reduced into [0, m) for m > 0.
Rational mod(const Rational &r, const Rational &m);

Integer lcm(const Integer &a, const Integer &b);
long lcm(long a, long b);

// Throws DomainError if the value does not fit in a long.
long to_long(const Integer &z);

// Exact-or-truncated order: std::nullopt stands for "exact" (no truncation).
using Order = std::optional<Rational>;

Order min_order(const Order &a, const Order &b);
Order add_order(const Order &a, const Rational &shift);
std::string to_string(const Order &o);

} // namespace thetaq
