#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <thetaq/qseries.hpp>

namespace thetaq
{

struct EtaFactor {
    long mult;
    long exp;
};

// prod eta(mult tau)^exp; multipliers distinct and positive, exponents nonzero.
struct EtaQuotient {
    std::vector<EtaFactor> factors;
};

// Throws DomainError when the invariants above are violated.
void validate(const EtaQuotient &e);
// sum exp * mult / 24.
Rational eta_valuation(const EtaQuotient &e);

// prod_{n >= 1} (1 - q^n), exact below T.
PuiseuxSeries euler_product(const Rational &T);
// q^{m/24} prod (1 - q^{mn}), exact below T.
PuiseuxSeries eta_series(long m, const Rational &T);
PuiseuxSeries eta_quotient_series(const EtaQuotient &e, const Rational &T);

// "2^5 * 1^-2"; factor := mult "^" exp, a bare mult means exponent 1.
EtaQuotient parse_eta_quotient(std::string_view text);
std::string to_string(const EtaQuotient &e);

// prod_{n >= 1} (1 - q^{modulus n - residue})^exp, with 0 <= residue < modulus.
struct QProductFactor {
    long modulus;
    long residue;
    long exp;
};

// q^shift times the product of the factors, exact below T.
struct QProduct {
    Rational shift;
    std::vector<QProductFactor> factors;
};

PuiseuxSeries q_product_series(const QProduct &p, const Rational &T);
std::string to_string(const QProduct &p);

} // namespace thetaq
