#pragma once

#include <string>
#include <utility>

#include <thetaq/cyclotomic.hpp>
#include <thetaq/qseries.hpp>
#include <thetaq/rational.hpp>

namespace thetaq
{

struct Characteristic {
    Rational eps;
    Rational eps_prime;

    friend bool operator==(const Characteristic &, const Characteristic &) = default;
};

// "[eps;eps']"
std::string to_string(const Characteristic &c);

// theta[eps;eps'](0, m tau), or its reduced derivative theta'/(pi i) when derived is set.
struct ThetaSpec {
    Characteristic chr;
    Rational tau_mult{1};
    bool derived = false;
};

std::string to_string(const ThetaSpec &s);

// Order of the cyclotomic field holding every coefficient: 4 den(eps) den(eps').
unsigned long coefficient_order(const Characteristic &c);
// Grid denominator of the exponents m (2n + eps)^2 / 8.
long exponent_grid(const ThetaSpec &s);
// Smallest exponent that can occur: m min_n (2n + eps)^2 / 8.
Rational theta_valuation_bound(const ThetaSpec &s);

// Sum over n of exp(2 pi i eps'(2n + eps)/4) q^{m (2n + eps)^2 / 8}, exact below T.
PuiseuxSeries theta_constant(const ThetaSpec &s, const Rational &T);
// Same sum weighted by (2n + eps).
PuiseuxSeries theta_derivative_reduced(const ThetaSpec &s, const Rational &T);
// Dispatches on s.derived.
PuiseuxSeries theta_series(const ThetaSpec &s, const Rational &T);
// The constant rebuilt from the product expansion in x = q^{m/2}.
PuiseuxSeries theta_triple_product(const ThetaSpec &s, const Rational &T);

struct ReducedCharacteristic {
    Characteristic chr;
    // input object = scalar * canonical object.
    CycNum scalar;
};

// Canonical representative with eps in [0, 1] and, when eps is 0 or 1, eps' in [0, 1];
// otherwise eps' in [0, 2). Uses the period shifts of eps and eps' and evenness at the
// origin (which costs a sign for derivatives).
ReducedCharacteristic reduce_characteristic(const Rational &eps, const Rational &eps_prime, bool derived = false);

// The unique zero of theta[eps;eps'](z, tau) in the period cell, z = a tau + b.
std::pair<Rational, Rational> theta_zero_location(const Characteristic &c);

// theta_{a,b} in the (a, b) convention with half-sized characteristics.
Characteristic mumford_convert(const Rational &a, const Rational &b);

} // namespace thetaq
