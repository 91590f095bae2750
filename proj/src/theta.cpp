#include <thetaq/theta.hpp>

#include <cmath>
#include <numeric>

#include <thetaq/errors.hpp>

namespace thetaq
{

namespace
{

long den_of(const Rational &r)
{
    return to_long(r.get_den());
}

void check_spec(const ThetaSpec &s, const Rational &T)
{
    if (s.tau_mult <= 0) {
        throw DomainError("tau multiplier must be positive");
    }
    if (T <= 0) {
        throw DomainError("truncation order must be positive");
    }
}

// All n with m (2n + eps)^2 / 8 < T.
std::pair<long, long> summation_range(const ThetaSpec &s, const Rational &T)
{
    const Rational bound = 8 * T / s.tau_mult;
    const double r = std::sqrt(bound.get_d()) + 2;
    const double e = s.chr.eps.get_d();
    long lo = static_cast<long>(std::floor((-r - e) / 2)) - 1;
    long hi = static_cast<long>(std::ceil((r - e) / 2)) + 1;
    const auto inside = [&](long n) {
        const Rational t = 2 * n + s.chr.eps;
        return t * t < bound;
    };
    while (lo <= hi && !inside(lo)) {
        ++lo;
    }
    while (hi >= lo && !inside(hi)) {
        --hi;
    }
    return {lo, hi};
}

PuiseuxSeries theta_sum(const ThetaSpec &s, const Rational &T, bool weighted)
{
    check_spec(s, T);
    const unsigned long L = coefficient_order(s.chr);
    const long D = exponent_grid(s);
    const auto [lo, hi] = summation_range(s, T);
    PuiseuxSeries::Terms terms;
    for (long n = lo; n <= hi; ++n) {
        const Rational t = 2 * n + s.chr.eps;
        if (weighted && t == 0) {
            continue;
        }
        const Rational e = s.tau_mult * t * t / 8 * D;
        CycNum c = root_of_unity(s.chr.eps_prime * t / 4, L);
        if (weighted) {
            c *= CycNum(t);
        }
        auto [it, inserted] = terms.try_emplace(to_long(e.get_num()), c);
        if (!inserted) {
            it->second += c;
        }
    }
    return PuiseuxSeries::from_terms(D, L, std::move(terms), T);
}

} // namespace

std::string to_string(const Characteristic &c)
{
    return "[" + c.eps.get_str() + ";" + c.eps_prime.get_str() + "]";
}

std::string to_string(const ThetaSpec &s)
{
    std::string out = (s.derived ? "Theta" : "theta") + to_string(s.chr);
    if (s.tau_mult != 1) {
        out += "(" + s.tau_mult.get_str() + "tau)";
    }
    return out;
}

unsigned long coefficient_order(const Characteristic &c)
{
    return static_cast<unsigned long>(4 * den_of(c.eps) * den_of(c.eps_prime));
}

long exponent_grid(const ThetaSpec &s)
{
    const long k = den_of(s.chr.eps);
    return 8 * k * k * den_of(s.tau_mult);
}

Rational theta_valuation_bound(const ThetaSpec &s)
{
    const Rational r = mod(s.chr.eps, Rational(2));
    const Rational hat = r <= 1 ? r : Rational(2 - r);
    return s.tau_mult * hat * hat / 8;
}

PuiseuxSeries theta_constant(const ThetaSpec &s, const Rational &T)
{
    return theta_sum(s, T, false);
}

PuiseuxSeries theta_derivative_reduced(const ThetaSpec &s, const Rational &T)
{
    return theta_sum(s, T, true);
}

PuiseuxSeries theta_series(const ThetaSpec &s, const Rational &T)
{
    return s.derived ? theta_derivative_reduced(s, T) : theta_constant(s, T);
}

PuiseuxSeries theta_triple_product(const ThetaSpec &s, const Rational &T)
{
    check_spec(s, T);
    const Rational &eps = s.chr.eps;
    const Rational &epsp = s.chr.eps_prime;
    const unsigned long L = coefficient_order(s.chr);
    // x^a = q^{m a / 2}; every x-exponent below lives on the grid 1/den(eps).
    const long D = 2 * den_of(eps) * den_of(s.tau_mult);
    const auto q_exp = [&](const Rational &xa) { return Rational(s.tau_mult * xa / 2); };

    // Prefactor exp(pi i eps eps'/2) x^{eps^2/4}; factors 1 + c x^a with a <= 0 are folded
    // into it as c x^a (1 + c^-1 x^-a) or as the constant 1 + c.
    CycNum lead = root_of_unity(eps * epsp / 4, L);
    Rational lead_exp = q_exp(eps * eps / 4);
    std::vector<std::pair<CycNum, Rational>> factors;
    const CycNum w = root_of_unity(epsp / 2, L);
    const CycNum winv = root_of_unity(-epsp / 2, L);
    const auto add_factor = [&](const CycNum &c, const Rational &xa) {
        if (xa > 0) {
            factors.emplace_back(c, q_exp(xa));
        } else if (xa == 0) {
            lead *= CycNum(1, L) + c;
        } else {
            lead *= c;
            lead_exp += q_exp(xa);
            factors.emplace_back(c.inverse(), q_exp(-xa));
        }
    };

    // Factors with x-exponent at least 2n - 1 - |eps| stop mattering once that passes the
    // budget; the budget is only known after the folded monomials, so collect generously.
    const Rational margin = abs(eps) + 2;
    for (long n = 1;; ++n) {
        const Rational base(2 * n - 1);
        if (q_exp(base - margin) >= T - lead_exp && base > margin) {
            break;
        }
        add_factor(CycNum(-1, L), Rational(2 * n));
        add_factor(w, base + eps);
        add_factor(winv, base - eps);
    }
    if (lead.is_zero()) {
        return PuiseuxSeries::from_terms(1, L, {}, std::nullopt);
    }

    const Rational budget = T - lead_exp;
    const long Dq = std::lcm(D, den_of(lead_exp));
    if (budget <= 0) {
        return PuiseuxSeries::zero(T);
    }
    const long kmax = to_long(ceil(budget * Dq)) - 1;
    PuiseuxSeries::Terms unit;
    unit.emplace(0, CycNum(1, L));
    for (const auto &[c, e] : factors) {
        const Rational kb = e * Dq;
        const long b = to_long(kb.get_num());
        if (b > kmax) {
            continue;
        }
        // unit *= (1 + c q^{b/Dq}), in place from the top.
        std::vector<long> keys;
        for (auto it = unit.begin(); it != unit.end() && it->first + b <= kmax; ++it) {
            keys.push_back(it->first);
        }
        for (auto it = keys.rbegin(); it != keys.rend(); ++it) {
            const long k = *it + b;
            CycNum add = unit.at(*it) * c;
            auto [jt, inserted] = unit.try_emplace(k, add);
            if (!inserted) {
                jt->second += add;
            }
        }
    }
    auto u = PuiseuxSeries::from_terms(Dq, L, std::move(unit), budget);
    return ps_mul(PuiseuxSeries::monomial(lead, lead_exp), u);
}

ReducedCharacteristic reduce_characteristic(const Rational &eps, const Rational &eps_prime, bool derived)
{
    const Rational two(2);
    Rational e = mod(eps, two);
    Rational ep = eps_prime;
    CycNum scalar(1);
    const bool negate = e > 1 || ((e == 0 || e == 1) && mod(ep, two) > 1);
    if (negate) {
        e = mod(-e, two);
        ep = -ep;
        if (derived) {
            scalar = CycNum(-1);
        }
    }
    const Integer n = floor(ep / 2);
    ep -= 2 * Rational(n);
    // theta[e; ep + 2n] = exp(pi i e n) theta[e; ep].
    scalar *= root_of_unity(e * Rational(n) / 2);
    return {{e, ep}, scalar};
}

std::pair<Rational, Rational> theta_zero_location(const Characteristic &c)
{
    return {(1 - c.eps) / 2, (1 - c.eps_prime) / 2};
}

Characteristic mumford_convert(const Rational &a, const Rational &b)
{
    return {2 * a, 2 * b};
}

} // namespace thetaq
