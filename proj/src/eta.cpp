#include <thetaq/eta.hpp>

#include <cctype>
#include <set>
#include <sstream>

#include <thetaq/errors.hpp>

namespace thetaq
{

namespace
{

long slots_below(const Rational &T)
{
    return T <= 0 ? 0 : to_long(ceil(T));
}

PuiseuxSeries integer_series(const std::vector<Integer> &c, const Rational &shift, const Rational &T)
{
    PuiseuxSeries::Terms terms;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] != 0) {
            terms.emplace_hint(terms.end(), static_cast<long>(k), CycNum(Rational(c[k])));
        }
    }
    auto unit = PuiseuxSeries::from_terms(1, 1, std::move(terms), T - shift);
    return ps_mul(PuiseuxSeries::monomial(CycNum(1), shift), unit);
}

// c *= (1 - q^k)^r on a dense coefficient vector.
void apply_binomial(std::vector<Integer> &c, long k, long r)
{
    const long N = static_cast<long>(c.size());
    if (k >= N) {
        return;
    }
    for (long t = 0; t < r; ++t) {
        for (long i = N - 1; i >= k; --i) {
            c[i] -= c[i - k];
        }
    }
    for (long t = 0; t < -r; ++t) {
        for (long i = k; i < N; ++i) {
            c[i] += c[i - k];
        }
    }
}

} // namespace

void validate(const EtaQuotient &e)
{
    std::set<long> seen;
    for (const auto &f : e.factors) {
        if (f.mult <= 0) {
            throw DomainError("eta multiplier must be positive");
        }
        if (f.exp == 0) {
            throw DomainError("eta exponent must be nonzero");
        }
        if (!seen.insert(f.mult).second) {
            throw DomainError("repeated eta multiplier " + std::to_string(f.mult));
        }
    }
}

Rational eta_valuation(const EtaQuotient &e)
{
    Rational v(0);
    for (const auto &f : e.factors) {
        v += rat(f.exp * f.mult, 24);
    }
    return v;
}

PuiseuxSeries euler_product(const Rational &T)
{
    std::vector<Integer> c(static_cast<std::size_t>(slots_below(T)));
    if (!c.empty()) {
        c[0] = 1;
    }
    for (long n = 1; n < static_cast<long>(c.size()); ++n) {
        apply_binomial(c, n, 1);
    }
    return integer_series(c, Rational(0), T);
}

PuiseuxSeries eta_series(long m, const Rational &T)
{
    if (m <= 0) {
        throw DomainError("eta multiplier must be positive");
    }
    const Rational shift = rat(m, 24);
    const Rational inner = (T - shift) / m;
    if (inner <= 0) {
        return PuiseuxSeries::zero(T);
    }
    return ps_mul(PuiseuxSeries::monomial(CycNum(1), shift), ps_scale_exponents(euler_product(inner), Rational(m)));
}

PuiseuxSeries eta_quotient_series(const EtaQuotient &e, const Rational &T)
{
    validate(e);
    const Rational v = eta_valuation(e);
    const Rational budget = T - v;
    if (budget <= 0) {
        return PuiseuxSeries::zero(T);
    }
    // Each factor is q^{m r/24} times a unit; the units are needed below T - v.
    PuiseuxSeries acc = PuiseuxSeries::constant(CycNum(1));
    for (const auto &f : e.factors) {
        const auto unit = ps_scale_exponents(euler_product(budget / f.mult), Rational(f.mult));
        acc = ps_mul(acc, ps_pow(unit, f.exp, budget));
    }
    return ps_mul(PuiseuxSeries::monomial(CycNum(1), v), acc);
}

EtaQuotient parse_eta_quotient(std::string_view text)
{
    EtaQuotient out;
    std::string s(text);
    std::string clean;
    for (char ch : s) {
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            clean += ch;
        }
    }
    if (clean.empty()) {
        throw ParseError("empty eta quotient");
    }
    std::stringstream ss(clean);
    std::string item;
    while (std::getline(ss, item, '*')) {
        const auto caret = item.find('^');
        try {
            std::size_t used = 0;
            const std::string ms = item.substr(0, caret);
            const long m = std::stol(ms, &used);
            if (used != ms.size()) {
                throw ParseError("");
            }
            long r = 1;
            if (caret != std::string::npos) {
                const std::string rs = item.substr(caret + 1);
                r = std::stol(rs, &used);
                if (used != rs.size()) {
                    throw ParseError("");
                }
            }
            out.factors.push_back({m, r});
        } catch (const std::exception &) {
            throw ParseError("malformed eta factor '" + item + "' in '" + s + "'");
        }
    }
    if (clean.back() == '*') {
        throw ParseError("dangling '*' in eta quotient '" + s + "'");
    }
    try {
        validate(out);
    } catch (const DomainError &err) {
        throw ParseError(err.what());
    }
    return out;
}

std::string to_string(const EtaQuotient &e)
{
    std::string out;
    for (const auto &f : e.factors) {
        if (!out.empty()) {
            out += " * ";
        }
        out += std::to_string(f.mult) + "^" + std::to_string(f.exp);
    }
    return out;
}

PuiseuxSeries q_product_series(const QProduct &p, const Rational &T)
{
    const Rational budget = T - p.shift;
    if (budget <= 0) {
        return PuiseuxSeries::zero(T);
    }
    std::vector<Integer> c(static_cast<std::size_t>(slots_below(budget)));
    c[0] = 1;
    const long N = static_cast<long>(c.size());
    for (const auto &f : p.factors) {
        if (f.modulus <= 0 || f.residue < 0 || f.residue >= f.modulus) {
            throw DomainError("q-product factor needs 0 <= residue < modulus");
        }
        for (long n = 1; f.modulus * n - f.residue < N; ++n) {
            apply_binomial(c, f.modulus * n - f.residue, f.exp);
        }
    }
    return integer_series(c, p.shift, T);
}

std::string to_string(const QProduct &p)
{
    std::string out = "q^(" + p.shift.get_str() + ")";
    for (const auto &f : p.factors) {
        out += " prod(1-q^(" + std::to_string(f.modulus) + "n-" + std::to_string(f.residue) + "))^" +
               std::to_string(f.exp);
    }
    return out;
}

} // namespace thetaq
