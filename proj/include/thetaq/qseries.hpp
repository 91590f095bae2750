#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <thetaq/cyclotomic.hpp>
#include <thetaq/rational.hpp>

namespace thetaq
{

// Sum of c_k q^(k/D) over finitely many k, known exactly for exponents below trunc().
// An empty trunc() means the stored terms are the whole series.
class PuiseuxSeries
{
public:
    using Terms = std::map<long, CycNum>;

    // Exact zero.
    PuiseuxSeries();

    // Drops zero coefficients and exponents >= trunc, promotes coefficients to a common
    // order and shrinks D to the gcd-reduced grid. `order` is a lower bound for the
    // coefficient order; it grows to cover every coefficient.
    static PuiseuxSeries from_terms(long denom, unsigned long order, Terms terms, Order trunc);
    static PuiseuxSeries constant(const CycNum &c, Order trunc = std::nullopt);
    static PuiseuxSeries monomial(const CycNum &c, const Rational &exponent, Order trunc = std::nullopt);
    // Nothing known below trunc except that it vanishes there.
    static PuiseuxSeries zero(const Rational &trunc);

    long denom() const noexcept
    {
        return denom_;
    }
    unsigned long coeff_order() const noexcept
    {
        return order_;
    }
    const Order &trunc() const noexcept
    {
        return trunc_;
    }
    bool is_exact() const noexcept
    {
        return !trunc_.has_value();
    }
    const Terms &terms() const noexcept
    {
        return terms_;
    }
    std::size_t size() const noexcept
    {
        return terms_.size();
    }
    // No stored term (the series vanishes below trunc).
    bool empty() const noexcept
    {
        return terms_.empty();
    }

    // Coefficient of q^e; throws OrderTooHigh for e >= trunc.
    CycNum coeff(const Rational &e) const;
    // Smallest stored exponent, or nullopt when empty.
    std::optional<Rational> valuation() const;
    // Valuation, or trunc when empty (nullopt for the exact zero).
    Order valuation_or_trunc() const;
    // Exponent of the stored term k.
    Rational exponent(long k) const
    {
        return rat(k, denom_);
    }

    // Keep only exponents below t (a no-op if t >= trunc).
    PuiseuxSeries truncated(const Rational &t) const;

private:
    long denom_ = 1;
    unsigned long order_ = 1;
    Terms terms_;
    Order trunc_;
};

PuiseuxSeries ps_add(const PuiseuxSeries &a, const PuiseuxSeries &b);
PuiseuxSeries ps_sub(const PuiseuxSeries &a, const PuiseuxSeries &b);
PuiseuxSeries ps_neg(const PuiseuxSeries &a);
PuiseuxSeries ps_scale(const PuiseuxSeries &a, const CycNum &c);
// Result is exact below min(T_a + v_b, T_b + v_a).
PuiseuxSeries ps_mul(const PuiseuxSeries &a, const PuiseuxSeries &b);
// a = c q^v (1 + u): the inverse is exact below T_a - 2v. For an exact series that is
// not a monomial an explicit order is required; `order` also caps the result.
PuiseuxSeries ps_inv(const PuiseuxSeries &a, Order order = std::nullopt);
PuiseuxSeries ps_pow(const PuiseuxSeries &a, long k, Order order = std::nullopt);
// tau -> m tau.
PuiseuxSeries ps_scale_exponents(const PuiseuxSeries &a, const Rational &m);

struct Mismatch {
    Rational exponent;
    CycNum diff;
};

struct Comparison {
    bool equal = true;
    std::optional<Mismatch> first_mismatch;
};

// Compares a - b on exponents below t. Throws OrderTooHigh if t exceeds either trunc.
Comparison ps_equal_to_order(const PuiseuxSeries &a, const PuiseuxSeries &b, const Rational &t);

inline PuiseuxSeries operator+(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    return ps_add(a, b);
}
inline PuiseuxSeries operator-(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    return ps_sub(a, b);
}
inline PuiseuxSeries operator-(const PuiseuxSeries &a)
{
    return ps_neg(a);
}
inline PuiseuxSeries operator*(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    return ps_mul(a, b);
}
inline PuiseuxSeries operator*(const CycNum &c, const PuiseuxSeries &a)
{
    return ps_scale(a, c);
}

// Header "D=<D>; L=<L>; T=<rat|inf>" followed by one "q^(<k>/<D>): <cycnum>" line per term.
std::string to_text(const PuiseuxSeries &a);
PuiseuxSeries parse_series(std::string_view text);
std::ostream &operator<<(std::ostream &os, const PuiseuxSeries &a);

} // namespace thetaq
