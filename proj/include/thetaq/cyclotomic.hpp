#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <thetaq/rational.hpp>

namespace thetaq
{

namespace detail
{

// Immutable description of Q(zeta_L): the modulus Phi_L and its sparsity pattern.
struct CyclotomicField {
    unsigned long order;
    std::size_t degree;
    // Monic Phi_L, ascending coefficients, size degree + 1.
    std::vector<long> modulus;
    // Indices i < degree with modulus[i] != 0.
    std::vector<std::size_t> modulus_support;
};

// Fields are built once per order and live for the duration of the process.
const CyclotomicField &cyclotomic_field(unsigned long order);

// Reduce an integer polynomial (any length) modulo Phi_L, leaving `degree` coefficients.
void reduce_mod_cyclotomic(const CyclotomicField &f, std::vector<Integer> &poly);

} // namespace detail

unsigned long euler_phi(unsigned long n);

// Phi_L, ascending coefficients, monic, degree phi(L).
std::vector<Rational> cyclotomic_polynomial(unsigned long order);

// An element of Q(zeta_L) stored as the unique representative of degree < phi(L),
// i.e. numerators()[i] / denominator() is the coefficient of zeta_L^i.
class CycNum
{
public:
    CycNum();
    explicit CycNum(const Rational &r, unsigned long order = 1);
    CycNum(long v) : CycNum(Rational(v)) {}

    // Coefficients of an arbitrary-degree polynomial in zeta_L; reduced mod Phi_L.
    static CycNum from_polynomial(unsigned long order, const std::vector<Rational> &poly);
    // (poly / den) in zeta_L; poly may have any length, den must be nonzero.
    static CycNum from_scaled(unsigned long order, std::vector<Integer> poly, Integer den);

    unsigned long order() const noexcept
    {
        return field_->order;
    }
    std::size_t degree() const noexcept
    {
        return field_->degree;
    }
    const detail::CyclotomicField &field() const noexcept
    {
        return *field_;
    }
    const std::vector<Integer> &numerators() const noexcept
    {
        return num_;
    }
    const Integer &denominator() const noexcept
    {
        return den_;
    }

    Rational coeff(std::size_t i) const;
    std::vector<Rational> coeffs() const;
    bool is_zero() const;
    bool is_rational() const;

    // Same element written in Q(zeta_m); order() must divide m.
    CycNum promote(unsigned long m) const;
    CycNum inverse() const;

    CycNum operator-() const;
    CycNum &operator+=(const CycNum &other);
    CycNum &operator-=(const CycNum &other);
    CycNum &operator*=(const CycNum &other);

    friend CycNum operator+(CycNum a, const CycNum &b)
    {
        return a += b;
    }
    friend CycNum operator-(CycNum a, const CycNum &b)
    {
        return a -= b;
    }
    friend CycNum operator*(const CycNum &a, const CycNum &b);
    friend bool operator==(const CycNum &a, const CycNum &b);

private:
    CycNum(const detail::CyclotomicField *f, std::vector<Integer> num, Integer den);
    void normalize();

    const detail::CyclotomicField *field_;
    std::vector<Integer> num_;
    Integer den_;
};

// zeta_L^j, j taken mod L.
CycNum zeta(unsigned long order, long j);
// exp(2 pi i * turns). With order == 0 the smallest field containing it is used,
// otherwise the result lives in Q(zeta_order) (the denominator of turns must divide it).
CycNum root_of_unity(const Rational &turns, unsigned long order = 0);

inline CycNum inv(const CycNum &a)
{
    return a.inverse();
}
inline CycNum promote(const CycNum &a, unsigned long m)
{
    return a.promote(m);
}

// Double-precision embedding zeta_L -> exp(2 pi i / L). See thetaq/embed.hpp for
// higher precision.
std::complex<double> embed(const CycNum &a);

// "L=8; 1*z^1 + 1*z^7". Zero prints as "L=<order>; 0*z^0".
std::string to_text(const CycNum &a);
CycNum parse_cycnum(std::string_view text);
std::ostream &operator<<(std::ostream &os, const CycNum &a);

} // namespace thetaq
