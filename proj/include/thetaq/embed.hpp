#pragma once

#include <complex>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/float128.hpp>

#include <thetaq/cyclotomic.hpp>

namespace thetaq
{

using Real33 = boost::multiprecision::float128;
using Real50 = boost::multiprecision::cpp_bin_float_50;
using Real100 = boost::multiprecision::cpp_bin_float_100;

template <class Real> struct ComplexOf;
template <> struct ComplexOf<double> {
    using type = std::complex<double>;
};
template <> struct ComplexOf<Real33> {
    using type = boost::multiprecision::complex128;
};
template <> struct ComplexOf<Real50> {
    using type = boost::multiprecision::cpp_complex_50;
};
template <> struct ComplexOf<Real100> {
    using type = boost::multiprecision::cpp_complex_100;
};

template <class Real> using Complex = typename ComplexOf<Real>::type;

template <class Real> Real to_real(const Integer &z)
{
    if constexpr (std::is_same_v<Real, double>) {
        return z.get_d();
    } else {
        return Real(z.get_str());
    }
}

template <class Real> Real to_real(const Rational &r)
{
    if constexpr (std::is_same_v<Real, double>) {
        return r.get_d();
    } else {
        return to_real<Real>(Integer(r.get_num())) / to_real<Real>(Integer(r.get_den()));
    }
}

// exp(2 pi i * turns).
template <class Real> Complex<Real> unit_root(const Real &turns)
{
    const Real angle = 2 * boost::math::constants::pi<Real>() * turns;
    using std::cos;
    using std::sin;
    return Complex<Real>(cos(angle), sin(angle));
}

template <class Real> Complex<Real> embed_as(const CycNum &a)
{
    Complex<Real> acc(0);
    const Real den = to_real<Real>(a.denominator());
    const Real L = Real(static_cast<long>(a.order()));
    for (std::size_t i = 0; i < a.degree(); ++i) {
        const auto &c = a.numerators()[i];
        if (c != 0) {
            acc += unit_root<Real>(Real(static_cast<long>(i)) / L) * (to_real<Real>(c) / den);
        }
    }
    return acc;
}

} // namespace thetaq
