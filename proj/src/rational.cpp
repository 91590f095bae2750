#include <thetaq/rational.hpp>

#include <cctype>
#include <limits>
#include <numeric>

#include <thetaq/errors.hpp>

namespace thetaq
{

namespace
{

bool is_integer_literal(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) {
        return false;
    }
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    return true;
}

std::string strip(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    std::string out(s);
    if (!out.empty() && out[0] == '+') {
        out.erase(0, 1);
    }
    return out;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    const auto s = strip(text);
    const auto slash = s.find('/');
    const auto num = s.substr(0, slash);
    if (!is_integer_literal(num)) {
        throw ParseError("malformed rational '" + std::string(text) + "'");
    }
    Rational r;
    if (slash == std::string::npos) {
        r = Rational(Integer(num), 1);
    } else {
        const auto den = s.substr(slash + 1);
        if (!is_integer_literal(den) || den[0] == '-' || Integer(den) == 0) {
            throw ParseError("malformed rational '" + std::string(text) + "'");
        }
        r = Rational(Integer(num), Integer(den));
    }
    r.canonicalize();
    return r;
}

std::string to_string(const Rational &r)
{
    return r.get_str();
}

Integer floor(const Rational &r)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Integer ceil(const Rational &r)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Rational frac(const Rational &r)
{
    return r - Rational(floor(r));
}

Rational mod(const Rational &r, const Rational &m)
{
    const Rational q = r / m;
    return r - Rational(floor(q)) * m;
}

Integer lcm(const Integer &a, const Integer &b)
{
    Integer out;
    mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

long lcm(long a, long b)
{
    return std::lcm(a, b);
}

long to_long(const Integer &z)
{
    if (!z.fits_slong_p()) {
        throw DomainError("integer " + z.get_str() + " does not fit in a machine word");
    }
    return z.get_si();
}

Order min_order(const Order &a, const Order &b)
{
    if (!a) {
        return b;
    }
    if (!b) {
        return a;
    }
    return *a < *b ? a : b;
}

Order add_order(const Order &a, const Rational &shift)
{
    if (!a) {
        return a;
    }
    return Rational(*a + shift);
}

std::string to_string(const Order &o)
{
    return o ? o->get_str() : std::string("inf");
}

} // namespace thetaq
