#include <thetaq/cyclotomic.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <numbers>
#include <ostream>
#include <sstream>

#include <thetaq/errors.hpp>

namespace thetaq
{

namespace detail
{

namespace
{

// Exact division of integer polynomials by a monic divisor; the remainder must vanish.
std::vector<Integer> divide_exact(std::vector<Integer> num, const std::vector<long> &den)
{
    const std::size_t dn = den.size() - 1;
    const std::size_t nn = num.size() - 1;
    std::vector<Integer> quot(nn - dn + 1);
    for (std::size_t k = nn + 1; k-- > dn;) {
        const Integer c = num[k];
        quot[k - dn] = c;
        if (c != 0) {
            for (std::size_t i = 0; i <= dn; ++i) {
                num[k - dn + i] -= c * den[i];
            }
        }
    }
    return quot;
}

std::unique_ptr<CyclotomicField> build_field(unsigned long order)
{
    // x^L - 1 divided by Phi_d over the proper divisors d of L.
    std::vector<Integer> poly(order + 1);
    poly[0] = -1;
    poly[order] = 1;
    for (unsigned long d = 1; d < order; ++d) {
        if (order % d == 0) {
            poly = divide_exact(std::move(poly), cyclotomic_field(d).modulus);
        }
    }
    auto f = std::make_unique<CyclotomicField>();
    f->order = order;
    f->degree = poly.size() - 1;
    f->modulus.reserve(poly.size());
    for (const auto &c : poly) {
        f->modulus.push_back(to_long(c));
    }
    for (std::size_t i = 0; i < f->degree; ++i) {
        if (f->modulus[i] != 0) {
            f->modulus_support.push_back(i);
        }
    }
    return f;
}

} // namespace

const CyclotomicField &cyclotomic_field(unsigned long order)
{
    if (order == 0) {
        throw DomainError("cyclotomic order must be positive");
    }
    static std::recursive_mutex mtx;
    static std::map<unsigned long, std::unique_ptr<CyclotomicField>> fields;
    std::lock_guard lock(mtx);
    auto it = fields.find(order);
    if (it == fields.end()) {
        it = fields.emplace(order, build_field(order)).first;
    }
    return *it->second;
}

void reduce_mod_cyclotomic(const CyclotomicField &f, std::vector<Integer> &poly)
{
    const std::size_t deg = f.degree;
    for (std::size_t k = poly.size(); k-- > deg;) {
        if (poly[k] == 0) {
            continue;
        }
        // x^k = x^(k-deg) * x^deg, x^deg = -sum_{i<deg} Phi[i] x^i.
        auto &c = poly[k];
        for (const auto i : f.modulus_support) {
            const long m = f.modulus[i];
            auto &target = poly[k - deg + i];
            if (m == 1) {
                mpz_sub(target.get_mpz_t(), target.get_mpz_t(), c.get_mpz_t());
            } else if (m == -1) {
                mpz_add(target.get_mpz_t(), target.get_mpz_t(), c.get_mpz_t());
            } else if (m > 0) {
                mpz_submul_ui(target.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(m));
            } else {
                mpz_addmul_ui(target.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(-m));
            }
        }
        c = 0;
    }
    poly.resize(deg);
}

} // namespace detail

unsigned long euler_phi(unsigned long n)
{
    unsigned long result = n;
    for (unsigned long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) {
                n /= p;
            }
            result -= result / p;
        }
    }
    if (n > 1) {
        result -= result / n;
    }
    return result;
}

std::vector<Rational> cyclotomic_polynomial(unsigned long order)
{
    const auto &f = detail::cyclotomic_field(order);
    std::vector<Rational> out;
    out.reserve(f.modulus.size());
    for (const long c : f.modulus) {
        out.emplace_back(c);
    }
    return out;
}

CycNum::CycNum() : CycNum(Rational(0), 1) {}

CycNum::CycNum(const Rational &r, unsigned long order)
    : field_(&detail::cyclotomic_field(order)), num_(field_->degree), den_(r.get_den())
{
    num_[0] = r.get_num();
}

CycNum::CycNum(const detail::CyclotomicField *f, std::vector<Integer> num, Integer den)
    : field_(f), num_(std::move(num)), den_(std::move(den))
{
}

CycNum CycNum::from_scaled(unsigned long order, std::vector<Integer> poly, Integer den)
{
    if (den == 0) {
        throw DivisionByZero("zero denominator");
    }
    const auto &f = detail::cyclotomic_field(order);
    if (poly.size() < f.degree) {
        poly.resize(f.degree);
    }
    detail::reduce_mod_cyclotomic(f, poly);
    CycNum out(&f, std::move(poly), std::move(den));
    out.normalize();
    return out;
}

CycNum CycNum::from_polynomial(unsigned long order, const std::vector<Rational> &poly)
{
    Integer den = 1;
    for (const auto &c : poly) {
        den = lcm(den, Integer(c.get_den()));
    }
    std::vector<Integer> scaled;
    scaled.reserve(poly.size());
    for (const auto &c : poly) {
        scaled.emplace_back(c.get_num() * (den / c.get_den()));
    }
    return from_scaled(order, std::move(scaled), std::move(den));
}

void CycNum::normalize()
{
    if (den_ < 0) {
        den_ = -den_;
        for (auto &c : num_) {
            c = -c;
        }
    }
    if (den_ == 1) {
        return;
    }
    Integer g = den_;
    for (const auto &c : num_) {
        if (c != 0) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
            if (g == 1) {
                return;
            }
        }
    }
    if (is_zero()) {
        den_ = 1;
        return;
    }
    for (auto &c : num_) {
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    }
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
}

Rational CycNum::coeff(std::size_t i) const
{
    Rational r(num_.at(i), den_);
    r.canonicalize();
    return r;
}

std::vector<Rational> CycNum::coeffs() const
{
    std::vector<Rational> out;
    out.reserve(num_.size());
    for (std::size_t i = 0; i < num_.size(); ++i) {
        out.push_back(coeff(i));
    }
    return out;
}

bool CycNum::is_zero() const
{
    return std::all_of(num_.begin(), num_.end(), [](const Integer &c) { return c == 0; });
}

bool CycNum::is_rational() const
{
    return std::all_of(num_.begin() + 1, num_.end(), [](const Integer &c) { return c == 0; });
}

CycNum CycNum::promote(unsigned long m) const
{
    if (m == order()) {
        return *this;
    }
    if (m == 0 || m % order() != 0) {
        throw IncompatibleOrder("cannot promote order " + std::to_string(order()) + " to " + std::to_string(m));
    }
    const unsigned long step = m / order();
    std::vector<Integer> poly(std::max<std::size_t>(m, 1));
    for (std::size_t i = 0; i < num_.size(); ++i) {
        if (num_[i] != 0) {
            poly[(i * step) % m] += num_[i];
        }
    }
    return from_scaled(m, std::move(poly), den_);
}

namespace
{

using QPoly = std::vector<Rational>;

void trim(QPoly &p)
{
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

// a = q * b + r with deg r < deg b.
void divmod(const QPoly &a, const QPoly &b, QPoly &q, QPoly &r)
{
    r = a;
    trim(r);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rational(0));
    while (!r.empty() && r.size() >= b.size()) {
        const std::size_t shift = r.size() - b.size();
        const Rational c = r.back() / b.back();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) {
            r[shift + i] -= c * b[i];
        }
        trim(r);
    }
}

QPoly sub_mul(const QPoly &a, const QPoly &q, const QPoly &b)
{
    QPoly out(std::max(a.size(), q.size() + b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i];
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] -= q[i] * b[j];
        }
    }
    trim(out);
    return out;
}

} // namespace

CycNum CycNum::inverse() const
{
    if (is_zero()) {
        throw DivisionByZero("inverse of zero cyclotomic number");
    }
    // Extended Euclid in Q[x] against the irreducible modulus.
    QPoly r0 = cyclotomic_polynomial(order());
    QPoly r1 = coeffs();
    trim(r1);
    QPoly s0, s1{Rational(1)};
    while (r1.size() > 1) {
        QPoly q, r;
        divmod(r0, r1, q, r);
        QPoly s = sub_mul(s0, q, s1);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    const Rational c = r1.at(0);
    for (auto &x : s1) {
        x /= c;
    }
    return from_polynomial(order(), s1);
}

CycNum CycNum::operator-() const
{
    CycNum out(*this);
    for (auto &c : out.num_) {
        c = -c;
    }
    return out;
}

namespace
{

void unify(CycNum &a, CycNum &b)
{
    if (a.order() != b.order()) {
        const unsigned long m = std::lcm(a.order(), b.order());
        a = a.promote(m);
        b = b.promote(m);
    }
}

} // namespace

CycNum &CycNum::operator+=(const CycNum &other)
{
    if (other.order() != order()) {
        CycNum o(other);
        unify(*this, o);
        return *this += o;
    }
    if (den_ == other.den_) {
        for (std::size_t i = 0; i < num_.size(); ++i) {
            num_[i] += other.num_[i];
        }
    } else {
        for (std::size_t i = 0; i < num_.size(); ++i) {
            num_[i] = num_[i] * other.den_ + other.num_[i] * den_;
        }
        den_ *= other.den_;
    }
    normalize();
    return *this;
}

CycNum &CycNum::operator-=(const CycNum &other)
{
    return *this += -other;
}

CycNum operator*(const CycNum &a, const CycNum &b)
{
    if (a.order() != b.order()) {
        CycNum x(a), y(b);
        unify(x, y);
        return x * y;
    }
    const std::size_t n = a.degree();
    std::vector<Integer> prod(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (a.num_[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (b.num_[j] != 0) {
                mpz_addmul(prod[i + j].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
            }
        }
    }
    return CycNum::from_scaled(a.order(), std::move(prod), a.den_ * b.den_);
}

CycNum &CycNum::operator*=(const CycNum &other)
{
    return *this = *this * other;
}

bool operator==(const CycNum &a, const CycNum &b)
{
    if (a.order() != b.order()) {
        CycNum x(a), y(b);
        unify(x, y);
        return x == y;
    }
    return a.den_ == b.den_ && a.num_ == b.num_;
}

CycNum zeta(unsigned long order, long j)
{
    const long L = static_cast<long>(order);
    const long k = ((j % L) + L) % L;
    std::vector<Integer> poly(static_cast<std::size_t>(k) + 1);
    poly[static_cast<std::size_t>(k)] = 1;
    return CycNum::from_scaled(order, std::move(poly), 1);
}

CycNum root_of_unity(const Rational &turns, unsigned long order)
{
    const Rational t = frac(turns);
    const unsigned long den = t.get_den().get_ui();
    if (order == 0) {
        order = den;
    }
    if (order % den != 0) {
        throw IncompatibleOrder("root of unity exp(2 pi i " + t.get_str() + ") is not in Q(zeta_" +
                                std::to_string(order) + ")");
    }
    return zeta(order, static_cast<long>(t.get_num().get_ui() * (order / den)));
}

std::complex<double> embed(const CycNum &a)
{
    const double w = 2 * std::numbers::pi / static_cast<double>(a.order());
    std::complex<double> acc = 0;
    const double den = a.denominator().get_d();
    for (std::size_t i = 0; i < a.degree(); ++i) {
        const auto &c = a.numerators()[i];
        if (c != 0) {
            acc += c.get_d() / den * std::polar(1.0, w * static_cast<double>(i));
        }
    }
    return acc;
}

std::string to_text(const CycNum &a)
{
    std::ostringstream os;
    os << "L=" << a.order() << "; ";
    bool first = true;
    for (std::size_t i = 0; i < a.degree(); ++i) {
        Rational c = a.coeff(i);
        if (c == 0) {
            continue;
        }
        if (first) {
            os << c.get_str();
        } else {
            os << (c < 0 ? " - " : " + ") << Rational(abs(c)).get_str();
        }
        os << "*z^" << i;
        first = false;
    }
    if (first) {
        os << "0*z^0";
    }
    return os.str();
}

CycNum parse_cycnum(std::string_view text)
{
    const std::string s(text);
    const auto fail = [&](const std::string &why) { throw ParseError("malformed cyclotomic number '" + s + "': " + why); };
    std::size_t pos = s.find_first_not_of(' ');
    if (pos == std::string::npos || s.compare(pos, 2, "L=") != 0) {
        fail("missing L= header");
    }
    pos += 2;
    const std::size_t semi = s.find(';', pos);
    if (semi == std::string::npos) {
        fail("missing ';'");
    }
    unsigned long order = 0;
    try {
        order = std::stoul(s.substr(pos, semi - pos));
    } catch (const std::exception &) {
        fail("bad order");
    }
    if (order == 0) {
        fail("order must be positive");
    }
    std::vector<Rational> poly;
    pos = semi + 1;
    int sign = 1;
    bool expect_term = true;
    while (true) {
        while (pos < s.size() && s[pos] == ' ') {
            ++pos;
        }
        if (pos >= s.size()) {
            break;
        }
        if (!expect_term) {
            if (s[pos] == '+' || s[pos] == '-') {
                sign = s[pos] == '-' ? -1 : 1;
                ++pos;
                expect_term = true;
                continue;
            }
            fail("expected '+' or '-'");
        }
        const std::size_t star = s.find("*z^", pos);
        if (star == std::string::npos) {
            fail("expected term rat*z^k");
        }
        Rational c = parse_rational(s.substr(pos, star - pos)) * sign;
        pos = star + 3;
        std::size_t end = pos;
        while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) {
            ++end;
        }
        if (end == pos) {
            fail("missing exponent");
        }
        const auto k = std::stoul(s.substr(pos, end - pos));
        if (poly.size() <= k) {
            poly.resize(k + 1, Rational(0));
        }
        poly[k] += c;
        pos = end;
        sign = 1;
        expect_term = false;
    }
    if (expect_term) {
        fail("dangling operator");
    }
    return CycNum::from_polynomial(order, poly);
}

std::ostream &operator<<(std::ostream &os, const CycNum &a)
{
    return os << to_text(a);
}

} // namespace thetaq
