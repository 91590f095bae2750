#include <thetaq/qseries.hpp>

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

#include <thetaq/errors.hpp>

namespace thetaq
{

namespace
{

// Largest k with k / D < t.
long last_below(const Rational &t, long D)
{
    return to_long(ceil(t * D)) - 1;
}

bool below(long k, long D, const Order &t)
{
    return !t || rat(k, D) < *t;
}

// Integer numerators of every term on a common grid, sharing one denominator.
struct ScaledTerm {
    long k;
    std::vector<std::pair<std::size_t, Integer>> nz;
};

std::vector<ScaledTerm> scale_terms(const PuiseuxSeries &a, long step, unsigned long order, Integer &den)
{
    std::vector<CycNum> coeffs;
    coeffs.reserve(a.size());
    den = 1;
    for (const auto &[k, c] : a.terms()) {
        coeffs.push_back(c.promote(order));
        den = lcm(den, coeffs.back().denominator());
    }
    std::vector<ScaledTerm> out;
    out.reserve(a.size());
    std::size_t idx = 0;
    for (const auto &[k, c] : a.terms()) {
        const auto &cc = coeffs[idx++];
        ScaledTerm t{k * step, {}};
        const Integer f = den / cc.denominator();
        for (std::size_t i = 0; i < cc.degree(); ++i) {
            if (cc.numerators()[i] != 0) {
                t.nz.emplace_back(i, cc.numerators()[i] * f);
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace

PuiseuxSeries::PuiseuxSeries() = default;

PuiseuxSeries PuiseuxSeries::from_terms(long denom, unsigned long order, Terms terms, Order trunc)
{
    if (denom <= 0) {
        throw DomainError("series grid denominator must be positive");
    }
    unsigned long L = std::max(order, 1ul);
    for (const auto &[k, c] : terms) {
        L = std::lcm(L, c.order());
    }
    PuiseuxSeries out;
    out.trunc_ = std::move(trunc);
    out.order_ = L;
    long g = denom;
    for (auto it = terms.begin(); it != terms.end();) {
        if (it->second.is_zero() || !below(it->first, denom, out.trunc_)) {
            it = terms.erase(it);
        } else {
            if (it->second.order() != L) {
                it->second = it->second.promote(L);
            }
            g = std::gcd(g, it->first);
            ++it;
        }
    }
    if (terms.empty()) {
        out.denom_ = 1;
        return out;
    }
    out.denom_ = denom / g;
    if (g == 1) {
        out.terms_ = std::move(terms);
    } else {
        for (auto &[k, c] : terms) {
            out.terms_.emplace_hint(out.terms_.end(), k / g, std::move(c));
        }
    }
    return out;
}

PuiseuxSeries PuiseuxSeries::constant(const CycNum &c, Order trunc)
{
    return monomial(c, Rational(0), std::move(trunc));
}

PuiseuxSeries PuiseuxSeries::monomial(const CycNum &c, const Rational &exponent, Order trunc)
{
    Terms t;
    t.emplace(to_long(exponent.get_num()), c);
    return from_terms(to_long(exponent.get_den()), c.order(), std::move(t), std::move(trunc));
}

PuiseuxSeries PuiseuxSeries::zero(const Rational &trunc)
{
    return from_terms(1, 1, {}, trunc);
}

CycNum PuiseuxSeries::coeff(const Rational &e) const
{
    if (trunc_ && e >= *trunc_) {
        throw OrderTooHigh("coefficient of q^(" + e.get_str() + ") requested from a series known below " +
                           trunc_->get_str());
    }
    const Rational k = e * denom_;
    if (k.get_den() != 1) {
        return CycNum(0, order_);
    }
    auto it = terms_.find(to_long(k.get_num()));
    return it == terms_.end() ? CycNum(0, order_) : it->second;
}

std::optional<Rational> PuiseuxSeries::valuation() const
{
    if (terms_.empty()) {
        return std::nullopt;
    }
    return exponent(terms_.begin()->first);
}

Order PuiseuxSeries::valuation_or_trunc() const
{
    if (terms_.empty()) {
        return trunc_;
    }
    return exponent(terms_.begin()->first);
}

PuiseuxSeries PuiseuxSeries::truncated(const Rational &t) const
{
    if (trunc_ && *trunc_ <= t) {
        return *this;
    }
    Terms kept(terms_.begin(), terms_.lower_bound(last_below(t, denom_) + 1));
    return from_terms(denom_, order_, std::move(kept), t);
}

namespace
{

PuiseuxSeries combine(const PuiseuxSeries &a, const PuiseuxSeries &b, bool subtract)
{
    const long D = std::lcm(a.denom(), b.denom());
    const unsigned long L = std::lcm(a.coeff_order(), b.coeff_order());
    const Order T = min_order(a.trunc(), b.trunc());
    PuiseuxSeries::Terms terms;
    const long sa = D / a.denom();
    const long sb = D / b.denom();
    for (const auto &[k, c] : a.terms()) {
        if (below(k * sa, D, T)) {
            terms.emplace(k * sa, c);
        }
    }
    for (const auto &[k, c] : b.terms()) {
        if (!below(k * sb, D, T)) {
            continue;
        }
        auto [it, inserted] = terms.try_emplace(k * sb, subtract ? -c : c);
        if (!inserted) {
            if (subtract) {
                it->second -= c;
            } else {
                it->second += c;
            }
        }
    }
    return PuiseuxSeries::from_terms(D, L, std::move(terms), T);
}

} // namespace

PuiseuxSeries ps_add(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    return combine(a, b, false);
}

PuiseuxSeries ps_sub(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    return combine(a, b, true);
}

PuiseuxSeries ps_neg(const PuiseuxSeries &a)
{
    PuiseuxSeries::Terms terms;
    for (const auto &[k, c] : a.terms()) {
        terms.emplace_hint(terms.end(), k, -c);
    }
    return PuiseuxSeries::from_terms(a.denom(), a.coeff_order(), std::move(terms), a.trunc());
}

PuiseuxSeries ps_scale(const PuiseuxSeries &a, const CycNum &c)
{
    PuiseuxSeries::Terms terms;
    if (!c.is_zero()) {
        for (const auto &[k, x] : a.terms()) {
            terms.emplace_hint(terms.end(), k, x * c);
        }
    }
    return PuiseuxSeries::from_terms(a.denom(), std::lcm(a.coeff_order(), c.order()), std::move(terms), a.trunc());
}

PuiseuxSeries ps_mul(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    const unsigned long L = std::lcm(a.coeff_order(), b.coeff_order());
    if ((a.is_exact() && a.empty()) || (b.is_exact() && b.empty())) {
        return PuiseuxSeries::from_terms(1, L, {}, std::nullopt);
    }
    const Order va = a.valuation_or_trunc();
    const Order vb = b.valuation_or_trunc();
    Order T = std::nullopt;
    if (a.trunc()) {
        T = min_order(T, *a.trunc() + *vb);
    }
    if (b.trunc()) {
        T = min_order(T, *b.trunc() + *va);
    }
    if (a.empty() || b.empty()) {
        return PuiseuxSeries::from_terms(1, L, {}, T);
    }
    const long D = std::lcm(a.denom(), b.denom());
    Integer da, db;
    const auto A = scale_terms(a, D / a.denom(), L, da);
    const auto B = scale_terms(b, D / b.denom(), L, db);
    const long kmin = A.front().k + B.front().k;
    const long kmax = T ? last_below(*T, D) : A.back().k + B.back().k;
    if (kmax < kmin) {
        return PuiseuxSeries::from_terms(1, L, {}, T);
    }
    const std::size_t phi = euler_phi(L);
    std::vector<std::vector<Integer>> slots(static_cast<std::size_t>(kmax - kmin + 1));
    for (const auto &x : A) {
        for (const auto &y : B) {
            const long k = x.k + y.k;
            if (k > kmax) {
                break;
            }
            auto &slot = slots[static_cast<std::size_t>(k - kmin)];
            if (slot.empty()) {
                slot.resize(2 * phi - 1);
            }
            for (const auto &[i, u] : x.nz) {
                for (const auto &[j, w] : y.nz) {
                    mpz_addmul(slot[i + j].get_mpz_t(), u.get_mpz_t(), w.get_mpz_t());
                }
            }
        }
    }
    const Integer den = da * db;
    PuiseuxSeries::Terms terms;
    for (std::size_t s = 0; s < slots.size(); ++s) {
        if (slots[s].empty()) {
            continue;
        }
        auto c = CycNum::from_scaled(L, std::move(slots[s]), den);
        if (!c.is_zero()) {
            terms.emplace_hint(terms.end(), kmin + static_cast<long>(s), std::move(c));
        }
    }
    return PuiseuxSeries::from_terms(D, L, std::move(terms), T);
}

PuiseuxSeries ps_inv(const PuiseuxSeries &a, Order order)
{
    if (a.empty()) {
        throw ZeroSeries(a.is_exact() ? "inverse of the zero series"
                                      : "inverse of a series vanishing below q^(" + to_string(a.trunc()) + ")");
    }
    const long D = a.denom();
    const auto &[k0, c0] = *a.terms().begin();
    const Rational v = a.exponent(k0);
    const CycNum c0inv = c0.inverse();
    if (a.size() == 1 && a.is_exact()) {
        PuiseuxSeries out = PuiseuxSeries::monomial(c0inv, -v);
        return order ? out.truncated(*order) : out;
    }
    if (!a.trunc() && !order) {
        throw DomainError("inverse of an exact polynomial needs an explicit order");
    }
    const Order T = min_order(add_order(a.trunc(), -2 * v), order);
    // Result exponents -v + n / D for n < N.
    const long N = last_below(*T + v, D) + 1;
    std::vector<std::pair<long, CycNum>> u;
    for (auto it = std::next(a.terms().begin()); it != a.terms().end(); ++it) {
        const long j = it->first - k0;
        if (j >= N) {
            break;
        }
        u.emplace_back(j, it->second * c0inv);
    }
    std::vector<CycNum> w(static_cast<std::size_t>(std::max(N, 0l)), CycNum(0, a.coeff_order()));
    if (N > 0) {
        w[0] = CycNum(1, a.coeff_order());
    }
    for (long n = 1; n < N; ++n) {
        CycNum acc(0, a.coeff_order());
        for (const auto &[j, uj] : u) {
            if (j > n) {
                break;
            }
            const auto &prev = w[static_cast<std::size_t>(n - j)];
            if (!prev.is_zero()) {
                acc -= uj * prev;
            }
        }
        w[static_cast<std::size_t>(n)] = std::move(acc);
    }
    PuiseuxSeries::Terms terms;
    for (long n = 0; n < N; ++n) {
        auto &c = w[static_cast<std::size_t>(n)];
        if (!c.is_zero()) {
            terms.emplace_hint(terms.end(), n - k0, c * c0inv);
        }
    }
    return PuiseuxSeries::from_terms(D, a.coeff_order(), std::move(terms), T);
}

namespace
{

PuiseuxSeries cap(const PuiseuxSeries &x, const Order &order)
{
    return order ? x.truncated(*order) : x;
}

} // namespace

PuiseuxSeries ps_pow(const PuiseuxSeries &a, long k, Order order)
{
    if (k == 0) {
        return cap(PuiseuxSeries::constant(CycNum(1, a.coeff_order())), order);
    }
    if (k < 0) {
        if (a.empty()) {
            throw ZeroSeries("negative power of a vanishing series");
        }
        // b = a^-1 has valuation -v; b^|k| is exact below T_b - (|k| - 1) v.
        const Rational v = *a.valuation();
        const Order inner = add_order(order, (-k - 1) * v);
        return ps_pow(ps_inv(a, inner), -k, order);
    }
    // Intermediate powers a^j only need to be exact below order - (k - j) v.
    const Rational v = a.valuation_or_trunc().value_or(Rational(0));
    const auto bound = [&](long j) { return add_order(order, -(k - j) * v); };
    PuiseuxSeries result;
    bool have = false;
    long have_exp = 0;
    PuiseuxSeries base = a;
    long base_exp = 1;
    long e = k;
    while (true) {
        if (e & 1) {
            if (have) {
                result = cap(ps_mul(result, base), bound(have_exp + base_exp));
            } else {
                result = cap(base, bound(base_exp));
                have = true;
            }
            have_exp += base_exp;
        }
        e >>= 1;
        if (e == 0) {
            break;
        }
        base = cap(ps_mul(base, base), bound(2 * base_exp));
        base_exp *= 2;
    }
    return cap(result, order);
}

PuiseuxSeries ps_scale_exponents(const PuiseuxSeries &a, const Rational &m)
{
    if (m <= 0) {
        throw DomainError("exponent scale must be positive");
    }
    const long p = to_long(m.get_num());
    const long s = to_long(m.get_den());
    PuiseuxSeries::Terms terms;
    for (const auto &[k, c] : a.terms()) {
        terms.emplace_hint(terms.end(), k * p, c);
    }
    Order T = a.trunc();
    if (T) {
        T = Rational(*T * m);
    }
    return PuiseuxSeries::from_terms(a.denom() * s, a.coeff_order(), std::move(terms), T);
}

Comparison ps_equal_to_order(const PuiseuxSeries &a, const PuiseuxSeries &b, const Rational &t)
{
    for (const auto *x : {&a, &b}) {
        if (x->trunc() && t > *x->trunc()) {
            throw OrderTooHigh("comparison to q^(" + t.get_str() + ") but a series is only known below " +
                               x->trunc()->get_str());
        }
    }
    const auto d = ps_sub(a.truncated(t), b.truncated(t));
    Comparison out;
    if (!d.empty()) {
        const auto &[k, c] = *d.terms().begin();
        out.equal = false;
        out.first_mismatch = Mismatch{d.exponent(k), c};
    }
    return out;
}

std::string to_text(const PuiseuxSeries &a)
{
    std::ostringstream os;
    os << "D=" << a.denom() << "; L=" << a.coeff_order() << "; T=" << to_string(a.trunc()) << '\n';
    for (const auto &[k, c] : a.terms()) {
        os << "q^(" << k << '/' << a.denom() << "): " << to_text(c) << '\n';
    }
    return os.str();
}

PuiseuxSeries parse_series(std::string_view text)
{
    std::istringstream is{std::string(text)};
    std::string line;
    const auto fail = [&](const std::string &why) { throw ParseError("malformed series: " + why); };
    if (!std::getline(is, line)) {
        fail("missing header");
    }
    long D = 0;
    unsigned long L = 0;
    char tbuf[256] = {};
    if (std::sscanf(line.c_str(), "D=%ld; L=%lu; T=%255s", &D, &L, tbuf) != 3 || D <= 0 || L == 0) {
        fail("bad header '" + line + "'");
    }
    const std::string tstr(tbuf);
    Order T;
    if (tstr != "inf") {
        T = parse_rational(tstr);
    }
    PuiseuxSeries::Terms terms;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        long k = 0;
        long d = 0;
        int used = 0;
        if (std::sscanf(line.c_str(), "q^(%ld/%ld): %n", &k, &d, &used) != 2 || used == 0 || d != D) {
            fail("bad term line '" + line + "'");
        }
        auto c = parse_cycnum(std::string_view(line).substr(static_cast<std::size_t>(used)));
        if (!terms.emplace(k, std::move(c)).second) {
            fail("repeated exponent in '" + line + "'");
        }
    }
    return PuiseuxSeries::from_terms(D, L, std::move(terms), T);
}

std::ostream &operator<<(std::ostream &os, const PuiseuxSeries &a)
{
    return os << to_text(a);
}

} // namespace thetaq
