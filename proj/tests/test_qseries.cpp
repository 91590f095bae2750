#include <doctest.h>

#include <random>

#include <thetaq/errors.hpp>
#include <thetaq/qseries.hpp>

using namespace thetaq;

namespace
{

using Terms = PuiseuxSeries::Terms;

PuiseuxSeries poly(long D, std::initializer_list<std::pair<long, long>> terms, Order T = std::nullopt)
{
    Terms t;
    for (auto [k, c] : terms) {
        t.emplace(k, CycNum(c));
    }
    return PuiseuxSeries::from_terms(D, 1, std::move(t), T);
}

PuiseuxSeries geometric(const Rational &T)
{
    Terms t;
    for (long n = 0; n < T; ++n) {
        t.emplace(n, CycNum(1));
    }
    return PuiseuxSeries::from_terms(1, 1, std::move(t), T);
}

PuiseuxSeries random_series(std::mt19937 &rng, long D, unsigned long L, int nterms, const Rational &T,
                            long shift = 0)
{
    std::uniform_int_distribution<int> c(-5, 5);
    std::uniform_int_distribution<long> k(0, to_long(floor(T * D)) - 1);
    Terms t;
    for (int i = 0; i < nterms; ++i) {
        std::vector<Rational> cs;
        for (std::size_t j = 0; j < euler_phi(L); ++j) {
            cs.emplace_back(c(rng));
        }
        t[k(rng) + shift] = CycNum::from_polynomial(L, cs);
    }
    return PuiseuxSeries::from_terms(D, L, std::move(t), T);
}

// Double loop over rational exponents, independent of the dense accumulator.
std::map<Rational, CycNum> naive_product(const PuiseuxSeries &a, const PuiseuxSeries &b, const Rational &T)
{
    std::map<Rational, CycNum> out;
    for (const auto &[ka, ca] : a.terms()) {
        for (const auto &[kb, cb] : b.terms()) {
            Rational e = a.exponent(ka) + b.exponent(kb);
            if (e < T) {
                auto &slot = out[e];
                slot += ca * cb;
            }
        }
    }
    for (auto it = out.begin(); it != out.end();) {
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    }
    return out;
}

} // namespace

TEST_CASE("addition")
{
    auto a = poly(1, {{0, 1}, {1, 1}}, Rational(5));
    auto b = poly(1, {{0, 1}, {1, -1}}, Rational(3));
    auto s = a + b;
    CHECK(s.size() == 1);
    CHECK(s.coeff(0) == CycNum(2));
    CHECK(*s.trunc() == 3);
    auto z = a - a;
    CHECK(z.empty());
    CHECK(*z.trunc() == 5);
    CHECK(ps_equal_to_order(a + PuiseuxSeries(), a, Rational(5)).equal);
}

TEST_CASE("products and truncation")
{
    auto one_minus_q = poly(1, {{0, 1}, {1, -1}});
    auto p = one_minus_q * geometric(Rational(12));
    CHECK(*p.trunc() == 12);
    CHECK(ps_equal_to_order(p, PuiseuxSeries::constant(CycNum(1)), Rational(12)).equal);

    auto m = PuiseuxSeries::monomial(CycNum(1), Rational(1, 8));
    auto mm = m * m;
    CHECK(mm.denom() == 4);
    CHECK(mm.coeff(Rational(1, 4)) == CycNum(1));

    // Valuation-aware propagation: q^2 (exact) times a series known below 3.
    auto c = PuiseuxSeries::monomial(CycNum(1), Rational(2)) * geometric(Rational(3));
    CHECK(*c.trunc() == 5);
    auto d = poly(1, {{1, 1}}, Rational(4)) * poly(2, {{1, 1}}, Rational(2));
    CHECK(*d.trunc() == 3);

    // Squares: (sum q^{n^2})^2 counts x^2 + y^2 = n.
    Terms t;
    for (long n = -10; n <= 10; ++n) {
        t[n * n] += CycNum(1);
    }
    auto th = PuiseuxSeries::from_terms(1, 1, t, Rational(101));
    auto sq = th * th;
    for (long n = 0; n <= 50; ++n) {
        long cnt = 0;
        for (long x = -10; x <= 10; ++x) {
            for (long y = -10; y <= 10; ++y) {
                cnt += (x * x + y * y == n);
            }
        }
        CHECK(sq.coeff(Rational(n)) == CycNum(cnt));
    }
}

TEST_CASE("product agrees with the naive convolution")
{
    std::mt19937 rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        const unsigned long L = std::vector<unsigned long>{1, 3, 4, 5, 8, 12}[trial % 6];
        auto a = random_series(rng, 6, L, 30, Rational(7), -3);
        auto b = random_series(rng, 4, trial % 2 ? L : 1, 25, Rational(9));
        auto p = a * b;
        auto oracle = naive_product(a, b, *p.trunc());
        REQUIRE(p.size() == oracle.size());
        for (const auto &[e, c] : oracle) {
            CHECK(p.coeff(e) == c);
        }
    }
}

TEST_CASE("ring axioms up to truncation")
{
    std::mt19937 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_series(rng, 3, 5, 10, Rational(6));
        auto b = random_series(rng, 2, 5, 10, Rational(5));
        auto c = random_series(rng, 6, 5, 10, Rational(7));
        const Rational T(3);
        CHECK(ps_equal_to_order(a * b, b * a, T).equal);
        CHECK(ps_equal_to_order((a * b) * c, a * (b * c), T).equal);
        CHECK(ps_equal_to_order(a * (b + c), a * b + a * c, T).equal);
        CHECK(ps_equal_to_order(a + b, b + a, T).equal);
    }
}

TEST_CASE("inverse")
{
    auto one = PuiseuxSeries::constant(CycNum(1));
    CHECK(ps_equal_to_order(ps_inv(one), one, Rational(100)).equal);
    CHECK(ps_inv(one).is_exact());

    auto g = ps_inv(poly(1, {{0, 1}, {1, -1}}), Rational(10));
    CHECK(ps_equal_to_order(g, geometric(Rational(10)), Rational(10)).equal);
    CHECK_THROWS_AS(ps_inv(poly(1, {{0, 1}, {1, -1}})), DomainError);

    // 2 q^{1/8} (1 + q) known below 4.
    Terms t{{1, CycNum(2)}, {9, CycNum(2)}};
    auto a = PuiseuxSeries::from_terms(8, 1, t, Rational(4));
    auto b = ps_inv(a);
    CHECK(*b.trunc() == Rational(4) - Rational(1, 4));
    CHECK(*b.valuation() == Rational(-1, 8));
    CHECK(b.coeff(Rational(-1, 8)) == CycNum(Rational(1, 2)));
    CHECK(b.coeff(Rational(7, 8)) == CycNum(Rational(-1, 2)));
    CHECK(b.coeff(Rational(15, 8)) == CycNum(Rational(1, 2)));
    auto ab = a * b;
    CHECK(ps_equal_to_order(ab, one, *ab.trunc()).equal);

    std::mt19937 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        auto r = random_series(rng, 5, trial % 3 ? 1 : 8, 8, Rational(4), 1);
        if (r.empty()) {
            continue;
        }
        auto prod = r * ps_inv(r);
        REQUIRE(prod.trunc());
        CHECK(ps_equal_to_order(prod, one, *prod.trunc()).equal);
    }

    CHECK_THROWS_AS(ps_inv(PuiseuxSeries()), ZeroSeries);
    CHECK_THROWS_AS(ps_inv(PuiseuxSeries::zero(Rational(5))), ZeroSeries);
}

TEST_CASE("powers")
{
    auto one_plus_q = poly(1, {{0, 1}, {1, 1}});
    CHECK(ps_equal_to_order(ps_pow(one_plus_q, 0), PuiseuxSeries::constant(CycNum(1)), Rational(5)).equal);
    CHECK(ps_equal_to_order(ps_pow(one_plus_q, 2), poly(1, {{0, 1}, {1, 2}, {2, 1}}), Rational(10)).equal);

    std::mt19937 rng(6);
    auto a = random_series(rng, 4, 3, 12, Rational(6), 1);
    auto five = a * a * a * a * a;
    auto p5 = ps_pow(a, 5);
    CHECK(*p5.trunc() == *five.trunc());
    CHECK(ps_equal_to_order(p5, five, *five.trunc()).equal);

    auto capped = ps_pow(a, 5, Rational(4));
    CHECK(*capped.trunc() == 4);
    CHECK(ps_equal_to_order(capped, five, Rational(4)).equal);

    auto inv3 = ps_pow(a, -3, Rational(3));
    auto ai = ps_inv(a);
    auto oracle = ai * ai * ai;
    const Rational expect = std::min(Rational(3), *oracle.trunc());
    CHECK(*inv3.trunc() == expect);
    CHECK(ps_equal_to_order(inv3, oracle, expect).equal);
}

TEST_CASE("exponent scaling")
{
    auto a = poly(2, {{1, 1}});
    CHECK(ps_equal_to_order(ps_scale_exponents(a, Rational(1)), a, Rational(10)).equal);
    auto s = ps_scale_exponents(a, Rational(4));
    CHECK(s.coeff(Rational(2)) == CycNum(1));
    CHECK(s.size() == 1);
    std::mt19937 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        auto x = random_series(rng, 3, 4, 10, Rational(5));
        auto y = random_series(rng, 2, 4, 10, Rational(5));
        const Rational m(3, 2);
        auto lhs = ps_scale_exponents(x * y, m);
        auto rhs = ps_scale_exponents(x, m) * ps_scale_exponents(y, m);
        CHECK(*lhs.trunc() == *rhs.trunc());
        CHECK(ps_equal_to_order(lhs, rhs, *lhs.trunc()).equal);
    }
}

TEST_CASE("comparison")
{
    auto a = poly(1, {{0, 1}, {1, 1}}, Rational(10));
    auto b = poly(1, {{0, 1}, {1, 1}, {3, 1}}, Rational(10));
    CHECK(ps_equal_to_order(a, a, Rational(10)).equal);
    CHECK(ps_equal_to_order(a, b, Rational(2)).equal);
    auto c = ps_equal_to_order(a, b, Rational(4));
    CHECK_FALSE(c.equal);
    REQUIRE(c.first_mismatch);
    CHECK(c.first_mismatch->exponent == 3);
    CHECK(c.first_mismatch->diff == CycNum(-1));
    CHECK_THROWS_AS(ps_equal_to_order(a, b, Rational(11)), OrderTooHigh);
    CHECK_THROWS_AS(a.coeff(Rational(10)), OrderTooHigh);
}

TEST_CASE("truncation soundness")
{
    // Recompute at a higher order and compare every coefficient reported below trunc.
    std::mt19937 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        auto hi = random_series(rng, 5, 3, 40, Rational(12), 2);
        auto lo = hi.truncated(Rational(6));
        auto hi_prod = ps_pow(hi, 3) * ps_inv(hi);
        auto lo_prod = ps_pow(lo, 3) * ps_inv(lo);
        CHECK(*lo_prod.trunc() <= *hi_prod.trunc());
        CHECK(ps_equal_to_order(lo_prod, hi_prod, *lo_prod.trunc()).equal);
    }
}

TEST_CASE("text round trip")
{
    Terms t{{-3, zeta(8, 1)}, {1, CycNum(Rational(2, 3), 8)}, {5, zeta(8, 1) + zeta(8, 7)}};
    auto a = PuiseuxSeries::from_terms(8, 8, t, Rational(7, 2));
    auto text = to_text(a);
    CHECK(text.rfind("D=8; L=8; T=7/2\nq^(-3/8): L=8; 1*z^1\n", 0) == 0);
    auto b = parse_series(text);
    CHECK(b.denom() == a.denom());
    CHECK(*b.trunc() == *a.trunc());
    CHECK(ps_equal_to_order(a, b, Rational(7, 2)).equal);
    CHECK(to_text(PuiseuxSeries()) == "D=1; L=1; T=inf\n");
    CHECK_THROWS_AS(parse_series("D=8; L=8\n"), ParseError);
    CHECK_THROWS_AS(parse_series("D=8; L=8; T=inf\nq^(1/4): L=8; 1*z^0\n"), ParseError);
}
