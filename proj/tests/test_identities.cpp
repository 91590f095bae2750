#include <doctest.h>

#include <set>

#include <thetaq/errors.hpp>
#include <thetaq/identities.hpp>

using namespace thetaq;

namespace
{

SeriesExpr th(const char *e, const char *ep, long m = 1)
{
    return theta_expr(parse_rational(e), parse_rational(ep), m);
}

bool same(const PuiseuxSeries &a, const PuiseuxSeries &b, const Rational &T)
{
    return ps_equal_to_order(a, b, T).equal;
}

} // namespace

TEST_CASE("leaves and elementary nodes")
{
    const auto one = evaluate(constant_expr(CycNum(1)), Rational(5));
    CHECK(one.size() == 1);
    CHECK(one.coeff(0) == CycNum(1));

    const auto jac = evaluate(constant_expr(zeta(4, 1)) * th("0", "0") * th("1", "0") * th("0", "1"), Rational(6));
    REQUIRE(jac.valuation());
    CHECK(*jac.valuation() == Rational(1, 8));
    CHECK(jac.coeff(Rational(1, 8)) == CycNum(2) * zeta(4, 1));

    CHECK_THROWS_AS(evaluate(inv(th("1", "1")), Rational(4)), ZeroSeries);
    CHECK_THROWS_AS(evaluate(th("0", "0"), Rational(0)), DomainError);
}

TEST_CASE("evaluation agrees with direct series arithmetic")
{
    // Oracle: the same expression assembled by hand from leaf series at a generous order.
    const Rational T(12);
    const Rational big(40);
    const auto a = theta_constant({{Rational(1, 3), Rational(1, 3)}, 1, false}, big);
    const auto b = theta_constant({{1, 0}, 2, false}, big);
    const auto d = theta_derivative_reduced({{1, 1}, 1, false}, big);
    const auto oracle = ps_pow(a, 3) * b - zeta(3, 1) * (d * ps_pow(b, 2));
    const auto expr = pow(th("1/3", "1/3"), 3) * th("1", "0", 2) -
                      constant_expr(zeta(3, 1)) * theta_deriv_expr(1, 1) * pow(th("1", "0", 2), 2);
    CHECK(same(evaluate(expr, T), oracle, T));

    // Inverses and negative powers.
    const auto u = th("0", "0") + th("1", "0");
    for (long k : {1, 2, 3}) {
        const auto e = pow(u, k) * pow(u, -k);
        CHECK(same(evaluate(e, T), PuiseuxSeries::constant(CycNum(1)), T));
    }
    const auto w = th("1", "1/2");
    CHECK(same(evaluate(w * inv(w), T), PuiseuxSeries::constant(CycNum(1)), T));
    const auto ratio = evaluate(pow(th("1", "0"), 2) * inv(th("1", "1/3")), T);
    CHECK(same(ps_mul(ratio, theta_constant({{1, Rational(1, 3)}, 1, false}, big)),
               ps_pow(theta_constant({{1, 0}, 1, false}, big), 2), T - Rational(1, 8)));
    CHECK(*ratio.valuation() == Rational(1, 8));
}

TEST_CASE("evaluation order is consistent")
{
    const auto e = th("1/5", "1/5") * pow(th("3/5", "3/5"), 2) + constant_expr(CycNum(3)) * theta_deriv_expr(1, 1);
    const auto lo = evaluate(e, Rational(5));
    const auto hi = evaluate(e, Rational(11));
    CHECK(lo.trunc() == Order(Rational(5)));
    CHECK(same(lo, hi, Rational(5)));
}

TEST_CASE("registry integrity")
{
    std::set<std::string> ids;
    for (const auto &e : registry()) {
        CHECK_MESSAGE(ids.insert(e.id).second, e.id);
        CHECK(e.default_order == (e.level == 5 ? Rational(20) : Rational(30)));
        CHECK(!e.source.empty());
    }
    CHECK(registry().size() >= 45);
    CHECK(ids.count("s1-jacobi") == 1);
    CHECK(ids.count("s4-thm4.3-a") == 1);
    CHECK_THROWS_AS(find_identity("no-such-identity"), UnknownIdentity);
    CHECK_THROWS_AS(verify("no-such-identity"), UnknownIdentity);
    CHECK(is_count_relation("s7-thm7.3-a"));
    CHECK_FALSE(is_count_relation("s1-jacobi"));
    CHECK(to_string(find_identity("s1-jacobi").rhs) == "z4 * theta[0;0] * theta[1;0] * theta[0;1]");
}

TEST_CASE("named verifications")
{
    auto r = verify("s1-jacobi", Rational(12));
    CHECK(r.passed);
    CHECK(!r.mismatch);
    CHECK(r.order == 12);
    CHECK(verify("s2-lem2.1-a", Rational(12)).passed);
    CHECK_THROWS_AS(verify("s1-jacobi", Rational(0)), DomainError);

    const auto bad = verify(corrupt_constant(find_identity("s3-thm3.1-a")));
    CHECK_FALSE(bad.passed);
    REQUIRE(bad.mismatch);
    CHECK(bad.mismatch->exponent == Rational(1, 2));
}

TEST_CASE("level filters")
{
    const auto l4 = verify_all(std::nullopt, 4, 1);
    CHECK(l4.size() == 8);
    for (const auto &r : l4) {
        CHECK_MESSAGE(r.passed, r.id);
    }
    const auto l3 = verify_all(Rational(10), 3, 1);
    std::set<std::string> ids;
    for (const auto &r : l3) {
        ids.insert(r.id);
        CHECK(r.order == 10);
    }
    for (const char *id : {"s6-thm6.2", "s6-thm6.4", "s6-thm6.6", "s6-thm6.8"}) {
        CHECK(ids.count(id) == 1);
    }
}

TEST_CASE("whole registry passes and is independent of parallelism")
{
    const auto serial = verify_all(std::nullopt, std::nullopt, 1);
    const auto parallel = verify_all(std::nullopt, std::nullopt, 4);
    REQUIRE(serial.size() == registry().size());
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].id == registry()[i].id);
        CHECK(parallel[i].id == serial[i].id);
        CHECK(parallel[i].passed == serial[i].passed);
        CHECK_MESSAGE(serial[i].passed, std::string(serial[i].id + " " + serial[i].error));
        CHECK(serial[i].passed == !serial[i].mismatch.has_value());
    }
}

TEST_CASE("printed constants that fail")
{
    REQUIRE(printed_variants().size() == 3);
    for (const auto &e : printed_variants()) {
        const auto r = verify(e);
        CHECK_FALSE(r.passed);
        REQUIRE(r.mismatch);
        CHECK(r.mismatch->exponent < e.default_order);
        CHECK(verify(e.id.substr(0, e.id.size() - std::string("-printed").size())).passed);
    }
    CHECK(verify("s4-thm4.2-a-printed").mismatch->exponent == Rational(71, 200));
}

TEST_CASE("negative controls")
{
    for (const auto &e : registry()) {
        const auto r = verify(corrupt_constant(e));
        CHECK_MESSAGE(!r.passed, e.id);
        CHECK(r.mismatch.has_value());
    }
}
