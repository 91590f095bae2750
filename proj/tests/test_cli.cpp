#include <doctest.h>

#include <set>
#include <sstream>

#include <json.hpp>

#include <thetaq/cli.hpp>
#include <thetaq/identities.hpp>
#include <thetaq/numerics.hpp>

using nlohmann::json;

namespace
{

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = thetaq::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string &s)
{
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) {
        v.push_back(l);
    }
    return v;
}

} // namespace

TEST_CASE("verify reports")
{
    const auto r = run({"verify", "--id", "s1-jacobi", "--order", "12", "--format", "json"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("id") == "s1-jacobi");
    CHECK(j.at("passed") == true);
    CHECK(j.at("order") == "12");
    CHECK(j.at("mismatch").is_null());
    CHECK(j.at("millis").is_number());

    const auto bad = run({"verify", "--id", "s4-thm4.2-a-printed", "--format", "json"});
    CHECK(bad.code == 1);
    const auto b = json::parse(bad.out);
    CHECK(b.at("passed") == false);
    CHECK(b.at("mismatch").at("exponent") == "71/200");
    CHECK(b.at("mismatch").at("diff").is_string());

    const auto rel = run({"verify", "--id", "s7-thm7.5-a", "--max", "300", "--format", "json"});
    CHECK(rel.code == 0);
    CHECK(json::parse(rel.out).at("n_max") == 300);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(run({"verify", "--id", "s1-jacobi", "--order", "0"}).code == 2);
    CHECK(run({"verify", "--id", "s1-jacobi", "--order", "x/y"}).code == 2);
    CHECK(run({"verify", "--id", "no-such"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"verify-all", "--level", "7"}).code == 2);
    CHECK(run({"verify", "--id", "s1-jacobi", "--format", "xml"}).code == 2);
    CHECK(run({"counts", "--family", "d", "--max", "10"}).code == 2);
    CHECK(run({"counts", "--family", "bogus", "--max", "10"}).code == 2);
    CHECK(run({"eval", "--eps", "1", "--eps-prime", "0", "--tau", "0.1-0.2i"}).code == 2);
    CHECK(run({"residue-check", "--proof", "nothing"}).code == 2);
    CHECK(run({"expand", "--order", "5"}).code == 2);
    const auto e = run({"verify", "--id", "s1-jacobi", "--order", "0"});
    CHECK(e.err.find("Usage") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("counts match trial division")
{
    const auto r = run({"counts", "--family", "d", "--j", "1", "--k", "5", "--max", "10", "--format", "csv"});
    CHECK(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 11);
    CHECK(ls[0] == "n,count");
    for (int n = 1; n <= 10; ++n) {
        int c = 0;
        for (int d = 1; d <= n; ++d) {
            c += (n % d == 0 && d % 5 == 1) ? 1 : 0;
        }
        CHECK(ls[n] == std::to_string(n) + "," + std::to_string(c));
    }
    const auto s2 = json::parse(run({"counts", "--family", "S2", "--max", "5", "--format", "json"}).out);
    std::vector<long> want{1, 4, 4, 0, 4, 8};
    REQUIRE(s2.at("rows").size() == want.size());
    for (std::size_t n = 0; n < want.size(); ++n) {
        CHECK(s2.at("rows")[n].at("count") == want[n]);
    }
}

TEST_CASE("text and json agree on verify-all")
{
    const auto t = run({"verify-all", "--level", "4", "--jobs", "2"});
    const auto j = run({"verify-all", "--level", "4", "--format", "json"});
    const auto c = run({"verify-all", "--level", "4", "--format", "csv"});
    CHECK(t.code == 0);
    CHECK(j.code == 0);
    CHECK(c.code == 0);
    std::set<std::string> text_pass, json_pass;
    for (const auto &l : lines(t.out)) {
        if (l.rfind("PASS ", 0) == 0) {
            text_pass.insert(l.substr(5, l.find(' ', 5) - 5));
        }
    }
    for (const auto &r : json::parse(j.out)) {
        if (r.at("passed") == true) {
            json_pass.insert(r.at("id").get<std::string>());
        }
    }
    CHECK(text_pass.size() == 8);
    CHECK(text_pass == json_pass);
    CHECK(lines(c.out).size() == 9);
}

TEST_CASE("expand round-trips the series")
{
    const auto r = run({"expand", "--eps", "1/5", "--eps-prime", "3/5", "--order", "6", "--format", "json"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    const auto s = thetaq::theta_constant({{thetaq::Rational(1, 5), thetaq::Rational(3, 5)}, 1, false},
                                          thetaq::Rational(6));
    CHECK(j.at("D") == s.denom());
    CHECK(j.at("T") == "6");
    REQUIRE(j.at("terms").size() == s.size());
    std::size_t i = 0;
    for (const auto &[k, c] : s.terms()) {
        CHECK(j.at("terms")[i].at("exponent") == thetaq::to_string(s.exponent(k)));
        CHECK(thetaq::parse_cycnum(j.at("terms")[i].at("coeff").get<std::string>()) == c);
        ++i;
    }
    const auto text = run({"expand", "--eps", "1/5", "--eps-prime", "3/5", "--order", "6"});
    CHECK(thetaq::ps_equal_to_order(thetaq::parse_series(text.out), s, thetaq::Rational(6)).equal);

    const auto eta = run({"expand", "--eta", "2^5 * 1^-2", "--order", "10", "--format", "csv"});
    CHECK(eta.code == 0);
    CHECK(lines(eta.out)[1] == "1/3,L=1; 1*z^0");
}

TEST_CASE("numerical commands")
{
    const auto r = run({"eval", "--eps", "1", "--eps-prime", "1/2", "--z", "0.1+0.2i", "--tau", "0.1+0.9i", "--tol",
                        "1e-12", "--format", "json"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    const auto v = thetaq::theta_eval({1, thetaq::Rational(1, 2)}, {0.1, 0.2}, {{0.1, 0.9}, 30, 1e-12});
    CHECK(j.at("value").at("re").get<double>() == doctest::Approx(v.real()).epsilon(1e-14));
    CHECK(j.at("value").at("im").get<double>() == doctest::Approx(v.imag()).epsilon(1e-14));

    const auto rc = run({"residue-check", "--proof", "s3-thm3.1-phi", "--tau", "0.15+1.05i", "--format", "json"});
    CHECK(rc.code == 0);
    const auto k = json::parse(rc.out);
    CHECK(k.at("passed") == true);
    CHECK(k.at("residues").size() == 2);
    CHECK(k.at("abs_sum").get<double>() < 1e-8);
}
