// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <thetaq/arith.hpp>
#include <thetaq/errors.hpp>
#include <thetaq/eta.hpp>
#include <thetaq/identities.hpp>
#include <thetaq/numerics.hpp>
#include <thetaq/theta.hpp>

using namespace thetaq;
using cd = std::complex<double>;

namespace
{

constexpr double kJacobiSeconds = 5.0;
constexpr double kRegistrySeconds = 600.0;
constexpr long kCor44Max = 200;
constexpr long kKohlerMacdonaldOrder = 40;
constexpr long kRelationMax = 5000;
constexpr double kRelationSeconds = 60.0;
constexpr long kTripleOrder = 10;
constexpr double kResidueSumTol = 1e-8;
constexpr double kResidueRelTol = 1e-7;
constexpr int kResidueDigits = 30;
constexpr double kBridgeTol = 1e-9;
constexpr long kBridgeOrder = 12;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Characteristic ch(const char *e, const char *ep)
{
    return {parse_rational(e), parse_rational(ep)};
}

// Trial division: divisors d of n with d = j mod k.
long divisors_in_class(long j, long k, long n)
{
    long c = 0;
    for (long d = 1; d <= n; ++d) {
        if (n % d == 0 && ((d - j) % k + k) % k == 0) {
            ++c;
        }
    }
    return c;
}

cd embed_at(const PuiseuxSeries &s, cd tau)
{
    const double pi = std::acos(-1.0);
    cd acc = 0;
    for (const auto &[k, c] : s.terms()) {
        acc += embed(c) * std::exp(cd(0, 2 * pi) * (double(k) / double(s.denom())) * tau);
    }
    return acc;
}

void collect_thetas(const SeriesExpr &e, std::vector<ThetaSpec> &out)
{
    if (e.kind() == SeriesExpr::Kind::theta) {
        const auto &s = std::get<ThetaSpec>(e.node().payload);
        for (const auto &t : out) {
            if (t.chr == s.chr && t.tau_mult == s.tau_mult && t.derived == s.derived) {
                return;
            }
        }
        out.push_back(s);
    }
    for (const auto &c : e.children()) {
        collect_thetas(c, out);
    }
}

struct Outcome {
    bool passed;
    std::string detail;
};

Outcome criterion1()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = verify("s1-jacobi", Rational(50));
    const double s = seconds_since(t0);
    std::ostringstream os;
    os << "Jacobi derivative formula to q^50: " << (r.passed ? "zero difference" : "mismatch") << ", " << s << " s";
    return {r.passed && !r.mismatch && s < kJacobiSeconds, os.str()};
}

Outcome criterion2()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto reports = verify_all();
    const double s = seconds_since(t0);
    std::size_t ok = 0;
    std::string first_bad;
    for (const auto &r : reports) {
        if (r.passed) {
            ++ok;
        } else if (first_bad.empty()) {
            first_bad = r.id;
        }
    }
    std::ostringstream os;
    os << "registry at default orders: " << ok << "/" << reports.size() << " passed in " << s << " s";
    if (!first_bad.empty()) {
        os << ", first failure " << first_bad;
    }
    return {ok == reports.size() && reports.size() >= 45 && s < kRegistrySeconds, os.str()};
}

Outcome criterion3()
{
    const Rational T(kCor44Max + 1);
    const auto a = evaluate(find_identity("s4-cor4.4-a").lhs, T);
    const auto b = evaluate(find_identity("s4-cor4.4-b").lhs, T);
    long bad = -1;
    for (long n = 0; n <= kCor44Max && bad < 0; ++n) {
        long wa = 0, wb = n == 0 ? 1 : 0;
        if (n >= 1) {
            const long d15 = divisors_in_class(1, 5, n) - divisors_in_class(4, 5, n);
            const long d25 = divisors_in_class(2, 5, n) - divisors_in_class(3, 5, n);
            wa = d15 - 3 * d25;
            wb = 3 * d15 + d25;
        }
        if (a.coeff(Rational(n)) != CycNum(wa) || b.coeff(Rational(n)) != CycNum(wb)) {
            bad = n;
        }
    }
    const bool grid = a.denom() == 1 && b.denom() == 1;
    std::ostringstream os;
    os << "both product sides vs trial-division divisor counts for n <= " << kCor44Max;
    if (bad >= 0) {
        os << ", first difference at n = " << bad;
    }
    return {bad < 0 && grid, os.str()};
}

Outcome criterion4()
{
    const Rational T(kKohlerMacdonaldOrder);
    const auto s = eta_quotient_series(parse_eta_quotient("2^5 * 1^-2"), T);
    bool ok = true;
    long checked = 0;
    for (const auto &[k, c] : s.terms()) {
        const Rational e = s.exponent(k);
        ok = ok && Rational(e * 3).get_den() == 1;
    }
    for (long k = 0; Rational(k, 3) < T; ++k) {
        long want = 0;
        const long n = std::lround(std::sqrt(double(k)));
        if (n >= 1 && n * n == k) {
            const long leg = n % 3 == 1 ? 1 : n % 3 == 2 ? -1 : 0;
            want = (n % 2 == 1 ? 1 : -1) * n * leg;
        }
        ok = ok && s.coeff(Rational(k, 3)) == CycNum(want);
        ++checked;
    }
    std::ostringstream os;
    os << "eta^5(2tau)/eta^2(tau) coefficients on the q^(1/3) grid below " << kKohlerMacdonaldOrder << " (" << checked
       << " exponents)";
    return {ok, os.str()};
}

Outcome relations(const std::vector<std::string> &ids, const char *label, bool timed)
{
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string bad;
    for (const auto &id : ids) {
        const auto r = check_count_relation(id, kRelationMax);
        if (!r.passed) {
            ok = false;
            bad += " " + id;
        }
    }
    const double s = seconds_since(t0);
    std::ostringstream os;
    os << label << " for n <= " << kRelationMax << " (" << ids.size() << " relations, " << s << " s)";
    if (!bad.empty()) {
        os << ", failing:" << bad;
    }
    return {ok && (!timed || s < kRelationSeconds), os.str()};
}

Outcome criterion5()
{
    std::vector<std::string> ids;
    for (const auto &id : count_relation_ids()) {
        if (id.rfind("s7-thm7.3", 0) == 0 || id.rfind("s7-thm7.5", 0) == 0) {
            ids.push_back(id);
        }
    }
    auto o = relations(ids, "S2 and S_{1,2} relations", true);
    o.passed = o.passed && ids.size() == 9;
    return o;
}

Outcome criterion6()
{
    return relations({"s1-thm1.1-a", "s1-thm1.1-b"}, "sums of two squares and of x^2+2y^2 via divisor counts", false);
}

Outcome criterion7()
{
    const std::vector<std::pair<const char *, const char *>> chars{
        // level 3
        {"1/3", "1/3"}, {"1/3", "1"}, {"1/3", "5/3"}, {"1", "1/3"},
        // level 4
        {"1", "1/2"}, {"0", "1/2"}, {"1/2", "0"}, {"1/2", "1"}, {"1/2", "1/2"}, {"1/2", "3/2"},
        // level 5
        {"1/5", "1/5"}, {"1/5", "3/5"}, {"1/5", "1"}, {"1/5", "7/5"}, {"1/5", "9/5"}, {"3/5", "1/5"},
        {"3/5", "3/5"}, {"3/5", "1"}, {"3/5", "7/5"}, {"3/5", "9/5"}, {"1", "1/5"}, {"1", "3/5"},
        // level 6
        {"0", "1/3"}, {"0", "2/3"}, {"1/3", "0"}, {"1/3", "2/3"}, {"1/3", "4/3"}, {"2/3", "0"}, {"2/3", "1/3"},
        {"2/3", "2/3"}, {"2/3", "1"}, {"2/3", "4/3"}, {"2/3", "5/3"}, {"1", "2/3"},
        // level 8
        {"0", "1/4"}, {"0", "3/4"}, {"1", "1/4"}, {"1", "3/4"}};
    const Rational T(kTripleOrder);
    std::size_t ok = 0;
    std::string bad;
    for (const auto &[e, ep] : chars) {
        const ThetaSpec s{ch(e, ep), 1, false};
        if (ps_equal_to_order(theta_triple_product(s, T), theta_constant(s, T), T).equal) {
            ++ok;
        } else {
            bad += " [" + std::string(e) + ";" + ep + "]";
        }
    }
    std::ostringstream os;
    os << "triple product vs sum to q^" << kTripleOrder << ": " << ok << "/" << chars.size()
       << " characteristics of levels 3-8";
    if (!bad.empty()) {
        os << ", failing:" << bad;
    }
    return {ok == chars.size(), os.str()};
}

Outcome criterion8()
{
    const std::vector<cd> taus{{0.15, 1.05}, {-0.3, 0.9}, {0.05, 2.0}};
    const std::set<std::string> required{"s3-thm3.1-phi", "s3-thm3.1-psi", "s3-thm3.2-phi", "s3-thm3.2-psi",
                                         "s3-thm3.3-phi", "s3-thm3.3-psi", "s6-thm6.1-phi", "s6-thm6.3-phi",
                                         "s6-thm6.5-phi", "s6-thm6.7-phi"};
    std::set<std::string> seen;
    bool ok = true;
    double worst_sum = 0, worst_rel = 0;
    std::size_t residues = 0;
    std::string bad;
    for (const auto &tau : taus) {
        const EvalParams p{tau, kResidueDigits, 1e-28};
        for (const auto &r : proof_ratios()) {
            seen.insert(r.id);
            try {
                const auto c = residue_check(r, p, kResidueSumTol, kResidueRelTol);
                worst_sum = std::max(worst_sum, std::abs(c.sum));
                for (const auto &x : c.residues) {
                    worst_rel = std::max(worst_rel, x.rel_error);
                    ++residues;
                }
                if (!c.passed) {
                    ok = false;
                    bad += " " + r.id + "@" + to_string(tau);
                }
            } catch (const Error &e) {
                ok = false;
                bad += " " + r.id + "(" + e.what() + ")";
            }
        }
    }
    for (const auto &id : required) {
        ok = ok && seen.count(id) == 1;
    }
    std::ostringstream os;
    os << proof_ratios().size() << " auxiliary functions x 3 tau: max |residue sum| " << worst_sum << ", "
       << residues << " displayed residues, max rel error " << worst_rel;
    if (!bad.empty()) {
        os << ", failing:" << bad;
    }
    return {ok, os.str()};
}

Outcome criterion9()
{
    std::vector<ThetaSpec> specs;
    for (const auto &e : registry()) {
        if (e.level == 4) {
            collect_thetas(e.lhs, specs);
            collect_thetas(e.rhs, specs);
        }
    }
    const cd tau(0.1, 0.9);
    const double pi = std::acos(-1.0);
    double worst = 0;
    for (const auto &s : specs) {
        const auto series = theta_series(s, Rational(kBridgeOrder));
        const cd mt = s.tau_mult.get_d() * tau;
        const EvalParams p{mt, 30, 1e-28};
        const cd numeric = s.derived ? theta_deriv_eval(s.chr, 0.0, p) / cd(0, pi) : theta_eval(s.chr, 0.0, p);
        worst = std::max(worst, std::abs(numeric - embed_at(series, tau)));
    }
    std::ostringstream os;
    os << specs.size() << " level-4 theta series at tau = 0.1+0.9i, max |embed - theta_eval| " << worst;
    return {worst <= kBridgeTol && specs.size() >= 6, os.str()};
}

Outcome criterion10()
{
    const std::vector<std::string> ids{"s3-thm3.1-a", "s4-thm4.1-a", "s5-thm5.1-a", "s6-thm6.1-a", "s7-thm7.1-a"};
    bool ok = true;
    std::ostringstream os;
    os << "corrupted constants:";
    for (const auto &id : ids) {
        const auto &e = find_identity(id);
        const auto r = verify(corrupt_constant(e));
        const bool fails = !r.passed && r.mismatch && r.mismatch->exponent < r.order;
        ok = ok && fails;
        os << " " << id << (r.mismatch ? "@q^" + to_string(r.mismatch->exponent) : std::string("(no mismatch)"));
    }
    return {ok, os.str()};
}

} // namespace

int main()
{
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                         criterion5, criterion6, criterion7, criterion8,
                                                         criterion9, criterion10};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o{false, ""};
        try {
            o = criteria[i]();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.passed ? 0 : 1;
        std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
