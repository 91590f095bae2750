#include <thetaq/cli.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <thetaq/arith.hpp>
#include <thetaq/errors.hpp>
#include <thetaq/identities.hpp>
#include <thetaq/numerics.hpp>

namespace thetaq::cli
{

namespace
{

using nlohmann::json;

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class Format { text, json, csv };

Format format_of(const std::string &s)
{
    return s == "json" ? Format::json : s == "csv" ? Format::csv : Format::text;
}

// Validation failures become usage errors; compute failures stay library errors.
template <class F> decltype(auto) validated(F &&f)
{
    try {
        return f();
    } catch (const Error &e) {
        throw UsageError(e.what());
    }
}

Rational positive_rational(const std::string &s, const char *what)
{
    const Rational r = validated([&] { return parse_rational(s); });
    if (r <= 0) {
        throw UsageError(std::string(what) + " must be positive");
    }
    return r;
}

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return q + "\"";
}

json complex_json(std::complex<double> z)
{
    return {{"re", z.real()}, {"im", z.imag()}};
}

json report_json(const VerificationReport &r)
{
    json j{{"id", r.id}, {"passed", r.passed}, {"order", to_string(r.order)}, {"millis", r.millis}};
    j["mismatch"] = r.mismatch ? json{{"exponent", to_string(r.mismatch->exponent)}, {"diff", to_text(r.mismatch->diff)}}
                               : json(nullptr);
    if (!r.error.empty()) {
        j["error"] = r.error;
    }
    return j;
}

std::string report_text(const VerificationReport &r)
{
    std::ostringstream os;
    os << (r.passed ? "PASS " : "FAIL ") << r.id << " order=" << to_string(r.order) << " millis=" << r.millis;
    if (r.mismatch) {
        os << " first mismatch at q^(" << to_string(r.mismatch->exponent) << "): " << to_text(r.mismatch->diff);
    }
    if (!r.error.empty()) {
        os << " error: " << r.error;
    }
    return os.str();
}

const char *kReportHeader = "id,passed,order,mismatch_exponent,mismatch_diff,millis";

std::string report_csv(const VerificationReport &r)
{
    std::ostringstream os;
    os << csv_field(r.id) << ',' << (r.passed ? "true" : "false") << ',' << to_string(r.order) << ','
       << (r.mismatch ? to_string(r.mismatch->exponent) : "") << ','
       << csv_field(r.mismatch ? to_text(r.mismatch->diff) : "") << ',' << r.millis;
    return os.str();
}

json relation_json(const RelationReport &r)
{
    json j{{"id", r.id},         {"statement", r.statement}, {"passed", r.passed},
           {"n_max", r.n_max},   {"millis", r.millis}};
    j["counterexample"] = r.counterexample ? json{{"n", *r.counterexample}, {"lhs", r.lhs}, {"rhs", r.rhs}}
                                           : json(nullptr);
    return j;
}

void print_relation(const RelationReport &r, Format f, std::ostream &out)
{
    if (f == Format::json) {
        out << relation_json(r).dump(2) << '\n';
    } else if (f == Format::csv) {
        out << "id,passed,n_max,counterexample,lhs,rhs,millis\n"
            << csv_field(r.id) << ',' << (r.passed ? "true" : "false") << ',' << r.n_max << ','
            << (r.counterexample ? std::to_string(*r.counterexample) : "") << ','
            << (r.counterexample ? std::to_string(r.lhs) : "") << ',' << (r.counterexample ? std::to_string(r.rhs) : "")
            << ',' << r.millis << '\n';
    } else {
        out << (r.passed ? "PASS " : "FAIL ") << r.id << " (" << r.statement << ") n<=" << r.n_max
            << " millis=" << r.millis;
        if (r.counterexample) {
            out << " fails at n=" << *r.counterexample << ": " << r.lhs << " vs " << r.rhs;
        }
        out << '\n';
    }
}

void print_series(const PuiseuxSeries &s, Format f, std::ostream &out)
{
    if (f == Format::json) {
        json terms = json::array();
        for (const auto &[k, c] : s.terms()) {
            terms.push_back({{"exponent", to_string(s.exponent(k))}, {"coeff", to_text(c)}});
        }
        out << json{{"D", s.denom()},
                    {"L", s.coeff_order()},
                    {"T", s.trunc() ? json(to_string(*s.trunc())) : json(nullptr)},
                    {"terms", terms}}
                   .dump(2)
            << '\n';
    } else if (f == Format::csv) {
        out << "exponent,coefficient\n";
        for (const auto &[k, c] : s.terms()) {
            out << to_string(s.exponent(k)) << ',' << csv_field(to_text(c)) << '\n';
        }
    } else {
        out << to_text(s);
        if (!to_text(s).empty() && to_text(s).back() != '\n') {
            out << '\n';
        }
    }
}

struct Options {
    std::string format = "text";
    std::string id;
    int level = 0;
    std::string order;
    unsigned jobs = 0;
    std::string eps;
    std::string eps_prime;
    std::string tau_mult = "1";
    bool derived = false;
    std::string eta;
    std::string family;
    long j = 0;
    long k = 0;
    long max = -1;
    std::string z = "0";
    std::string tau;
    double tol = 1e-25;
    int digits = 30;
    std::string proof;
};

int do_expand(const Options &o, std::ostream &out)
{
    const Format f = format_of(o.format);
    const Rational T = positive_rational(o.order, "--order");
    const bool theta = !o.eps.empty() || !o.eps_prime.empty();
    if (theta == !o.eta.empty()) {
        throw UsageError("expand needs either --eps/--eps-prime or --eta");
    }
    if (theta) {
        if (o.eps.empty() || o.eps_prime.empty()) {
            throw UsageError("expand needs both --eps and --eps-prime");
        }
        const ThetaSpec spec{{validated([&] { return parse_rational(o.eps); }),
                              validated([&] { return parse_rational(o.eps_prime); })},
                             positive_rational(o.tau_mult, "--tau-mult"),
                             o.derived};
        print_series(theta_series(spec, T), f, out);
    } else {
        const auto e = validated([&] {
            auto q = parse_eta_quotient(o.eta);
            validate(q);
            return q;
        });
        print_series(eta_quotient_series(e, T), f, out);
    }
    return 0;
}

int do_verify(const Options &o, std::ostream &out)
{
    const Format f = format_of(o.format);
    if (is_count_relation(o.id)) {
        const long n = o.max < 0 ? 1000 : o.max;
        const auto r = check_count_relation(o.id, n);
        print_relation(r, f, out);
        return r.passed ? 0 : 1;
    }
    const Identity &e = validated([&]() -> const Identity & { return find_identity(o.id); });
    std::optional<Rational> order;
    if (!o.order.empty()) {
        order = positive_rational(o.order, "--order");
    }
    const auto r = verify(e, order);
    if (f == Format::json) {
        out << report_json(r).dump(2) << '\n';
    } else if (f == Format::csv) {
        out << kReportHeader << '\n' << report_csv(r) << '\n';
    } else {
        out << report_text(r) << '\n';
    }
    return r.passed ? 0 : 1;
}

int do_verify_all(const Options &o, std::ostream &out)
{
    const Format f = format_of(o.format);
    std::optional<Rational> order;
    if (!o.order.empty()) {
        order = positive_rational(o.order, "--order");
    }
    std::optional<int> level;
    if (o.level != 0) {
        level = o.level;
    }
    const auto reports = verify_all(order, level, o.jobs);
    bool ok = true;
    json arr = json::array();
    if (f == Format::csv) {
        out << kReportHeader << '\n';
    }
    for (const auto &r : reports) {
        ok = ok && r.passed;
        if (f == Format::json) {
            arr.push_back(report_json(r));
        } else if (f == Format::csv) {
            out << report_csv(r) << '\n';
        } else {
            out << report_text(r) << '\n';
        }
    }
    if (f == Format::json) {
        out << arr.dump(2) << '\n';
    } else if (f == Format::text) {
        std::size_t passed = 0;
        for (const auto &r : reports) {
            passed += r.passed ? 1 : 0;
        }
        out << passed << "/" << reports.size() << " passed\n";
    }
    return ok ? 0 : 1;
}

int do_counts(const Options &o, std::ostream &out)
{
    const Format f = format_of(o.format);
    const CountFamily fam = validated([&] {
        CountFamily c{parse_count_kind(o.family), o.j, o.k};
        validate(c);
        return c;
    });
    if (o.max < 0) {
        throw UsageError("--max must be non-negative");
    }
    const long n0 = fam.kind == CountKind::d || fam.kind == CountKind::d_star ? 1 : 0;
    json rows = json::array();
    if (f == Format::csv) {
        out << "n,count\n";
    }
    for (long n = n0; n <= o.max; ++n) {
        const long c = count(fam, n);
        if (f == Format::json) {
            rows.push_back({{"n", n}, {"count", c}});
        } else if (f == Format::csv) {
            out << n << ',' << c << '\n';
        } else {
            out << to_string(fam) << "(" << n << ") = " << c << '\n';
        }
    }
    if (f == Format::json) {
        out << json{{"family", to_string(fam)}, {"rows", rows}}.dump(2) << '\n';
    }
    return 0;
}

EvalParams eval_params(const Options &o)
{
    if (o.tau.empty()) {
        throw UsageError("--tau is required");
    }
    const auto tau = validated([&] { return parse_complex(o.tau); });
    if (!(tau.imag() > 0)) {
        throw UsageError("--tau must have positive imaginary part");
    }
    if (!(o.tol > 0)) {
        throw UsageError("--tol must be positive");
    }
    if (o.digits < 1 || o.digits > 100) {
        throw UsageError("--digits must lie in 1..100");
    }
    return {tau, o.digits, o.tol};
}

int do_eval(const Options &o, std::ostream &out)
{
    const Format f = format_of(o.format);
    if (o.eps.empty() || o.eps_prime.empty()) {
        throw UsageError("eval needs --eps and --eps-prime");
    }
    const Characteristic c{validated([&] { return parse_rational(o.eps); }),
                           validated([&] { return parse_rational(o.eps_prime); })};
    const auto z = validated([&] { return parse_complex(o.z); });
    const EvalParams p = eval_params(o);
    const auto v = o.derived ? theta_deriv_eval(c, z, p) : theta_eval(c, z, p);
    if (f == Format::json) {
        out << json{{"characteristic", to_string(c)},
                    {"derivative", o.derived},
                    {"z", to_string(z)},
                    {"tau", to_string(p.tau)},
                    {"digits", p.digits},
                    {"value", complex_json(v)}}
                   .dump(2)
            << '\n';
    } else if (f == Format::csv) {
        out << "re,im\n" << std::setprecision(17) << v.real() << ',' << v.imag() << '\n';
    } else {
        out << "theta" << (o.derived ? "'" : "") << to_string(c) << "(" << to_string(z) << ", " << to_string(p.tau)
            << ") = " << to_string(v) << '\n';
    }
    return 0;
}

int do_residue_check(const Options &o, std::ostream &out)
{
    const Format f = format_of(o.format);
    std::vector<const ProofRatio *> targets;
    if (o.proof.empty()) {
        for (const auto &r : proof_ratios()) {
            targets.push_back(&r);
        }
    } else {
        targets.push_back(&validated([&]() -> const ProofRatio & { return find_proof(o.proof); }));
    }
    const EvalParams p = eval_params(o);
    bool ok = true;
    json arr = json::array();
    if (f == Format::csv) {
        out << "id,passed,abs_sum,max_rel_error,discrepancies\n";
    }
    for (const auto *r : targets) {
        const auto c = residue_check(*r, p);
        ok = ok && c.passed;
        double worst = 0;
        for (const auto &x : c.residues) {
            worst = std::max(worst, x.rel_error);
        }
        if (f == Format::json) {
            json res = json::array();
            for (const auto &x : c.residues) {
                res.push_back({{"pole", to_string(x.a) + " tau + " + to_string(x.b)},
                               {"numeric", complex_json(x.numeric)},
                               {"displayed", complex_json(x.displayed)},
                               {"rel_error", x.rel_error}});
            }
            arr.push_back({{"id", c.id},
                           {"ratio", to_string(r->f)},
                           {"tau", to_string(c.tau)},
                           {"sum", complex_json(c.sum)},
                           {"abs_sum", std::abs(c.sum)},
                           {"residues", res},
                           {"discrepancies", c.discrepancies},
                           {"passed", c.passed}});
        } else if (f == Format::csv) {
            out << csv_field(c.id) << ',' << (c.passed ? "true" : "false") << ',' << std::abs(c.sum) << ',' << worst
                << ',' << c.discrepancies.size() << '\n';
        } else {
            out << (c.passed ? "PASS " : "FAIL ") << c.id << " |sum|=" << std::abs(c.sum);
            for (const auto &x : c.residues) {
                out << "\n  Res at " << to_string(x.a) << " tau + " << to_string(x.b) << ": " << to_string(x.numeric)
                    << " vs displayed " << to_string(x.displayed) << " (rel " << x.rel_error << ")";
            }
            for (const auto &d : c.discrepancies) {
                out << "\n  note: " << d;
            }
            out << '\n';
        }
    }
    if (f == Format::json) {
        out << (o.proof.empty() ? arr : arr.front()).dump(2) << '\n';
    }
    return ok ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Exact q-series identities for theta constants with rational characteristics", "thetaq"};
    app.require_subcommand(1);
    Options o;
    const auto common = [&](CLI::App *s) {
        s->add_option("--format", o.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    };
    auto *expand = app.add_subcommand("expand", "print the q-expansion of a theta constant or eta quotient");
    common(expand);
    expand->add_option("--eps", o.eps);
    expand->add_option("--eps-prime", o.eps_prime);
    expand->add_option("--tau-mult", o.tau_mult, "m in theta(0, m tau)");
    expand->add_flag("--derived", o.derived, "reduced derivative theta'/(pi i)");
    expand->add_option("--eta", o.eta, "eta quotient, e.g. \"2^5 * 1^-2\"");
    expand->add_option("--order", o.order, "truncation order T")->required();

    auto *ver = app.add_subcommand("verify", "verify one registry identity or counting relation");
    common(ver);
    ver->add_option("--id", o.id)->required();
    ver->add_option("--order", o.order);
    ver->add_option("--max", o.max, "n_max for counting relations (default 1000)");

    auto *all = app.add_subcommand("verify-all", "verify the whole registry");
    common(all);
    all->add_option("--level", o.level)->check(CLI::IsMember({2, 3, 4, 5, 6, 8}));
    all->add_option("--order", o.order);
    all->add_option("--jobs", o.jobs, "worker threads (0 = all cores)");

    auto *counts = app.add_subcommand("counts", "tabulate a counting function");
    common(counts);
    counts->add_option("--family", o.family, "d, d_star, S2, S_ab, T2, T_ab, M_ab, legendre3")->required();
    counts->add_option("--j,--a", o.j);
    counts->add_option("--k,--b", o.k);
    counts->add_option("--max", o.max)->required();

    auto *eval = app.add_subcommand("eval", "evaluate theta[eps;eps'](z, tau) numerically");
    common(eval);
    eval->add_option("--eps", o.eps)->required();
    eval->add_option("--eps-prime", o.eps_prime)->required();
    eval->add_option("--z", o.z);
    eval->add_option("--tau", o.tau)->required();
    eval->add_option("--tol", o.tol);
    eval->add_option("--digits", o.digits);
    eval->add_flag("--derivative", o.derived);

    auto *res = app.add_subcommand("residue-check", "residue sum and displayed residues of auxiliary functions");
    common(res);
    res->add_option("--proof", o.proof, "auxiliary function id (default: all)");
    o.tau = "0.15+1.05i";
    res->add_option("--tau", o.tau);
    res->add_option("--tol", o.tol);
    res->add_option("--digits", o.digits);

    std::vector<const char *> argv{"thetaq"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        err << e.what() << "\n\n" << app.help();
        return 2;
    }
    try {
        if (expand->parsed()) {
            return do_expand(o, out);
        }
        if (ver->parsed()) {
            return do_verify(o, out);
        }
        if (all->parsed()) {
            return do_verify_all(o, out);
        }
        if (counts->parsed()) {
            return do_counts(o, out);
        }
        if (eval->parsed()) {
            return do_eval(o, out);
        }
        return do_residue_check(o, out);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace thetaq::cli
