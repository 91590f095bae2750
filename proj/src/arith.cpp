#include <thetaq/arith.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include <thetaq/errors.hpp>

namespace thetaq
{

namespace
{

long isqrt(long n)
{
    if (n < 0) {
        return -1;
    }
    long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) {
        --r;
    }
    while ((r + 1) * (r + 1) <= n) {
        ++r;
    }
    return r;
}

// Number of y in Z with y^2 = m.
long square_roots(long m)
{
    if (m < 0) {
        return 0;
    }
    const long r = isqrt(m);
    if (r * r != m) {
        return 0;
    }
    return r == 0 ? 1 : 2;
}

// Number of y in Z with y(y + 1)/2 = m; y and -1 - y give the same value.
long triangular_roots(long m)
{
    if (m < 0) {
        return 0;
    }
    const long s = isqrt(8 * m + 1);
    return s * s == 8 * m + 1 ? 2 : 0;
}

long divisor_count(long j, long k, long n, bool odd_cofactor)
{
    long c = 0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d != 0) {
            continue;
        }
        const long e = n / d;
        if (d % k == j % k && (!odd_cofactor || e % 2 == 1)) {
            ++c;
        }
        if (e != d && e % k == j % k && (!odd_cofactor || d % 2 == 1)) {
            ++c;
        }
    }
    return c;
}

// a x^2 + b y^2 = n.
long squares(long a, long b, long n)
{
    long c = 0;
    const long xm = isqrt(n / a);
    for (long x = -xm; x <= xm; ++x) {
        const long rem = n - a * x * x;
        if (rem % b == 0) {
            c += square_roots(rem / b);
        }
    }
    return c;
}

// a t_x + b t_y = n, x and y over Z.
long triangles(long a, long b, long n)
{
    long c = 0;
    for (long x = 0; a * (x * (x + 1) / 2) <= n; ++x) {
        const long rem = n - a * (x * (x + 1) / 2);
        if (rem % b == 0) {
            c += 2 * triangular_roots(rem / b);
        }
    }
    return c;
}

// a x^2 + b t_y = n.
long mixed(long a, long b, long n)
{
    long c = 0;
    const long xm = isqrt(n / a);
    for (long x = -xm; x <= xm; ++x) {
        const long rem = n - a * x * x;
        if (rem >= 0 && rem % b == 0) {
            c += triangular_roots(rem / b);
        }
    }
    return c;
}

bool is_divisor_kind(CountKind k)
{
    return k == CountKind::d || k == CountKind::d_star;
}

} // namespace

void validate(const CountFamily &f)
{
    switch (f.kind) {
    case CountKind::d:
    case CountKind::d_star:
        if (f.p < 1 || f.p > f.r) {
            throw DomainError("divisor count needs 1 <= j <= k");
        }
        break;
    case CountKind::S_ab:
    case CountKind::T_ab:
    case CountKind::M_ab:
        if (f.p < 1 || f.r < 1) {
            throw DomainError("representation count needs a, b >= 1");
        }
        break;
    default:
        break;
    }
}

std::string to_string(CountKind k)
{
    switch (k) {
    case CountKind::d:
        return "d";
    case CountKind::d_star:
        return "d_star";
    case CountKind::S2:
        return "S2";
    case CountKind::S_ab:
        return "S_ab";
    case CountKind::T2:
        return "T2";
    case CountKind::T_ab:
        return "T_ab";
    case CountKind::M_ab:
        return "M_ab";
    case CountKind::legendre3:
        return "legendre3";
    }
    return "?";
}

CountKind parse_count_kind(const std::string &name)
{
    std::string n;
    for (char c : name) {
        n += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    static const std::map<std::string, CountKind> kinds = {
        {"d", CountKind::d},       {"d_star", CountKind::d_star}, {"dstar", CountKind::d_star},
        {"s2", CountKind::S2},     {"s_ab", CountKind::S_ab},     {"t2", CountKind::T2},
        {"t_ab", CountKind::T_ab}, {"m_ab", CountKind::M_ab},     {"legendre3", CountKind::legendre3},
    };
    auto it = kinds.find(n);
    if (it == kinds.end()) {
        throw ParseError("unknown count family '" + name + "'");
    }
    return it->second;
}

std::string to_string(const CountFamily &f)
{
    switch (f.kind) {
    case CountKind::d:
        return "d_{" + std::to_string(f.p) + "," + std::to_string(f.r) + "}";
    case CountKind::d_star:
        return "d*_{" + std::to_string(f.p) + "," + std::to_string(f.r) + "}";
    case CountKind::S_ab:
        return "S_{" + std::to_string(f.p) + "," + std::to_string(f.r) + "}";
    case CountKind::T_ab:
        return "T_{" + std::to_string(f.p) + "," + std::to_string(f.r) + "}";
    case CountKind::M_ab:
        return "M_{" + std::to_string(f.p) + "-" + std::to_string(f.r) + "}";
    default:
        return to_string(f.kind);
    }
}

long count(const CountFamily &f, long n)
{
    validate(f);
    if (is_divisor_kind(f.kind) && n < 1) {
        throw DomainError("divisor counts are defined for n >= 1");
    }
    if (n < 0 && f.kind != CountKind::legendre3) {
        throw DomainError("counts are defined for n >= 0");
    }
    switch (f.kind) {
    case CountKind::d:
        return divisor_count(f.p, f.r, n, false);
    case CountKind::d_star:
        return divisor_count(f.p, f.r, n, true);
    case CountKind::S2:
        return squares(1, 1, n);
    case CountKind::S_ab:
        return squares(f.p, f.r, n);
    case CountKind::T2:
        return triangles(1, 1, n);
    case CountKind::T_ab:
        return triangles(f.p, f.r, n);
    case CountKind::M_ab:
        return mixed(f.p, f.r, n);
    case CountKind::legendre3: {
        const long m = ((n % 3) + 3) % 3;
        return m == 0 ? 0 : (m == 1 ? 1 : -1);
    }
    }
    return 0;
}

PuiseuxSeries generating_series(const CountFamily &f, long D, long alpha, long beta, const Rational &T)
{
    validate(f);
    if (alpha <= 0 || D <= 0) {
        throw DomainError("generating series needs alpha > 0 and D > 0");
    }
    PuiseuxSeries::Terms terms;
    for (long n = is_divisor_kind(f.kind) ? 1 : 0; rat(alpha * n + beta, D) < T; ++n) {
        const long c = count(f, n);
        if (c != 0) {
            terms.emplace_hint(terms.end(), alpha * n + beta, CycNum(c));
        }
    }
    return PuiseuxSeries::from_terms(D, 1, std::move(terms), T);
}

PuiseuxSeries quadratic_sum_series(const QuadraticSum &s, const Rational &T)
{
    if (s.a <= 0 || s.D <= 0 || 2 * s.a * s.n_min + s.b <= 0) {
        throw DomainError("quadratic sum must have increasing exponents from n_min");
    }
    PuiseuxSeries::Terms terms;
    for (long n = s.n_min;; ++n) {
        const long e = s.a * n * n + s.b * n + s.c;
        if (rat(e, s.D) >= T) {
            break;
        }
        if (s.odd_only && n % 2 == 0) {
            continue;
        }
        long w = 1;
        if (s.alternating && (n - 1) % 2 != 0) {
            w = -w;
        }
        if (s.times_n) {
            w *= n;
        }
        if (s.legendre) {
            w *= count({CountKind::legendre3}, n);
        }
        if (w != 0) {
            terms[e] += CycNum(w);
        }
    }
    return PuiseuxSeries::from_terms(s.D, 1, std::move(terms), T);
}

std::string to_string(const QuadraticSum &s)
{
    std::string w;
    if (s.alternating) {
        w += "(-1)^(n-1) ";
    }
    if (s.times_n) {
        w += "n ";
    }
    if (s.legendre) {
        w += "(n/3) ";
    }
    return "sum_{n>=" + std::to_string(s.n_min) + (s.odd_only ? ", n odd" : "") + "} " + w + "q^((" +
           std::to_string(s.a) + "n^2+" + std::to_string(s.b) + "n+" + std::to_string(s.c) + ")/" +
           std::to_string(s.D) + ")";
}

namespace
{

struct Relation {
    std::string statement;
    long n_min;
    std::function<long(long)> lhs;
    std::function<long(long)> rhs;
};

const std::map<std::string, Relation> &relations()
{
    static const std::map<std::string, Relation> table = [] {
        const auto S2 = [](long n) { return count({CountKind::S2}, n); };
        const auto S12 = [](long n) { return count({CountKind::S_ab, 1, 2}, n); };
        const auto zero = [](long) { return 0l; };
        std::map<std::string, Relation> t;
        t["s1-thm1.1-a"] = {"S2(n) = 4(d_{1,4}(n) - d_{3,4}(n))", 1, S2,
                            [](long n) { return 4 * (d_count(1, 4, n) - d_count(3, 4, n)); }};
        t["s1-thm1.1-b"] = {"S_{1,2}(n) = 2(d_{1,8}(n) + d_{3,8}(n) - d_{5,8}(n) - d_{7,8}(n))", 1, S12,
                            [](long n) {
                                return 2 * (d_count(1, 8, n) + d_count(3, 8, n) - d_count(5, 8, n) -
                                            d_count(7, 8, n));
                            }};
        t["s7-thm7.3-a"] = {"S2(2n) = S2(n)", 0, [=](long n) { return S2(2 * n); }, S2};
        t["s7-thm7.3-b"] = {"S2(4n+1) = T2(n)", 0, [=](long n) { return S2(4 * n + 1); },
                            [](long n) { return count({CountKind::T2}, n); }};
        t["s7-thm7.3-c"] = {"S2(4n+3) = 0", 0, [=](long n) { return S2(4 * n + 3); }, zero};
        t["s7-thm7.5-a"] = {"S_{1,2}(8n+1) = M_{1-1}(n)", 0, [=](long n) { return S12(8 * n + 1); },
                            [](long n) { return count({CountKind::M_ab, 1, 1}, n); }};
        t["s7-thm7.5-b"] = {"S_{1,2}(8n+3) = T_{1,2}(n)", 0, [=](long n) { return S12(8 * n + 3); },
                            [](long n) { return count({CountKind::T_ab, 1, 2}, n); }};
        t["s7-thm7.5-c"] = {"S_{1,2}(8n+5) = 0", 0, [=](long n) { return S12(8 * n + 5); }, zero};
        t["s7-thm7.5-d"] = {"S_{1,2}(8n+7) = 0", 0, [=](long n) { return S12(8 * n + 7); }, zero};
        t["s7-thm7.5-e"] = {"S_{1,2}(4n) = S_{1,2}(n)", 0, [=](long n) { return S12(4 * n); }, S12};
        t["s7-thm7.5-f"] = {"S_{1,2}(4n+2) = M_{1-4}(n)", 0, [=](long n) { return S12(4 * n + 2); },
                            [](long n) { return count({CountKind::M_ab, 1, 4}, n); }};
        return t;
    }();
    return table;
}

const Relation &find_relation(const std::string &id)
{
    auto it = relations().find(id);
    if (it == relations().end()) {
        throw UnknownRelation("unknown count relation '" + id + "'");
    }
    return it->second;
}

} // namespace

std::vector<std::string> count_relation_ids()
{
    std::vector<std::string> ids;
    for (const auto &[id, r] : relations()) {
        ids.push_back(id);
    }
    return ids;
}

std::string count_relation_statement(const std::string &id)
{
    return find_relation(id).statement;
}

RelationReport check_count_relation(const std::string &id, long n_max)
{
    const auto &rel = find_relation(id);
    if (n_max < 1) {
        throw DomainError("n_max must be positive");
    }
    const auto t0 = std::chrono::steady_clock::now();
    RelationReport rep;
    rep.id = id;
    rep.statement = rel.statement;
    rep.n_max = n_max;
    for (long n = rel.n_min; n <= n_max; ++n) {
        const long l = rel.lhs(n);
        const long r = rel.rhs(n);
        if (l != r) {
            rep.passed = false;
            rep.counterexample = n;
            rep.lhs = l;
            rep.rhs = r;
            break;
        }
    }
    rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace thetaq
