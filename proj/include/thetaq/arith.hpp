#pragma once

#include <optional>
#include <string>
#include <vector>

#include <thetaq/qseries.hpp>

namespace thetaq
{

enum class CountKind { d, d_star, S2, S_ab, T2, T_ab, M_ab, legendre3 };

// d, d_star: (p, r) = (j, k) with 1 <= j <= k. S_ab, T_ab, M_ab: (p, r) = (a, b) >= 1.
struct CountFamily {
    CountKind kind;
    long p = 0;
    long r = 0;
};

// Throws DomainError on invalid parameters.
void validate(const CountFamily &f);
std::string to_string(const CountFamily &f);
// "d", "d_star", "S2", "S_ab", "T2", "T_ab", "M_ab", "legendre3" (case-insensitive).
CountKind parse_count_kind(const std::string &name);
std::string to_string(CountKind k);

// Exhaustive enumeration. d and d_star need n >= 1 (DomainError otherwise); the
// representation counts treat x, y as ranging over all integers, including the index of
// a triangular number t_x = x(x + 1)/2.
long count(const CountFamily &f, long n);

inline long d_count(long j, long k, long n)
{
    return count({CountKind::d, j, k}, n);
}

// sum over n >= n0 of count(n) q^{(alpha n + beta)/D}, with n0 = 1 for divisor counts and
// 0 otherwise; exact below T.
PuiseuxSeries generating_series(const CountFamily &f, long D, long alpha, long beta, const Rational &T);

// sum over n >= n_min of w(n) q^{(a n^2 + b n + c)/D}, where w(n) is the product of the
// selected factors (-1)^{n-1}, n, (n/3), and w vanishes on even n when odd_only is set.
struct QuadraticSum {
    long a = 1;
    long b = 0;
    long c = 0;
    long D = 1;
    long n_min = 1;
    bool alternating = false;
    bool times_n = false;
    bool legendre = false;
    bool odd_only = false;
};

PuiseuxSeries quadratic_sum_series(const QuadraticSum &s, const Rational &T);
std::string to_string(const QuadraticSum &s);

struct RelationReport {
    std::string id;
    std::string statement;
    long n_max = 0;
    bool passed = true;
    // Smallest n violating the relation, with both sides.
    std::optional<long> counterexample;
    long lhs = 0;
    long rhs = 0;
    double millis = 0;
};

// Pointwise relations between counting functions, checked for all 0 <= n <= n_max (or
// 1 <= n when the relation involves divisor counts).
std::vector<std::string> count_relation_ids();
std::string count_relation_statement(const std::string &id);
RelationReport check_count_relation(const std::string &id, long n_max);

} // namespace thetaq
