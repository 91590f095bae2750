#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <thetaq/arith.hpp>
#include <thetaq/cyclotomic.hpp>
#include <thetaq/eta.hpp>
#include <thetaq/qseries.hpp>
#include <thetaq/theta.hpp>

namespace thetaq
{

// sum over n of count(n) q^{(alpha n + beta)/D}.
struct CountingLeaf {
    CountFamily family;
    long D = 1;
    long alpha = 1;
    long beta = 0;
};

struct ConstantLeaf {
    CycNum value;
    std::string label;
};

class SeriesExpr
{
public:
    enum class Kind { theta, eta, qproduct, counting, quadratic, constant, add, sub, mul, pow, inv };
    using Payload =
        std::variant<std::monostate, ThetaSpec, EtaQuotient, QProduct, CountingLeaf, QuadraticSum, ConstantLeaf>;

    struct Node {
        Kind kind;
        Payload payload;
        std::vector<SeriesExpr> children;
        long exponent = 0;
    };

    SeriesExpr();
    explicit SeriesExpr(std::shared_ptr<const Node> node);

    static SeriesExpr leaf(Kind kind, Payload payload);
    static SeriesExpr op(Kind kind, std::vector<SeriesExpr> children, long exponent = 0);

    Kind kind() const
    {
        return node_->kind;
    }
    const Node &node() const
    {
        return *node_;
    }
    const std::vector<SeriesExpr> &children() const
    {
        return node_->children;
    }
    bool is_leaf() const
    {
        return node_->kind < Kind::add;
    }

private:
    std::shared_ptr<const Node> node_;
};

SeriesExpr theta_expr(const Rational &eps, const Rational &eps_prime, const Rational &tau_mult = 1);
// Reduced derivative theta'/(pi i).
SeriesExpr theta_deriv_expr(const Rational &eps, const Rational &eps_prime, const Rational &tau_mult = 1);
SeriesExpr eta_expr(const EtaQuotient &e);
SeriesExpr qproduct_expr(const QProduct &p);
SeriesExpr counting_expr(const CountFamily &f, long D = 1, long alpha = 1, long beta = 0);
SeriesExpr quadratic_expr(const QuadraticSum &s);
SeriesExpr constant_expr(const CycNum &c, std::string label = {});

SeriesExpr operator+(const SeriesExpr &a, const SeriesExpr &b);
SeriesExpr operator-(const SeriesExpr &a, const SeriesExpr &b);
SeriesExpr operator*(const SeriesExpr &a, const SeriesExpr &b);
SeriesExpr operator*(const CycNum &c, const SeriesExpr &a);
SeriesExpr pow(const SeriesExpr &a, long k);
SeriesExpr inv(const SeriesExpr &a);

std::string to_string(const SeriesExpr &e);

// Exact below T; throws ZeroSeries when an inverted subexpression vanishes.
PuiseuxSeries evaluate(const SeriesExpr &e, const Rational &T);

struct Identity {
    std::string id;
    SeriesExpr lhs;
    SeriesExpr rhs;
    // Characteristic level of the objects involved (2 for half-integer characteristics).
    int level = 0;
    Rational default_order;
    std::string source;
    std::string notes;
};

struct VerificationReport {
    std::string id;
    Rational order;
    bool passed = false;
    std::optional<Mismatch> mismatch;
    double millis = 0;
    // Set when evaluation threw; passed is false and mismatch empty in that case.
    std::string error;
};

const std::vector<Identity> &registry();
// Literal transcriptions of displayed formulas whose constants fail verification; the
// registry carries the corrected constants under the id without the "-printed" suffix.
const std::vector<Identity> &printed_variants();
// Searches the registry and the printed variants; throws UnknownIdentity.
const Identity &find_identity(const std::string &id);
bool is_count_relation(const std::string &id);

VerificationReport verify(const Identity &identity, std::optional<Rational> order = std::nullopt);
VerificationReport verify(const std::string &id, std::optional<Rational> order = std::nullopt);
// Registry order regardless of jobs; jobs = 0 uses the hardware concurrency.
std::vector<VerificationReport> verify_all(std::optional<Rational> order = std::nullopt,
                                           std::optional<int> level = std::nullopt, unsigned jobs = 0);

// Copy of the identity with the first constant leaf of the right side (then the left side)
// negated; an identity without constants gets its right side doubled.
Identity corrupt_constant(const Identity &identity);

} // namespace thetaq
