#include <thetaq/identities.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <map>
#include <numeric>
#include <thread>

#include <thetaq/errors.hpp>

namespace thetaq
{

SeriesExpr::SeriesExpr() : SeriesExpr(leaf(Kind::constant, ConstantLeaf{CycNum(0), "0"})) {}

SeriesExpr::SeriesExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

SeriesExpr SeriesExpr::leaf(Kind kind, Payload payload)
{
    return SeriesExpr(std::make_shared<const Node>(Node{kind, std::move(payload), {}, 0}));
}

SeriesExpr SeriesExpr::op(Kind kind, std::vector<SeriesExpr> children, long exponent)
{
    return SeriesExpr(std::make_shared<const Node>(Node{kind, std::monostate{}, std::move(children), exponent}));
}

SeriesExpr theta_expr(const Rational &eps, const Rational &eps_prime, const Rational &tau_mult)
{
    return SeriesExpr::leaf(SeriesExpr::Kind::theta, ThetaSpec{{eps, eps_prime}, tau_mult, false});
}

SeriesExpr theta_deriv_expr(const Rational &eps, const Rational &eps_prime, const Rational &tau_mult)
{
    return SeriesExpr::leaf(SeriesExpr::Kind::theta, ThetaSpec{{eps, eps_prime}, tau_mult, true});
}

SeriesExpr eta_expr(const EtaQuotient &e)
{
    validate(e);
    return SeriesExpr::leaf(SeriesExpr::Kind::eta, e);
}

SeriesExpr qproduct_expr(const QProduct &p)
{
    return SeriesExpr::leaf(SeriesExpr::Kind::qproduct, p);
}

SeriesExpr counting_expr(const CountFamily &f, long D, long alpha, long beta)
{
    validate(f);
    if (D <= 0 || alpha <= 0) {
        throw DomainError("counting series needs D > 0 and alpha > 0");
    }
    return SeriesExpr::leaf(SeriesExpr::Kind::counting, CountingLeaf{f, D, alpha, beta});
}

SeriesExpr quadratic_expr(const QuadraticSum &s)
{
    if (s.a <= 0 || s.D <= 0) {
        throw DomainError("quadratic sum needs a > 0 and D > 0");
    }
    return SeriesExpr::leaf(SeriesExpr::Kind::quadratic, s);
}

SeriesExpr constant_expr(const CycNum &c, std::string label)
{
    if (label.empty()) {
        label = c.is_rational() ? c.coeff(0).get_str() : "(" + to_text(c) + ")";
    }
    return SeriesExpr::leaf(SeriesExpr::Kind::constant, ConstantLeaf{c, std::move(label)});
}

SeriesExpr operator+(const SeriesExpr &a, const SeriesExpr &b)
{
    return SeriesExpr::op(SeriesExpr::Kind::add, {a, b});
}

SeriesExpr operator-(const SeriesExpr &a, const SeriesExpr &b)
{
    return SeriesExpr::op(SeriesExpr::Kind::sub, {a, b});
}

SeriesExpr operator*(const SeriesExpr &a, const SeriesExpr &b)
{
    std::vector<SeriesExpr> children;
    for (const auto *x : {&a, &b}) {
        if (x->kind() == SeriesExpr::Kind::mul) {
            children.insert(children.end(), x->children().begin(), x->children().end());
        } else {
            children.push_back(*x);
        }
    }
    return SeriesExpr::op(SeriesExpr::Kind::mul, std::move(children));
}

SeriesExpr operator*(const CycNum &c, const SeriesExpr &a)
{
    return constant_expr(c) * a;
}

SeriesExpr pow(const SeriesExpr &a, long k)
{
    return SeriesExpr::op(SeriesExpr::Kind::pow, {a}, k);
}

SeriesExpr inv(const SeriesExpr &a)
{
    return SeriesExpr::op(SeriesExpr::Kind::inv, {a});
}

namespace
{

std::string wrap(const SeriesExpr &e)
{
    const auto k = e.kind();
    const bool atomic = e.is_leaf() || k == SeriesExpr::Kind::pow || k == SeriesExpr::Kind::inv;
    return atomic ? to_string(e) : "(" + to_string(e) + ")";
}

std::string counting_text(const CountingLeaf &c)
{
    std::string ex = c.alpha == 1 ? "n" : std::to_string(c.alpha) + "n";
    if (c.beta != 0) {
        ex += (c.beta > 0 ? "+" : "") + std::to_string(c.beta);
    }
    if (c.D != 1) {
        ex = "(" + ex + ")/" + std::to_string(c.D);
    }
    return "sum " + to_string(c.family) + "(n) q^(" + ex + ")";
}

} // namespace

std::string to_string(const SeriesExpr &e)
{
    using K = SeriesExpr::Kind;
    const auto &n = e.node();
    switch (n.kind) {
    case K::theta:
        return to_string(std::get<ThetaSpec>(n.payload));
    case K::eta:
        return "eta{" + to_string(std::get<EtaQuotient>(n.payload)) + "}";
    case K::qproduct:
        return to_string(std::get<QProduct>(n.payload));
    case K::counting:
        return counting_text(std::get<CountingLeaf>(n.payload));
    case K::quadratic:
        return to_string(std::get<QuadraticSum>(n.payload));
    case K::constant:
        return std::get<ConstantLeaf>(n.payload).label;
    case K::add:
        return to_string(n.children[0]) + " + " + to_string(n.children[1]);
    case K::sub: {
        const auto &b = n.children[1];
        const bool paren = b.kind() == K::add || b.kind() == K::sub;
        return to_string(n.children[0]) + " - " + (paren ? "(" + to_string(b) + ")" : to_string(b));
    }
    case K::mul: {
        std::string out;
        for (const auto &c : n.children) {
            out += (out.empty() ? "" : " * ") + wrap(c);
        }
        return out;
    }
    case K::pow:
        return wrap(n.children[0]) + "^" + std::to_string(n.exponent);
    case K::inv:
        return "1/" + wrap(n.children[0]);
    }
    return {};
}

namespace
{

class Evaluator
{
public:
    PuiseuxSeries eval(const SeriesExpr &e, const Rational &T)
    {
        using K = SeriesExpr::Kind;
        const auto &n = e.node();
        if (e.is_leaf()) {
            return leaf(e, T);
        }
        switch (n.kind) {
        case K::add:
            return ps_add(eval(n.children[0], T), eval(n.children[1], T)).truncated(T);
        case K::sub:
            return ps_sub(eval(n.children[0], T), eval(n.children[1], T)).truncated(T);
        case K::mul:
            return product(n.children, T);
        case K::pow:
            return power(n.children[0], n.exponent, T);
        case K::inv:
            return power(n.children[0], -1, T);
        default:
            break;
        }
        throw DomainError("malformed expression");
    }

    // Lower bound for the valuation of e.
    Rational lower(const SeriesExpr &e)
    {
        using K = SeriesExpr::Kind;
        const auto &n = e.node();
        if (auto it = lower_.find(&n); it != lower_.end()) {
            return it->second;
        }
        Rational v(0);
        switch (n.kind) {
        case K::theta:
            v = theta_valuation_bound(std::get<ThetaSpec>(n.payload));
            break;
        case K::eta:
            v = eta_valuation(std::get<EtaQuotient>(n.payload));
            break;
        case K::qproduct:
            v = std::get<QProduct>(n.payload).shift;
            break;
        case K::counting: {
            const auto &c = std::get<CountingLeaf>(n.payload);
            const bool divisor = c.family.kind == CountKind::d || c.family.kind == CountKind::d_star;
            v = rat(c.alpha * (divisor ? 1 : 0) + c.beta, c.D);
            break;
        }
        case K::quadratic: {
            const auto &s = std::get<QuadraticSum>(n.payload);
            const long top = std::max(s.n_min, -s.b / (2 * s.a) + 2);
            v = rat(s.a * s.n_min * s.n_min + s.b * s.n_min + s.c, s.D);
            for (long k = s.n_min; k <= top; ++k) {
                v = std::min(v, rat(s.a * k * k + s.b * k + s.c, s.D));
            }
            break;
        }
        case K::constant:
            break;
        case K::add:
        case K::sub:
            v = std::min(lower(n.children[0]), lower(n.children[1]));
            break;
        case K::mul:
            for (const auto &c : n.children) {
                v += lower(c);
            }
            break;
        case K::pow:
            v = n.exponent >= 0 ? Rational(n.exponent * lower(n.children[0]))
                                : Rational(n.exponent * exact_valuation(n.children[0]));
            break;
        case K::inv:
            v = -exact_valuation(n.children[0]);
            break;
        }
        lower_.emplace(&n, v);
        return v;
    }

    // The valuation itself, found by evaluating to increasing orders.
    Rational exact_valuation(const SeriesExpr &e)
    {
        const auto &n = e.node();
        if (auto it = exact_.find(&n); it != exact_.end()) {
            return it->second;
        }
        const Rational lo = lower(e);
        for (long step = 1; step <= 64; step *= 2) {
            const auto s = eval(e, lo + step);
            if (!s.empty()) {
                const Rational v = *s.valuation();
                exact_.emplace(&n, v);
                return v;
            }
            if (s.is_exact()) {
                break;
            }
        }
        throw ZeroSeries("cannot invert " + to_string(e) + ": it vanishes to the probed order");
    }

private:
    PuiseuxSeries leaf(const SeriesExpr &e, const Rational &T)
    {
        using K = SeriesExpr::Kind;
        const auto &n = e.node();
        if (n.kind == K::constant) {
            return PuiseuxSeries::constant(std::get<ConstantLeaf>(n.payload).value).truncated(T);
        }
        if (T <= lower(e)) {
            return PuiseuxSeries::zero(T);
        }
        const std::string key = std::to_string(static_cast<int>(n.kind)) + ":" + to_string(e);
        if (auto it = cache_.find(key); it != cache_.end() && it->second.trunc() && *it->second.trunc() >= T) {
            return it->second.truncated(T);
        }
        PuiseuxSeries s;
        switch (n.kind) {
        case K::theta:
            s = theta_series(std::get<ThetaSpec>(n.payload), T);
            break;
        case K::eta:
            s = eta_quotient_series(std::get<EtaQuotient>(n.payload), T);
            break;
        case K::qproduct:
            s = q_product_series(std::get<QProduct>(n.payload), T);
            break;
        case K::counting: {
            const auto &c = std::get<CountingLeaf>(n.payload);
            s = generating_series(c.family, c.D, c.alpha, c.beta, T);
            break;
        }
        case K::quadratic:
            s = quadratic_sum_series(std::get<QuadraticSum>(n.payload), T);
            break;
        default:
            throw DomainError("not a leaf");
        }
        s = s.truncated(T);
        cache_.insert_or_assign(key, s);
        return s;
    }

    PuiseuxSeries product(const std::vector<SeriesExpr> &factors, const Rational &T)
    {
        std::vector<Rational> v;
        Rational total(0);
        for (const auto &f : factors) {
            v.push_back(lower(f));
            total += v.back();
        }
        if (T <= total) {
            return PuiseuxSeries::zero(T);
        }
        std::vector<PuiseuxSeries> parts;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            parts.push_back(eval(factors[i], T - (total - v[i])));
        }
        std::vector<std::size_t> idx(parts.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return parts[a].size() < parts[b].size(); });
        Rational rest = total - v[idx[0]];
        PuiseuxSeries acc = parts[idx[0]];
        for (std::size_t j = 1; j < idx.size(); ++j) {
            rest -= v[idx[j]];
            acc = ps_mul(acc, parts[idx[j]]).truncated(T - rest);
        }
        return acc.truncated(T);
    }

    PuiseuxSeries power(const SeriesExpr &base, long k, const Rational &T)
    {
        if (k == 0) {
            return PuiseuxSeries::constant(CycNum(1)).truncated(T);
        }
        if (k > 0) {
            const Rational v = lower(base);
            if (T <= k * v) {
                return PuiseuxSeries::zero(T);
            }
            return ps_pow(eval(base, T - (k - 1) * v), k, T);
        }
        const Rational v = exact_valuation(base);
        if (T <= k * v) {
            return PuiseuxSeries::zero(T);
        }
        return ps_pow(eval(base, T + (1 - k) * v), k, T);
    }

    std::map<std::string, PuiseuxSeries> cache_;
    std::map<const SeriesExpr::Node *, Rational> lower_;
    std::map<const SeriesExpr::Node *, Rational> exact_;
};

} // namespace

PuiseuxSeries evaluate(const SeriesExpr &e, const Rational &T)
{
    if (T <= 0) {
        throw DomainError("evaluation order must be positive");
    }
    Evaluator ev;
    return ev.eval(e, T).truncated(T);
}

namespace
{

Rational r(const char *text)
{
    return parse_rational(text);
}

SeriesExpr th(const char *e, const char *ep, long m = 1)
{
    return theta_expr(r(e), r(ep), m);
}

SeriesExpr dth(const char *e, const char *ep)
{
    return theta_deriv_expr(r(e), r(ep));
}

SeriesExpr num(long n, long d = 1)
{
    return constant_expr(CycNum(rat(n, d)));
}

// coeff * zeta_L^j.
SeriesExpr zc(unsigned long L, long j, const Rational &coeff = 1)
{
    const CycNum value = CycNum(coeff) * zeta(L, j);
    std::string label = "z" + std::to_string(L) + (j == 1 ? "" : "^" + std::to_string(j));
    if (coeff == -1) {
        label = "-" + label;
    } else if (coeff != 1) {
        label = coeff.get_str() + "*" + label;
    }
    return constant_expr(value, label);
}

SeriesExpr sqrt2()
{
    return constant_expr(zeta(8, 1) + zeta(8, 7), "sqrt2");
}

SeriesExpr cnt(CountKind kind, long p, long q)
{
    return counting_expr({kind, p, q});
}

const std::string kPiI = "theta' written as pi i Theta; the factor pi i is divided out";
const std::string kCleared = kPiI + "; denominators cleared";

class Builder
{
public:
    explicit Builder(std::vector<Identity> &out) : out(out) {}

    void add(std::string id, SeriesExpr lhs, SeriesExpr rhs, int level, std::string source, std::string notes = {})
    {
        const Rational order = level == 5 ? Rational(20) : Rational(30);
        out.push_back({std::move(id), std::move(lhs), std::move(rhs), level, order, std::move(source),
                       std::move(notes)});
    }

    std::vector<Identity> &out;
};

void jacobi_and_lemma(Builder &b)
{
    b.add("s1-jacobi", dth("1", "1"), zc(4, 1) * th("0", "0") * th("1", "0") * th("0", "1"), 2,
          "Jacobi's derivative formula", kPiI);

    const auto fk = [&](std::string id, Rational e, Rational ep, Rational d, Rational dp, std::string source) {
        auto lhs = theta_expr(e, ep) * theta_expr(d, dp);
        auto rhs = theta_expr((e + d) / 2, ep + dp, 2) * theta_expr((e - d) / 2, ep - dp, 2) +
                   theta_expr((e + d) / 2 + 1, ep + dp, 2) * theta_expr((e - d) / 2 + 1, ep - dp, 2);
        b.add(std::move(id), lhs, rhs, 2, std::move(source));
    };
    fk("s2-lem2.1-a", 0, 0, 0, 0, "product of two theta constants at 2 tau, (0,0) x (0,0)");
    const std::vector<std::array<const char *, 4>> samples = {
        {"1/2", "0", "1/2", "1"},     {"1/3", "1/3", "2/3", "1"}, {"0", "1/2", "1", "1/2"},
        {"1/5", "3/5", "3/5", "1/5"}, {"1", "1/3", "0", "2/3"},   {"1/4", "3/4", "3/4", "1/4"},
        {"2/3", "0", "0", "1/3"},     {"1/2", "1/2", "1/2", "3/2"}, {"1", "1/2", "1/3", "0"},
        {"3/2", "1/3", "1/6", "5/4"},
    };
    int k = 0;
    for (const auto &s : samples) {
        ++k;
        fk("s2-lem2.1-r" + std::string(k < 10 ? "0" : "") + std::to_string(k), r(s[0]), r(s[1]), r(s[2]), r(s[3]),
           "product formula for [" + std::string(s[0]) + ";" + s[1] + "] x [" + s[2] + ";" + s[3] + "]");
    }
}

void level4(Builder &b)
{
    const auto d11 = dth("1", "1");
    b.add("s3-thm3.1-a", dth("1", "1/2") * pow(th("1", "1/2"), 3), num(1, 4) * d11 * pow(th("1", "0"), 3), 4,
          "derivative formula for (1,1/2), first equality", kCleared);
    b.add("s3-thm3.1-b", dth("1", "1/2"), zc(4, 1) * pow(th("0", "0", 2), 2) * th("1", "1/2"), 4,
          "derivative formula for (1,1/2), product form", kPiI);
    b.add("s3-thm3.1-c", dth("0", "1/2") * pow(th("0", "1/2"), 3), num(1, 4) * d11 * pow(th("1", "0"), 3), 4,
          "derivative formula for (0,1/2), first equality", kCleared);
    b.add("s3-thm3.1-d", dth("0", "1/2"), zc(4, 1) * pow(th("1", "0", 2), 2) * th("0", "1/2"), 4,
          "derivative formula for (0,1/2), product form", kPiI);
    b.add("s3-thm3.2-a", dth("1/2", "1") * pow(th("1/2", "1"), 3), zc(4, 1, rat(1, 4)) * d11 * pow(th("0", "1"), 3),
          4, "derivative formula for (1/2,1)", kCleared);
    b.add("s3-thm3.2-b", dth("1/2", "0") * pow(th("1/2", "0"), 3), zc(4, 3, rat(1, 4)) * d11 * pow(th("0", "1"), 3),
          4, "derivative formula for (1/2,0)", kCleared);
    b.add("s3-thm3.3-a", dth("1/2", "1/2") * pow(th("1/2", "1/2"), 3), num(1, 4) * d11 * pow(th("0", "0"), 3), 4,
          "derivative formula for (1/2,1/2)", kCleared);
    b.add("s3-thm3.3-b", dth("1/2", "3/2") * pow(th("1/2", "3/2"), 3), num(-1, 4) * d11 * pow(th("0", "0"), 3), 4,
          "derivative formula for (1/2,3/2)", kCleared);
}

void level5(Builder &b)
{
    const auto d11 = dth("1", "1");
    // Theta_A / A = K Theta11 (A^5 + a1 B^5) / (10 A^3 B^3) and
    // Theta_B / B = K Theta11 (3 A^5 + a2 B^5) / (10 A^3 B^3).
    const auto pair = [&](const std::string &thm, const char *a1e, const char *a1p, const char *b1e,
                          const char *b1p, SeriesExpr K, SeriesExpr a1, SeriesExpr a2) {
        const auto A = th(a1e, a1p);
        const auto B = th(b1e, b1p);
        const auto den = num(10) * pow(A, 3) * pow(B, 3);
        const std::string ca = std::string("(") + a1e + "," + a1p + ")";
        const std::string cb = std::string("(") + b1e + "," + b1p + ")";
        b.add("s4-" + thm + "-a", dth(a1e, a1p) * den, K * d11 * (pow(A, 5) + a1 * pow(B, 5)) * A, 5,
              "log-derivative formula for " + ca, kCleared);
        b.add("s4-" + thm + "-b", dth(b1e, b1p) * den, K * d11 * (num(3) * pow(A, 5) + a2 * pow(B, 5)) * B, 5,
              "log-derivative formula for " + cb, kCleared);
    };
    pair("thm4.1", "1/5", "1/5", "3/5", "3/5", num(1), zc(5, 4, -3), zc(5, 4));
    pair("thm4.2", "1/5", "3/5", "3/5", "9/5", num(-1), zc(5, 2, -3), zc(5, 2));
    pair("thm4.3", "1/5", "1", "3/5", "1", zc(5, 3, -1), num(3), num(-1));
    pair("thm4.5", "1/5", "7/5", "3/5", "1/5", zc(5, 1, -1), zc(5, 3, -3), zc(5, 3));
    pair("thm4.6", "1/5", "9/5", "3/5", "7/5", zc(5, 1), zc(5, 1, -3), zc(5, 1));
    pair("thm4.7", "1", "1/5", "1", "3/5", num(1), num(-3), num(1));

    const auto A = th("1/5", "1");
    const auto B = th("3/5", "1");
    const auto dA = dth("1/5", "1");
    const auto dB = dth("3/5", "1");
    b.add("s4-thm4.3-c", num(3) * dA * pow(A, 2) * B - dB * pow(A, 3), zc(5, 3, -1) * d11 * pow(B, 3), 5,
          "residue relation 3 Theta_A/A - Theta_B/B for (1/5,1), (3/5,1)", kCleared);
    b.add("s4-thm4.3-d", dA * pow(B, 3) + num(3) * dB * A * pow(B, 2), zc(5, 3, -1) * d11 * pow(A, 3), 5,
          "residue relation Theta_A/A + 3 Theta_B/B for (1/5,1), (3/5,1)", kCleared);

    const auto d15 = cnt(CountKind::d, 1, 5) - cnt(CountKind::d, 4, 5);
    const auto d25 = cnt(CountKind::d, 2, 5) - cnt(CountKind::d, 3, 5);
    b.add("s4-cor4.4-a", qproduct_expr({1, {{1, 0, 2}, {5, 2, -5}, {5, 3, -5}}}), d15 - num(3) * d25, 5,
          "product-series identity from (1/5,1), (3/5,1), first display");
    b.add("s4-cor4.4-b", qproduct_expr({0, {{1, 0, 2}, {5, 1, -5}, {5, 4, -5}}}), num(1) + num(3) * d15 + d25, 5,
          "product-series identity from (1/5,1), (3/5,1), second display");
}

void level6(Builder &b)
{
    const auto d11 = dth("1", "1");
    const auto third = num(1, 3);
    const auto mthird = num(-1, 3);
    const auto simple = [&](std::string id, const char *e, const char *ep, SeriesExpr other, SeriesExpr c,
                            SeriesExpr cube) {
        b.add(std::move(id), dth(e, ep) * pow(th(e, ep), 2) * other, c * d11 * pow(cube, 3), 6,
              std::string("derivative formula for (") + e + "," + ep + ")", kCleared);
    };
    simple("s5-thm5.1-a", "0", "1/3", th("0", "1"), third, th("1", "1/3"));
    simple("s5-thm5.1-b", "0", "2/3", th("0", "0"), third, th("1", "1/3"));

    QuadraticSum km;
    km.D = 3;
    km.alternating = km.times_n = km.legendre = true;
    QuadraticSum km_plain = km;
    km_plain.alternating = false;
    QuadraticSum odd24;
    odd24.D = 24;
    odd24.times_n = odd24.legendre = odd24.odd_only = true;

    const auto ds = [](long j, long k) { return cnt(CountKind::d_star, j, k); };
    const auto dd = [](long j, long k) { return cnt(CountKind::d, j, k); };
    b.add("s5-cor5.2-a", eta_expr(parse_eta_quotient("2^5 * 1^-2")), quadratic_expr(km), 6,
          "eta quotient with signed sum over n^2/3");
    b.add("s5-cor5.2-b", eta_expr(parse_eta_quotient("1 * 6^6 * 2^-2 * 3^-3")), ds(1, 3) - ds(2, 3), 6,
          "eta quotient with d* counts modulo 3");
    b.add("s5-cor5.3-a", eta_expr(parse_eta_quotient("1^2 * 4^2 * 2^-1")), quadratic_expr(km_plain), 6,
          "eta quotient with sum of n (n/3) over n^2/3");
    b.add("s5-cor5.3-b", eta_expr(parse_eta_quotient("2 * 3^3 * 12^3 * 1^-1 * 4^-1 * 6^-3")),
          ds(1, 6) + ds(2, 6) - ds(4, 6) - ds(5, 6), 6, "eta quotient with d* counts modulo 6");

    simple("s5-thm5.4-a", "1/3", "0", th("1", "0"), mthird, th("1/3", "1"));
    simple("s5-thm5.4-b", "1/3", "2/3", th("1", "0"), mthird, th("1/3", "5/3"));
    simple("s5-thm5.4-c", "1/3", "4/3", th("1", "0"), third, th("1/3", "1/3"));
    b.add("s5-cor5.5", eta_expr(parse_eta_quotient("1^5 * 2^-2")), quadratic_expr(odd24), 6,
          "eta quotient with odd n sum over n^2/24");

    simple("s5-thm5.6-a", "2/3", "0", th("0", "0"), mthird, th("1/3", "1"));
    simple("s5-thm5.6-b", "2/3", "1", th("0", "1"), third, th("1/3", "1"));
    b.add("s5-cor5.7-a", eta_expr(parse_eta_quotient("2^5 * 1^-2")), quadratic_expr(km), 6,
          "eta quotient from (2/3,1) with signed sum over n^2/3");
    b.add("s5-cor5.7-b", eta_expr(parse_eta_quotient("2^6 * 3 * 1^-3 * 6^-2")), num(1) + num(3) * (dd(1, 6) - dd(5, 6)),
          6, "eta quotient with d counts modulo 6");

    simple("s5-thm5.8-a", "2/3", "1/3", th("0", "1"), mthird, th("1/3", "5/3"));
    simple("s5-thm5.8-b", "2/3", "5/3", th("0", "1"), mthird, th("1/3", "1/3"));
    simple("s5-thm5.9-a", "2/3", "2/3", th("0", "0"), third, th("1/3", "1/3"));
    simple("s5-thm5.9-b", "2/3", "4/3", th("0", "0"), third, th("1/3", "5/3"));
    simple("s5-thm5.10", "1", "2/3", th("1", "0"), third, th("1", "1/3"));
}

void level3(Builder &b)
{
    const auto d11 = dth("1", "1");
    const auto t00 = th("0", "0");
    const auto t01 = th("0", "1");
    const auto t10 = th("1", "0");
    const auto i = zc(4, 1);
    // Theta_A / A = c1 Theta11 A^3 / (P C^3) + c2 Theta11 P E F / (Q R A C), with P the theta in
    // the first denominator and Q R the remaining pair; also the pi-form after Jacobi.
    const auto formula = [&](const std::string &thm, const char *ae, const char *ap, const char *ce, const char *cp,
                             const char *ee, const char *ep, const char *fe, const char *fp, SeriesExpr P,
                             SeriesExpr Q, SeriesExpr R, SeriesExpr c1, SeriesExpr c2, SeriesExpr c1i,
                             SeriesExpr c2i) {
        const auto A = th(ae, ap);
        const auto C = th(ce, cp);
        const auto E = th(ee, ep);
        const auto F = th(fe, fp);
        const auto dA = dth(ae, ap);
        const std::string label = std::string("(") + ae + "," + ap + ")";
        b.add("s6-" + thm + "-a", dA * P * pow(C, 3) * Q * R,
              c1 * d11 * pow(A, 4) * Q * R + c2 * d11 * pow(P, 2) * E * F * pow(C, 2), 3,
              "log-derivative formula for " + label + ", first equality", kCleared);
        b.add("s6-" + thm + "-b", dA * pow(C, 3), c1i * Q * R * pow(A, 4) + c2i * pow(P, 2) * E * F * pow(C, 2), 3,
              "log-derivative formula for " + label + ", pi form", kCleared);
    };
    const auto z3 = [](long j, const Rational &c = 1) { return zc(3, j, c); };
    const auto iz3 = [&](long j, const Rational &c) {
        const CycNum v = CycNum(c) * zeta(4, 1) * zeta(3, j);
        return constant_expr(v, (c == 1 ? "" : c == -1 ? "-" : c.get_str() + "*") + std::string("z4*z3") +
                                    (j == 1 ? "" : "^" + std::to_string(j)));
    };
    formula("thm6.1", "1/3", "1/3", "2/3", "5/3", "1/3", "4/3", "2/3", "2/3", t01, t00, t10, num(1, 3), z3(1, -1),
            zc(4, 1, rat(1, 3)), iz3(1, -1));
    formula("thm6.3", "1/3", "1", "2/3", "1", "1/3", "0", "2/3", "0", t01, t00, t10, num(-1, 3), num(1),
            zc(4, 1, rat(-1, 3)), i);
    formula("thm6.5", "1/3", "5/3", "2/3", "1/3", "1/3", "2/3", "2/3", "4/3", t01, t00, t10, num(1, 3), z3(2),
            zc(4, 1, rat(1, 3)), iz3(2, 1));
    formula("thm6.7", "1", "1/3", "1", "2/3", "0", "1/3", "0", "2/3", t10, t00, t01, num(-1, 3), num(1),
            zc(4, 1, rat(-1, 3)), i);

    const auto sq = [](SeriesExpr x) { return pow(x, 2); };
    b.add("s6-thm6.2", sq(th("1/3", "1/3")) * sq(th("1/3", "4/3")) + z3(2) * sq(th("2/3", "2/3")) * sq(th("2/3", "5/3")),
          sq(t00) * t01 * th("2/3", "5/3"), 3, "theta constant identity attached to (1/3,1/3)");
    b.add("s6-thm6.4", sq(th("1/3", "0")) * sq(th("1/3", "1")) + z3(1) * sq(th("2/3", "0")) * sq(th("2/3", "1")),
          sq(t00) * t01 * th("2/3", "1"), 3, "theta constant identity attached to (1/3,1)");
    b.add("s6-thm6.6", sq(th("1/3", "2/3")) * sq(th("1/3", "5/3")) + z3(2) * sq(th("2/3", "1/3")) * sq(th("2/3", "4/3")),
          z3(1) * sq(t00) * t01 * th("2/3", "1/3"), 3, "theta constant identity attached to (1/3,5/3)");
    b.add("s6-thm6.8", sq(th("1", "1/3")) * sq(th("0", "2/3")),
          sq(th("0", "1/3")) * sq(th("1", "2/3")) + sq(t01) * t10 * th("1", "2/3"), 3,
          "theta constant identity attached to (1,1/3)");
}

void level8(Builder &b)
{
    const auto d11 = dth("1", "1");
    const auto H3 = pow(th("1", "1/2"), 3);
    const auto pair = [&](const std::string &thm, const char *e, SeriesExpr s1, SeriesExpr s2) {
        const auto A = th(e, "1/4");
        const auto B = th(e, "3/4");
        const auto den = num(8) * pow(A, 3) * pow(B, 3);
        const std::string c = std::string("(") + e + ",";
        b.add("s7-" + thm + "-a", dth(e, "1/4") * den, d11 * H3 * (pow(A, 2) + s1 * pow(B, 2)) * A, 8,
              "log-derivative formula for " + c + "1/4)", kCleared);
        b.add("s7-" + thm + "-b", dth(e, "3/4") * den, d11 * H3 * (num(3) * pow(A, 2) + s2 * pow(B, 2)) * B, 8,
              "log-derivative formula for " + c + "3/4)", kCleared);
    };
    pair("thm7.1", "0", num(3), num(1));
    pair("thm7.2", "1", num(-3), num(-1));

    b.add("s7-lem7.4", th("0", "0"), th("0", "0", 4) + th("1", "0", 4), 8,
          "theta[0;0] split into even and odd squares");

    const auto S12 = CountFamily{CountKind::S_ab, 1, 2};
    b.add("s7-thm7.3-series", counting_expr({CountKind::S2}, 2, 1, 0),
          counting_expr({CountKind::S2}, 2, 2, 0) + counting_expr({CountKind::T2}, 2, 4, 1), 8,
          "sum S2(n) x^n split along x^{2n} and x^{4n+1}, x = q^{1/2}");
    b.add("s7-thm7.5-series", counting_expr(S12, 2, 1, 0),
          counting_expr(S12, 2, 4, 0) + counting_expr({CountKind::M_ab, 1, 4}, 2, 4, 2) +
              counting_expr({CountKind::M_ab, 1, 1}, 2, 8, 1) + counting_expr({CountKind::T_ab, 1, 2}, 2, 8, 3),
          8, "sum S12(n) x^n split along x^{4n}, x^{4n+2}, x^{8n+1}, x^{8n+3}, x = q^{1/2}");

    const auto A = th("0", "1/4");
    const auto B = th("0", "3/4");
    const auto dA = dth("0", "1/4");
    const auto dB = dth("0", "3/4");
    const auto t10_4 = th("1", "0", 4);
    const auto t00_2 = th("0", "0", 2);
    const auto i = zc(4, 1);
    b.add("s7-prop7.6-a", dA * B - dB * A, zc(4, 1, -2) * pow(t10_4, 2) * A * B, 8,
          "difference of the log-derivatives for (0,1/4), (0,3/4)", kCleared);
    b.add("s7-prop7.6-b", dA * B + dB * A, num(2) * sqrt2() * i * t10_4 * t00_2 * A * B, 8,
          "sum of the log-derivatives for (0,1/4), (0,3/4)", kCleared + "; sqrt2 = z8 + z8^7");
    b.add("s7-thm7.7-a", dA, i * A * t10_4 * (sqrt2() * t00_2 - t10_4), 8, "product form for (0,1/4)",
          kPiI + "; sqrt2 = z8 + z8^7");
    b.add("s7-thm7.7-b", dB, i * B * t10_4 * (sqrt2() * t00_2 + t10_4), 8, "product form for (0,3/4)",
          kPiI + "; sqrt2 = z8 + z8^7");
}

std::vector<Identity> build_registry()
{
    std::vector<Identity> out;
    Builder b(out);
    jacobi_and_lemma(b);
    level4(b);
    level5(b);
    level6(b);
    level3(b);
    level8(b);
    return out;
}

std::vector<Identity> build_printed()
{
    std::vector<Identity> out;
    Builder b(out);
    const auto d11 = dth("1", "1");
    const auto A = th("1/5", "3/5");
    const auto B = th("3/5", "9/5");
    const auto den = num(10) * pow(A, 3) * pow(B, 3);
    const std::string note = kCleared + "; constants as displayed, registry entry has the verified ones";
    b.add("s4-thm4.2-a-printed", dth("1/5", "3/5") * den, num(-1) * d11 * (pow(A, 5) + zc(5, 1, 3) * pow(B, 5)) * A,
          5, "log-derivative formula for (1/5,3/5) with the displayed +3 z5", note);
    b.add("s4-thm4.2-b-printed", dth("3/5", "9/5") * den,
          num(-1) * d11 * (num(3) * pow(A, 5) + zc(5, 1, -1) * pow(B, 5)) * B, 5,
          "log-derivative formula for (3/5,9/5) with the displayed -z5", note);
    b.add("s5-thm5.8-b-printed", dth("2/3", "5/3") * pow(th("2/3", "5/3"), 2) * th("0", "1"),
          num(1, 3) * d11 * pow(th("1/3", "1/3"), 3), 6, "derivative formula for (2/3,5/3) with the displayed +1/3",
          note);
    return out;
}

} // namespace

const std::vector<Identity> &registry()
{
    static const std::vector<Identity> entries = build_registry();
    return entries;
}

const std::vector<Identity> &printed_variants()
{
    static const std::vector<Identity> entries = build_printed();
    return entries;
}

const Identity &find_identity(const std::string &id)
{
    for (const auto *list : {&registry(), &printed_variants()}) {
        for (const auto &e : *list) {
            if (e.id == id) {
                return e;
            }
        }
    }
    throw UnknownIdentity("unknown identity: " + id);
}

bool is_count_relation(const std::string &id)
{
    const auto ids = count_relation_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

VerificationReport verify(const Identity &identity, std::optional<Rational> order)
{
    VerificationReport rep;
    rep.id = identity.id;
    rep.order = order.value_or(identity.default_order);
    if (rep.order <= 0) {
        throw DomainError("verification order must be positive");
    }
    const auto start = std::chrono::steady_clock::now();
    try {
        Evaluator ev;
        const auto lhs = ev.eval(identity.lhs, rep.order);
        const auto rhs = ev.eval(identity.rhs, rep.order);
        const auto cmp = ps_equal_to_order(lhs, rhs, rep.order);
        rep.passed = cmp.equal;
        rep.mismatch = cmp.first_mismatch;
    } catch (const Error &e) {
        rep.passed = false;
        rep.error = e.what();
    }
    rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

VerificationReport verify(const std::string &id, std::optional<Rational> order)
{
    return verify(find_identity(id), std::move(order));
}

std::vector<VerificationReport> verify_all(std::optional<Rational> order, std::optional<int> level, unsigned jobs)
{
    if (order && *order <= 0) {
        throw DomainError("verification order must be positive");
    }
    std::vector<const Identity *> selected;
    for (const auto &e : registry()) {
        if (!level || e.level == *level) {
            selected.push_back(&e);
        }
    }
    std::vector<VerificationReport> out(selected.size());
    if (jobs == 0) {
        jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(selected.size(), 1)));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i; (i = next++) < selected.size();) {
            out[i] = verify(*selected[i], order);
        }
    };
    if (jobs <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    return out;
}

namespace
{

SeriesExpr negate_first_constant(const SeriesExpr &e, bool &done)
{
    if (done) {
        return e;
    }
    const auto &n = e.node();
    if (n.kind == SeriesExpr::Kind::constant) {
        const auto &c = std::get<ConstantLeaf>(n.payload);
        done = true;
        return constant_expr(-c.value, "-(" + c.label + ")");
    }
    if (e.is_leaf()) {
        return e;
    }
    std::vector<SeriesExpr> kids;
    for (const auto &c : n.children) {
        kids.push_back(negate_first_constant(c, done));
    }
    return SeriesExpr::op(n.kind, std::move(kids), n.exponent);
}

} // namespace

Identity corrupt_constant(const Identity &identity)
{
    Identity out = identity;
    out.id += "-corrupted";
    bool done = false;
    out.rhs = negate_first_constant(identity.rhs, done);
    if (!done) {
        out.lhs = negate_first_constant(identity.lhs, done);
    }
    if (!done) {
        out.rhs = num(2) * identity.rhs;
    }
    return out;
}

} // namespace thetaq
