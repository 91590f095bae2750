#include <thetaq/numerics.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace thetaq
{

namespace
{

template <class Real> Complex<Real> lift(std::complex<double> z)
{
    return Complex<Real>(Real(z.real()), Real(z.imag()));
}

template <class Real> std::complex<double> lower(const Complex<Real> &z)
{
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

template <class F> auto with_precision(int digits, F &&f)
{
    if (digits <= 0) {
        throw DomainError("digits must be positive");
    }
    if (digits <= 15) {
        return f(double{});
    }
    if (digits <= 33) {
        return f(Real33{});
    }
    if (digits <= 50) {
        return f(Real50{});
    }
    if (digits <= 100) {
        return f(Real100{});
    }
    throw DomainError("at most 100 digits are supported");
}

void check_tau(std::complex<double> tau)
{
    if (!(tau.imag() > 0)) {
        throw NonconvergentTau("tau must lie in the upper half plane");
    }
}

template <class C> C ipow(const C &x, int k)
{
    C r(1);
    for (int i = 0; i < k; ++i) {
        r *= x;
    }
    return r;
}

template <class Real>
Complex<Real> ratio_value(const EllipticRatio &f, const Complex<Real> &z, const Complex<Real> &tau, const Real &tol)
{
    Complex<Real> num(Real(1)), den(Real(1));
    for (const auto &[c, k] : f.numerator) {
        num *= ipow(theta_value<Real>(c, z, tau, tol, false), k);
    }
    for (const auto &[c, k] : f.denominator) {
        den *= ipow(theta_value<Real>(c, z, tau, tol, false), k);
    }
    return num / den;
}

template <class Real> Real quadrature_tolerance(int digits)
{
    using std::pow;
    if constexpr (std::is_same_v<Real, double>) {
        return 1e-11;
    } else {
        return pow(Real(10), -std::min(digits - 5, 16));
    }
}

std::pair<Rational, Rational> zero_class(const Characteristic &c)
{
    const auto [a, b] = theta_zero_location(c);
    return {frac(a), frac(b)};
}

// Lattice translates near the fundamental cell of the zero classes of ratio factors.
std::vector<std::complex<double>> zero_points(const std::vector<std::pair<Characteristic, int>> &factors,
                                              std::complex<double> tau)
{
    std::vector<std::complex<double>> out;
    for (const auto &[c, k] : factors) {
        const auto [a, b] = zero_class(c);
        for (int i = -2; i <= 2; ++i) {
            for (int j = -2; j <= 2; ++j) {
                out.push_back((a.get_d() + i) * tau + (b.get_d() + j));
            }
        }
    }
    return out;
}

double segment_distance(std::complex<double> p, std::complex<double> a, std::complex<double> b)
{
    const auto d = b - a;
    const double t = std::clamp(((p - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

Characteristic ch(const char *e, const char *ep)
{
    return {parse_rational(e), parse_rational(ep)};
}

ThetaPower T(const Characteristic &c, int power = 1)
{
    return {c, false, power};
}

ThetaPower D(const Characteristic &c, int power = 1)
{
    return {c, true, power};
}

std::pair<Rational, Rational> at(const char *a, const char *b)
{
    return {parse_rational(a), parse_rational(b)};
}

std::vector<ProofRatio> build_proofs()
{
    const auto t11 = ch("1", "1");
    const auto t10 = ch("1", "0");
    const auto t01 = ch("0", "1");
    const auto t00 = ch("0", "0");
    std::vector<ProofRatio> out;

    const auto quarter = [&](std::string id, const Characteristic &c, const Characteristic &other,
                             std::string source) {
        out.push_back({std::move(id), {{{t11, 3}}, {{c, 2}, {other, 1}}}, std::move(source), {}, {}});
    };
    quarter("s3-thm3.1-phi", ch("1", "1/2"), t10, "auxiliary function for (1,1/2)");
    out.back().stated_poles = {at("0", "1/4"), at("0", "1/2")};
    out.back().residues = {
        {Rational(0), Rational(1, 4), {{CycNum(4), {T(ch("1", "1/2")), D(ch("1", "1/2")), D(t11, -2)}}}},
        {Rational(0), Rational(1, 2), {{CycNum(-1), {T(t10, 3), T(ch("1", "1/2"), -2), D(t11, -1)}}}},
    };
    quarter("s3-thm3.1-psi", ch("0", "1/2"), t10, "auxiliary function for (0,1/2)");
    quarter("s3-thm3.2-phi", ch("1/2", "1"), t01, "auxiliary function for (1/2,1)");
    quarter("s3-thm3.2-psi", ch("1/2", "0"), t01, "auxiliary function for (1/2,0)");
    quarter("s3-thm3.3-phi", ch("1/2", "1/2"), t00, "auxiliary function for (1/2,1/2)");
    quarter("s3-thm3.3-psi", ch("1/2", "3/2"), t00, "auxiliary function for (1/2,3/2)");

    {
        const auto A = ch("1/5", "1/5");
        const auto B = ch("3/5", "3/5");
        out.push_back({"s4-thm4.1-phi", {{{t11, 3}}, {{A, 2}, {B, 1}}}, "auxiliary function for (1/5,1/5)", {}, {}});
        out.back().stated_poles = {at("2/5", "2/5"), at("1/5", "1/5")};
        out.back().residues = {
            {Rational(2, 5),
             Rational(2, 5),
             {{CycNum(-3) * zeta(5, 3), {T(A, 2), D(A), D(t11, -2), T(B, -1)}},
              {zeta(5, 3), {T(A, 3), D(B), D(t11, -2), T(B, -2)}}}},
            {Rational(1, 5), Rational(1, 5), {{CycNum(-1) * zeta(5, 2), {T(B), D(t11, -1)}}}},
        };
        out.push_back({"s4-thm4.1-psi",
                       {{{t11, 3}}, {{B, 2}, {ch("-1/5", "-1/5"), 1}}},
                       "auxiliary function for (3/5,3/5)",
                       {},
                       {}});
    }

    // theta_A theta_C theta_P / (theta11^2 theta_Q) and its reciprocal.
    const auto sixth = [&](const std::string &thm, const Characteristic &A, const Characteristic &C,
                           const Characteristic &P, const Characteristic &Q, DisplayedResidue second,
                           const std::string &label) {
        ProofRatio phi{"s6-thm" + thm + "-phi",
                       {{{A, 1}, {C, 1}, {P, 1}}, {{t11, 2}, {Q, 1}}},
                       "auxiliary function for " + label,
                       {at("0", "0"), {second.a, second.b}},
                       {}};
        phi.residues = {{Rational(0),
                         Rational(0),
                         {{CycNum(1), {D(A), T(C), T(P), D(t11, -2), T(Q, -1)}},
                          {CycNum(1), {T(A), D(C), T(P), D(t11, -2), T(Q, -1)}}}},
                        std::move(second)};
        out.push_back(std::move(phi));
    };
    const auto reciprocal = [&](const std::string &id, const std::string &label) {
        const auto &phi = out.back();
        ProofRatio psi{id, {phi.f.denominator, phi.f.numerator}, "reciprocal auxiliary function for " + label, {}, {}};
        out.push_back(std::move(psi));
    };

    sixth("6.1", ch("1/3", "1/3"), ch("2/3", "5/3"), t00, t10,
          {Rational(0),
           Rational(1, 2),
           {{zeta(3, 1), {T(ch("1/3", "4/3")), T(ch("2/3", "2/3")), T(t01), T(t10, -2), D(t11, -1)}}}},
          "(1/3,1/3),(2/3,5/3)");
    reciprocal("s6-thm6.2-psi", "(1/3,1/3),(2/3,5/3)");
    out.back().stated_poles = {at("1/3", "1/3"), at("1/6", "-1/3"), at("1/2", "1/2")};
    out.back().residues = {
        {Rational(1, 3),
         Rational(1, 3),
         {{CycNum(-1) * zeta(3, 2),
           {T(ch("1/3", "1/3"), 2), T(ch("1/3", "4/3")), D(t11, -1), T(ch("2/3", "5/3"), -1),
            T(ch("2/3", "2/3"), -1)}}}},
        {Rational(1, 6),
         Rational(-1, 3),
         {{CycNum(-1) * zeta(3, 1), {T(ch("2/3", "5/3")), T(ch("2/3", "2/3")), D(t11, -1), T(ch("1/3", "4/3"), -1)}}}},
        {Rational(1, 2),
         Rational(1, 2),
         {{zeta(3, 2), {T(t00, 2), T(t01), D(t11, -1), T(ch("2/3", "2/3"), -1), T(ch("1/3", "4/3"), -1)}}}},
    };

    sixth("6.3", ch("1/3", "1"), ch("2/3", "1"), t00, t10,
          {Rational(0),
           Rational(1, 2),
           {{CycNum(-1), {T(ch("1/3", "0")), T(ch("2/3", "0")), T(t01), T(t10, -2), D(t11, -1)}}}},
          "(1/3,1),(2/3,1)");
    reciprocal("s6-thm6.4-psi", "(1/3,1),(2/3,1)");

    sixth("6.5", ch("1/3", "5/3"), ch("2/3", "1/3"), t00, t10,
          {Rational(0),
           Rational(1, 2),
           {{CycNum(-1) * zeta(3, 2), {T(ch("1/3", "2/3")), T(ch("2/3", "4/3")), T(t01), T(t10, -2), D(t11, -1)}}}},
          "(1/3,5/3),(2/3,1/3)");
    reciprocal("s6-thm6.6-psi", "(1/3,5/3),(2/3,1/3)");

    sixth("6.7", ch("1", "1/3"), ch("1", "2/3"), t01, t00,
          {Rational(1, 2),
           Rational(1, 2),
           {{CycNum(-1), {T(ch("0", "1/3")), T(ch("0", "2/3")), T(t10), T(t00, -2), D(t11, -1)}}}},
          "(1,1/3),(1,2/3)");
    reciprocal("s6-thm6.8-psi", "(1,1/3),(1,2/3)");
    return out;
}

std::string class_text(const Rational &a, const Rational &b)
{
    return to_string(a) + " tau + " + to_string(b);
}

} // namespace

std::complex<double> theta_eval(const Characteristic &c, std::complex<double> z, const EvalParams &p)
{
    check_tau(p.tau);
    return with_precision(p.digits, [&](auto x) {
        using R = decltype(x);
        return lower<R>(theta_value<R>(c, lift<R>(z), lift<R>(p.tau), R(p.tail_tolerance), false));
    });
}

std::complex<double> theta_deriv_eval(const Characteristic &c, std::complex<double> z, const EvalParams &p)
{
    check_tau(p.tau);
    return with_precision(p.digits, [&](auto x) {
        using R = decltype(x);
        return lower<R>(theta_value<R>(c, lift<R>(z), lift<R>(p.tau), R(p.tail_tolerance), true));
    });
}

double quasi_periodicity_check(const Characteristic &c, std::complex<double> z, long m, long n, const EvalParams &p)
{
    check_tau(p.tau);
    return with_precision(p.digits, [&](auto x) {
        using R = decltype(x);
        using C = Complex<R>;
        const C tau = lift<R>(p.tau);
        const C w = lift<R>(z);
        const R tol(p.tail_tolerance);
        const C moved = theta_value<R>(c, w + C(R(n)) + C(R(m)) * tau, tau, tol, false);
        const C here = theta_value<R>(c, w, tau, tol, false);
        const R pi = boost::math::constants::pi<R>();
        const C phase = (R(n) * to_real<R>(c.eps) - R(m) * to_real<R>(c.eps_prime)) / 2 - R(m) * w -
                        R(m) * R(m) * tau / R(2);
        using std::abs;
        using std::exp;
        return static_cast<double>(abs(C(moved - exp(2 * pi * C(R(0), R(1)) * phase) * here)));
    });
}

double half_period_shift_check(const Characteristic &c, std::complex<double> z, const Rational &m, const Rational &n,
                               const EvalParams &p)
{
    check_tau(p.tau);
    return with_precision(p.digits, [&](auto x) {
        using R = decltype(x);
        using C = Complex<R>;
        const C tau = lift<R>(p.tau);
        const C w = lift<R>(z);
        const R tol(p.tail_tolerance);
        const R rm = to_real<R>(m);
        const R rn = to_real<R>(n);
        const C moved = theta_value<R>(c, C(w + (C(rn) + rm * tau) / R(2)), tau, tol, false);
        const C other = theta_value<R>({c.eps + m, c.eps_prime + n}, w, tau, tol, false);
        const R pi = boost::math::constants::pi<R>();
        const C phase = -rm * w / R(2) - rm * rm * tau / R(8) - C(rm * (to_real<R>(c.eps_prime) + rn) / 4);
        using std::abs;
        using std::exp;
        return static_cast<double>(abs(C(moved - exp(2 * pi * C(R(0), R(1)) * phase) * other)));
    });
}

void validate(const EllipticRatio &f)
{
    long top = 0, bottom = 0;
    for (const auto &[c, k] : f.numerator) {
        if (k <= 0) {
            throw DomainError("ratio powers must be positive");
        }
        top += k;
    }
    for (const auto &[c, k] : f.denominator) {
        if (k <= 0) {
            throw DomainError("ratio powers must be positive");
        }
        bottom += k;
    }
    if (top != bottom) {
        throw DomainError("numerator and denominator degrees differ: " + std::to_string(top) + " vs " +
                          std::to_string(bottom));
    }
    if (f.denominator.empty()) {
        throw DomainError("ratio has no denominator");
    }
}

bool is_elliptic(const EllipticRatio &f)
{
    long top = 0, bottom = 0;
    Rational se, sep;
    for (const auto &[c, k] : f.numerator) {
        top += k;
        se += c.eps * k;
        sep += c.eps_prime * k;
    }
    for (const auto &[c, k] : f.denominator) {
        bottom += k;
        se -= c.eps * k;
        sep -= c.eps_prime * k;
    }
    const auto even = [](const Rational &r) { return r.get_den() == 1 && mpz_even_p(r.get_num_mpz_t()); };
    return top == bottom && even(se) && even(sep);
}

std::string to_string(const EllipticRatio &f)
{
    const auto side = [](const std::vector<std::pair<Characteristic, int>> &v) {
        std::string s;
        for (const auto &[c, k] : v) {
            if (!s.empty()) {
                s += " * ";
            }
            s += "theta" + to_string(c);
            if (k != 1) {
                s += "^" + std::to_string(k);
            }
        }
        return s.empty() ? std::string("1") : s;
    };
    return side(f.numerator) + " / (" + side(f.denominator) + ")";
}

std::complex<double> ratio_eval(const EllipticRatio &f, std::complex<double> z, const EvalParams &p)
{
    check_tau(p.tau);
    return with_precision(p.digits, [&](auto x) {
        using R = decltype(x);
        return lower<R>(ratio_value<R>(f, lift<R>(z), lift<R>(p.tau), R(p.tail_tolerance)));
    });
}

std::vector<Pole> poles(const EllipticRatio &f)
{
    std::map<std::pair<Rational, Rational>, int> order;
    for (const auto &[c, k] : f.denominator) {
        order[zero_class(c)] += k;
    }
    for (const auto &[c, k] : f.numerator) {
        order[zero_class(c)] -= k;
    }
    std::vector<Pole> out;
    for (const auto &[ab, k] : order) {
        if (k > 0) {
            out.push_back({ab.first, ab.second, k});
        }
    }
    return out;
}

std::complex<double> pole_point(const Rational &a, const Rational &b, std::complex<double> tau,
                                std::complex<double> offset)
{
    check_tau(tau);
    const double v = offset.imag() / tau.imag();
    const double u = offset.real() - v * tau.real();
    const auto wrap = [](double x) { return x - std::floor(x); };
    return (v + wrap(a.get_d() - v)) * tau + (u + wrap(b.get_d() - u));
}

std::complex<double> default_offset(std::complex<double> tau)
{
    return -(1.0 + tau) / 10.0;
}

std::complex<double> residue_sum(const EllipticRatio &f, const EvalParams &p, std::complex<double> offset)
{
    validate(f);
    check_tau(p.tau);
    const std::array<std::complex<double>, 5> corner{offset, offset + 1.0, offset + 1.0 + p.tau, offset + p.tau,
                                                     offset};
    const double guard = 0.01 * std::min(1.0, p.tau.imag());
    for (const auto &z : zero_points(f.denominator, p.tau)) {
        for (int i = 0; i < 4; ++i) {
            if (segment_distance(z, corner[i], corner[i + 1]) < guard) {
                throw PoleOnContour("denominator zero at " + to_string(z) + " lies on the contour");
            }
        }
    }
    return with_precision(p.digits, [&](auto x) {
        using R = decltype(x);
        using C = Complex<R>;
        const C tau = lift<R>(p.tau);
        const R tol(p.tail_tolerance);
        const R qtol = quadrature_tolerance<R>(p.digits);
        const C o = lift<R>(offset);
        const C one(R(1));
        const std::array<C, 5> c{o, C(o + one), C(o + one + tau), C(o + tau), o};
        C total(R(0));
        for (int i = 0; i < 4; ++i) {
            const C a = c[i];
            const C d = c[i + 1] - c[i];
            const auto g = [&](R s) { return C(ratio_value<R>(f, C(a + d * s), tau, tol) * d); };
            total += boost::math::quadrature::gauss_kronrod<R, 15>::integrate(g, R(0), R(1), 15, qtol);
        }
        const R pi = boost::math::constants::pi<R>();
        return lower<R>(C(total / (2 * pi * C(R(0), R(1)))));
    });
}

std::complex<double> residue_sum(const EllipticRatio &f, const EvalParams &p)
{
    const auto base = default_offset(p.tau);
    const std::array<std::complex<double>, 4> shifts{std::complex<double>(0), 0.0371 + 0.0213 * p.tau,
                                                     -0.0427 + 0.0313 * p.tau, 0.0293 - 0.0389 * p.tau};
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        try {
            return residue_sum(f, p, base + shifts[i]);
        } catch (const PoleOnContour &) {
            if (i + 1 == shifts.size()) {
                throw;
            }
        }
    }
    throw PoleOnContour("no admissible contour");
}

std::complex<double> residue_at(const EllipticRatio &f, std::complex<double> pt, const EvalParams &p)
{
    validate(f);
    check_tau(p.tau);
    auto points = zero_points(f.denominator, p.tau);
    const auto more = zero_points(f.numerator, p.tau);
    points.insert(points.end(), more.begin(), more.end());
    double nearest = 1.0;
    for (const auto &z : points) {
        const double d = std::abs(z - pt);
        if (d > 1e-9) {
            nearest = std::min(nearest, d);
        }
    }
    const double radius = std::min(0.3 * nearest, 0.25);
    return with_precision(p.digits, [&](auto x) {
        using R = decltype(x);
        using C = Complex<R>;
        using std::abs;
        const C tau = lift<R>(p.tau);
        const C centre = lift<R>(pt);
        const R tol(p.tail_tolerance);
        const R r(radius);
        const R target = quadrature_tolerance<R>(p.digits);
        const auto circle = [&](int n) {
            C acc(R(0));
            for (int k = 0; k < n; ++k) {
                const C step = C(r) * unit_root<R>(R(k) / R(n));
                acc += ratio_value<R>(f, C(centre + step), tau, tol) * step;
            }
            return C(acc / R(n));
        };
        C prev = circle(32);
        for (int n = 64; n <= 4096; n *= 2) {
            const C cur = circle(n);
            const R scale = std::max(R(1), R(abs(cur)));
            if (abs(C(cur - prev)) <= target * scale) {
                return lower<R>(cur);
            }
            prev = cur;
        }
        return lower<R>(prev);
    });
}

const std::vector<ProofRatio> &proof_ratios()
{
    static const std::vector<ProofRatio> all = build_proofs();
    return all;
}

const ProofRatio &find_proof(const std::string &id)
{
    for (const auto &r : proof_ratios()) {
        if (r.id == id) {
            return r;
        }
    }
    throw UnknownIdentity("unknown auxiliary function: " + id);
}

std::complex<double> displayed_value(const DisplayedResidue &r, const EvalParams &p)
{
    std::complex<double> total = 0;
    for (const auto &t : r.terms) {
        std::complex<double> v = embed(t.coeff);
        for (const auto &fac : t.factors) {
            const auto x = fac.derivative ? theta_deriv_eval(fac.chr, 0.0, p) : theta_eval(fac.chr, 0.0, p);
            v *= std::pow(x, fac.power);
        }
        total += v;
    }
    return total;
}

std::vector<std::string> pole_discrepancies(const ProofRatio &r)
{
    std::vector<std::string> out;
    if (r.stated_poles.empty()) {
        return out;
    }
    const auto computed = poles(r.f);
    std::vector<std::pair<Rational, Rational>> stated;
    for (const auto &[a, b] : r.stated_poles) {
        stated.emplace_back(frac(a), frac(b));
    }
    for (const auto &[a, b] : stated) {
        const bool found =
            std::any_of(computed.begin(), computed.end(), [&](const Pole &q) { return q.a == a && q.b == b; });
        if (!found) {
            out.push_back("stated pole " + class_text(a, b) + " is not a pole");
        }
    }
    for (const auto &q : computed) {
        if (std::find(stated.begin(), stated.end(), std::make_pair(q.a, q.b)) == stated.end()) {
            out.push_back("pole " + class_text(q.a, q.b) + " of order " + std::to_string(q.order) + " is not stated");
        }
    }
    return out;
}

ResidueCheck residue_check(const ProofRatio &r, const EvalParams &p, double sum_tol, double rel_tol)
{
    ResidueCheck out;
    out.id = r.id;
    out.tau = p.tau;
    out.sum = residue_sum(r.f, p);
    out.discrepancies = pole_discrepancies(r);
    bool ok = std::abs(out.sum) <= sum_tol;
    for (const auto &d : r.residues) {
        ResidueComparison c{d.a, d.b, {}, {}, 0};
        c.numeric = residue_at(r.f, d.a.get_d() * p.tau + d.b.get_d(), p);
        c.displayed = displayed_value(d, p);
        const double gap = std::abs(c.numeric - c.displayed);
        c.rel_error = std::abs(c.displayed) > 1e-12 ? gap / std::abs(c.displayed) : gap;
        ok = ok && c.rel_error <= rel_tol;
        out.residues.push_back(c);
    }
    out.passed = ok;
    return out;
}

std::complex<double> parse_complex(const std::string &text)
{
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s += c;
        }
    }
    if (s.empty()) {
        throw ParseError("empty complex number");
    }
    const auto number = [&](const std::string &part) {
        if (part.empty() || part == "+") {
            return 1.0;
        }
        if (part == "-") {
            return -1.0;
        }
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception &) {
            throw ParseError("bad complex number: " + text);
        }
        if (used != part.size()) {
            throw ParseError("bad complex number: " + text);
        }
        return v;
    };
    if (s.back() != 'i' && s.back() != 'I') {
        return {number(s), 0.0};
    }
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) {
        return {0.0, number(s)};
    }
    return {number(s.substr(0, split)), number(s.substr(split))};
}

std::string to_string(std::complex<double> z)
{
    std::ostringstream os;
    os << std::setprecision(15) << z.real() << (z.imag() < 0 || std::signbit(z.imag()) ? "-" : "+")
       << std::abs(z.imag()) << "i";
    return os.str();
}

} // namespace thetaq
