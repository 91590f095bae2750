#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <thetaq/embed.hpp>
#include <thetaq/errors.hpp>
#include <thetaq/theta.hpp>

namespace thetaq
{

struct EvalParams {
    std::complex<double> tau;
    // Working precision in decimal digits: up to 15 runs in double, up to 33 in quad
    // precision, up to 50 and up to 100 in software binary floating point; more is a DomainError.
    int digits = 30;
    double tail_tolerance = 1e-25;
};

// theta[eps;eps'](z, tau) summed over all n whose term bound exceeds tol, or the
// z-derivative when derivative is set. Consecutive terms are produced by multiplying with
// a ratio that is itself updated by exp(2 pi i tau), so only three exponentials are taken.
template <class Real>
Complex<Real> theta_value(const Characteristic &c, const Complex<Real> &z, const Complex<Real> &tau, const Real &tol,
                          bool derivative)
{
    using C = Complex<Real>;
    using std::abs;
    using std::ceil;
    using std::exp;
    using std::floor;
    using std::log;
    using std::sqrt;
    const Real y = tau.imag();
    if (!(y > 0)) {
        throw NonconvergentTau("tau must lie in the upper half plane");
    }
    const Real pi = boost::math::constants::pi<Real>();
    const Real e = to_real<Real>(c.eps);
    const C w = z + C(to_real<Real>(c.eps_prime) / 2);
    // |term| <= exp(-pi y t^2 + 2 pi |t| |Im w|) with t = n + eps/2.
    const Real b = 2 * pi * abs(Real(w.imag()));
    const Real L = log(Real(1) / tol) + log(Real(8));
    const Real tstar = (b + sqrt(b * b + 4 * pi * y * L)) / (2 * pi * y) + 1;
    const long lo = static_cast<long>(ceil(Real(-tstar - e / 2)));
    const long hi = static_cast<long>(floor(Real(tstar - e / 2)));
    const C I(Real(0), Real(1));
    Real t = Real(lo) + e / 2;
    const Real two(2);
    C term = exp(I * pi * (tau * t * t + two * t * w));
    C ratio = exp(I * pi * (tau * (two * t + 1) + two * w));
    const C Q = exp(2 * pi * I * tau);
    C sum(Real(0));
    for (long n = lo; n <= hi; ++n) {
        sum += derivative ? C(term * (2 * pi * I * t)) : term;
        term *= ratio;
        ratio *= Q;
        t += 1;
    }
    return sum;
}

std::complex<double> theta_eval(const Characteristic &c, std::complex<double> z, const EvalParams &p);
// d/dz theta[eps;eps'](z, tau).
std::complex<double> theta_deriv_eval(const Characteristic &c, std::complex<double> z, const EvalParams &p);
// |theta(z + n + m tau) - exp{2 pi i [(n eps - m eps')/2 - m z - m^2 tau/2]} theta(z)|.
double quasi_periodicity_check(const Characteristic &c, std::complex<double> z, long m, long n, const EvalParams &p);
// |theta[eps;eps'](z + (n + m tau)/2) - exp{2 pi i [-m z/2 - m^2 tau/8 - m(eps' + n)/4]} theta[eps+m;eps'+n](z)|.
double half_period_shift_check(const Characteristic &c, std::complex<double> z, const Rational &m, const Rational &n,
                               const EvalParams &p);

// prod theta[num_i](z)^{p_i} / prod theta[den_j](z)^{q_j}.
struct EllipticRatio {
    std::vector<std::pair<Characteristic, int>> numerator;
    std::vector<std::pair<Characteristic, int>> denominator;
};

// Throws DomainError unless every power is positive and the total powers agree.
void validate(const EllipticRatio &f);
// Degree balance plus the conditions making the multipliers under z -> z + 1 and
// z -> z + tau trivial: sum eps and sum eps' agree modulo 2 between top and bottom.
bool is_elliptic(const EllipticRatio &f);
std::string to_string(const EllipticRatio &f);

std::complex<double> ratio_eval(const EllipticRatio &f, std::complex<double> z, const EvalParams &p);

// A pole at z = a tau + b modulo the period lattice, a, b in [0, 1).
struct Pole {
    Rational a;
    Rational b;
    int order;
};

// Zeros of the denominator not cancelled by zeros of the numerator.
std::vector<Pole> poles(const EllipticRatio &f);
// The representative of a tau + b inside the cell offset + [0,1) + [0,1) tau.
std::complex<double> pole_point(const Rational &a, const Rational &b, std::complex<double> tau,
                                std::complex<double> offset);
std::complex<double> default_offset(std::complex<double> tau);

// (1 / 2 pi i) times the integral of f around the parallelogram offset + {0, 1, 1 + tau, tau},
// by adaptive Gauss-Kronrod quadrature on each edge. Throws PoleOnContour when a zero of
// the denominator lies within 0.01 min(1, Im tau) of the boundary.
std::complex<double> residue_sum(const EllipticRatio &f, const EvalParams &p, std::complex<double> offset);
// Tries default_offset and then three shifted offsets.
std::complex<double> residue_sum(const EllipticRatio &f, const EvalParams &p);
// (1 / 2 pi i) times the integral over a circle around pt of radius below a third of the
// distance to every other zero of the numerator or denominator.
std::complex<double> residue_at(const EllipticRatio &f, std::complex<double> pt, const EvalParams &p);

// theta[chr](0)^power, or theta'[chr](0)^power when derivative is set.
struct ThetaPower {
    Characteristic chr;
    bool derivative = false;
    int power = 1;
};

struct ResidueTerm {
    CycNum coeff;
    std::vector<ThetaPower> factors;
};

// Closed form for the residue at z = a tau + b, a sum of monomials in theta constants.
struct DisplayedResidue {
    Rational a;
    Rational b;
    std::vector<ResidueTerm> terms;
};

struct ProofRatio {
    std::string id;
    EllipticRatio f;
    std::string source;
    // Pole list as stated next to the function (empty when none is stated), z = a tau + b.
    std::vector<std::pair<Rational, Rational>> stated_poles;
    std::vector<DisplayedResidue> residues;
};

const std::vector<ProofRatio> &proof_ratios();
// Throws UnknownIdentity.
const ProofRatio &find_proof(const std::string &id);

std::complex<double> displayed_value(const DisplayedResidue &r, const EvalParams &p);
// Human-readable differences between the stated and the computed pole classes.
std::vector<std::string> pole_discrepancies(const ProofRatio &r);

struct ResidueComparison {
    Rational a;
    Rational b;
    std::complex<double> numeric;
    std::complex<double> displayed;
    double rel_error = 0;
};

struct ResidueCheck {
    std::string id;
    std::complex<double> tau;
    std::complex<double> sum;
    std::vector<ResidueComparison> residues;
    std::vector<std::string> discrepancies;
    bool passed = false;
};

// Residue sum below sum_tol and every displayed residue within rel_tol.
ResidueCheck residue_check(const ProofRatio &r, const EvalParams &p, double sum_tol = 1e-8, double rel_tol = 1e-7);

// "a+bi", "a-bi", "a", "bi", "i", with optional spaces.
std::complex<double> parse_complex(const std::string &text);
std::string to_string(std::complex<double> z);

} // namespace thetaq
