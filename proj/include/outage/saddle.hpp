#ifndef OUTAGE_SADDLE_HPP
#define OUTAGE_SADDLE_HPP

// Saddle point machinery. The saddle t_hat solves K'(t_hat) = x inside
// the convergence strip; K' is strictly increasing there, so a Newton
// iteration safeguarded by a maintained bracket always converges. The
// derived quantities consumed by every SPA variant are collected into
// SaddleInfo:
//   c   = K(t_hat) - x t_hat   (never positive; zero only at x = E[X])
//   k2..k4 = K''..K'''' at t_hat
//   eta = k3^2 / k2^3,  rho = k4 / k2^2.
//
// The analytic saddles of the compound models are kept alongside for
// cross-validation of the numeric solver.

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "outage/cgf.hpp"
#include "outage/errors.hpp"

namespace outage {

struct SaddleInfo {
    double t_hat = 0.0;
    double x = 0.0;
    double c = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    double k4 = 0.0;
    double eta = 0.0;
    double rho = 0.0;
    int iterations = 0;
};

// Second-order initial approximation t ~ (x - k1)/k2.
inline double initial_saddle_guess(double x, double kappa1, double kappa2) {
    if (!(kappa2 > 0.0)) throw DomainError("initial_saddle_guess: kappa2 must be positive");
    return (x - kappa1) / kappa2;
}

namespace detail {

inline SaddleInfo fill_saddle(const CgfModel& cgf, double t, double x, int iterations) {
    SaddleInfo s;
    s.t_hat = t;
    s.x = x;
    s.c = cgf.value(t) - x * t;
    s.k2 = cgf.derivative(2, t);
    s.k3 = cgf.derivative(3, t);
    s.k4 = cgf.derivative(4, t);
    s.eta = s.k3 * s.k3 / (s.k2 * s.k2 * s.k2);
    s.rho = s.k4 / (s.k2 * s.k2);
    s.iterations = iterations;
    return s;
}

// Step from t toward a strip edge: geometric in the gap for a finite
// edge, geometric in the step size otherwise.
inline double probe_toward(double t, double edge, double& step) {
    if (std::isfinite(edge)) {
        return edge - 0.25 * (edge - t);
    }
    double next = t + step;
    step *= 4.0;
    return next;
}

}  // namespace detail

// Solve K'(t_hat) = x. `init` overrides the default second-order
// initialization (used by tests that probe specific starting points).
inline SaddleInfo solve_saddle(const CgfModel& cgf, double x,
                               std::optional<double> init = std::nullopt) {
    const ConvergenceStrip strip = cgf.strip();
    const double kappa1 = cgf.cumulant(1);
    if (x == kappa1) {
        // Degenerate saddle at the mean.
        return detail::fill_saddle(cgf, 0.0, x, 0);
    }
    const double kappa2 = cgf.cumulant(2);

    auto fprime = [&](double t) { return cgf.derivative(1, t) - x; };

    double t0 = init.value_or(initial_saddle_guess(x, kappa1, kappa2));
    if (!(t0 > strip.lo && t0 < strip.hi)) {
        // Pull an out-of-strip start most of the way toward the offending edge.
        if (t0 >= strip.hi) {
            t0 = std::isfinite(strip.lo) ? strip.lo + 0.99 * (strip.hi - strip.lo)
                                         : strip.hi - std::max(1.0, 0.01 * std::fabs(strip.hi));
        } else {
            t0 = std::isfinite(strip.hi) ? strip.hi - 0.99 * (strip.hi - strip.lo)
                                         : strip.lo + std::max(1.0, 0.01 * std::fabs(strip.lo));
        }
    }

    // Establish a sign-changing bracket [b_lo, b_hi] by geometric probing.
    double b_lo = t0, b_hi = t0;
    double f_lo = fprime(t0), f_hi = f_lo;
    double step = std::max(std::fabs(t0), 1.0 / std::sqrt(kappa2)) * 0.5;
    const int max_probes = 400;

    int probes = 0;
    while (f_hi < 0.0 && probes++ < max_probes) {
        double next = detail::probe_toward(b_hi, strip.hi, step);
        if (!std::isfinite(next)) break;
        if (std::isfinite(strip.hi) &&
            strip.hi - next <= 1e-14 * std::max(1.0, std::fabs(strip.hi))) {
            break;
        }
        b_lo = b_hi;
        f_lo = f_hi;
        b_hi = next;
        f_hi = fprime(next);
    }
    step = std::max(std::fabs(t0), 1.0 / std::sqrt(kappa2)) * 0.5;
    while (f_lo > 0.0 && probes++ < max_probes) {
        double next = -detail::probe_toward(-b_lo, -strip.lo, step);
        if (!std::isfinite(next)) break;
        if (std::isfinite(strip.lo) &&
            next - strip.lo <= 1e-14 * std::max(1.0, std::fabs(strip.lo))) {
            break;
        }
        b_hi = b_lo;
        f_hi = f_lo;
        b_lo = next;
        f_lo = fprime(next);
    }
    if (!(f_lo <= 0.0 && f_hi >= 0.0)) {
        std::ostringstream os;
        os << "solve_saddle: x=" << x << " outside the attainable range of K' ("
           << (f_lo + x) << ", " << (f_hi + x) << ")";
        throw RangeError(os.str(), f_lo + x, f_hi + x);
    }

    // Safeguarded Newton on K'(t) - x with K'' as the slope.
    const double f_tol = std::max(1e-12, 1e-10 * std::fabs(x));
    double t = 0.5 * (b_lo + b_hi);
    if (t0 > b_lo && t0 < b_hi) t = t0;
    const int max_iter = 200;
    for (int it = 1; it <= max_iter; ++it) {
        double f = fprime(t);
        if (std::fabs(f) <= f_tol) {
            return detail::fill_saddle(cgf, t, x, it);
        }
        if (f > 0.0) {
            b_hi = t;
        } else {
            b_lo = t;
        }
        double slope = cgf.derivative(2, t);
        double next = t - f / slope;
        if (!(next > b_lo && next < b_hi) || !std::isfinite(next)) {
            next = 0.5 * (b_lo + b_hi);
        }
        if (b_hi - b_lo <= 8.0 * std::numeric_limits<double>::epsilon() *
                               std::max(1.0, std::fabs(t))) {
            return detail::fill_saddle(cgf, next, x, it);
        }
        t = next;
    }
    throw ConvergenceError("solve_saddle: iteration cap reached");
}

// Analytic saddle (internal sign) for Poisson aggregation with
// Gamma(m_f, r_f) gains: signal count ~ Poisson(lam1), interference
// count ~ Poisson(lam2). With zeta = (theta lam2 / lam1)^{1/(m_f+1)}
// the source value is r_f (zeta - 1)/(zeta + theta), negated here for
// the plus convention. The lam2 = 0 branch returns -r_f, the stated
// no-interferer limit; the exact saddle diverges there, so the value is
// a formal placeholder only.
inline double analytic_saddle_poisson_nakagami(double lam1, double lam2, double theta,
                                               const GainLaw& gain) {
    if (!(lam1 > 0.0) || lam2 < 0.0) throw DomainError("analytic saddle: need lam1 > 0, lam2 >= 0");
    gain.validate();
    if (lam2 == 0.0) return -gain.r_f;
    double zeta = std::pow(theta * lam2 / lam1, 1.0 / (gain.m_f + 1.0));
    return -gain.r_f * (zeta - 1.0) / (zeta + theta);
}

// Residual of the binomial-aggregation saddle equation at internal t,
// with w = -t/r_f, p = prob, q = 1 - p, m = m_f:
//
//   p^2 (1 + theta w)^{m+1} + p q [(1 - theta) + 2 theta w]
//     - theta q^2 (1 - w)^{m+1} = 0.
//
// This is the K'_Omega(t) = 0 condition of the compound-binomial model
// cleared of denominators. (The middle and last coefficients differ
// from some published forms, which reduce to this one at theta = 1;
// only this version agrees with the model CGF and the Rayleigh
// closed form for general theta.)
inline double binomial_saddle_residual(double t, int count, double prob, double theta,
                                       const GainLaw& gain) {
    (void)count;  // the saddle does not depend on L
    gain.validate();
    double p = prob, q = 1.0 - prob;
    double w = -t / gain.r_f;
    double m = gain.m_f;
    return p * p * std::pow(1.0 + theta * w, m + 1.0) +
           p * q * ((1.0 - theta) + 2.0 * theta * w) -
           theta * q * q * std::pow(1.0 - w, m + 1.0);
}

// Closed-form binomial saddle for Rayleigh fading (m_f = 1), internal
// sign. The quadratic degenerates when theta p^2 = q^2 (the surviving
// root is the linear one).
inline double binomial_saddle_rayleigh(double prob, double theta, const GainLaw& gain) {
    double p = prob, q = 1.0 - prob;
    double beta = gain.r_f;
    double lead = theta * p * p - q * q;
    if (std::fabs(lead) < 1e-12 * (theta * p * p + q * q)) {
        return beta * (p - theta * q) / (2.0 * theta * (1.0 - p * q));
    }
    double num = -2.0 * beta * theta * (1.0 - p * q) +
                 2.0 * beta * std::sqrt(p * q * theta * (theta + q) * (1.0 + p * theta));
    double den = 2.0 * theta * lead;
    return -num / den;
}

// Second-order saddle approximation for the binomial model (internal
// sign); initialization quality only, no accuracy contract.
inline double approx_saddle_binomial(int count, double prob, double theta, const GainLaw& gain) {
    (void)count;
    gain.validate();
    double p = prob, q = 1.0 - prob;
    double m = gain.m_f;
    double denom = 1.0 - q * (1.0 - theta * theta - m * (theta * theta + 1.0) * (1.0 - q));
    return -gain.r_f * (p - theta * q) / denom;
}

enum class ThetaRegime { large_theta, small_theta };

namespace detail {

inline double approx_saddle_comp_ratio(ThetaRegime regime, double a, double R, double alpha_pl,
                                       double P, double theta, double moment_ratio) {
    double c = 2.0 * (alpha_pl - 1.0) / (alpha_pl - 2.0) * moment_ratio;
    if (regime == ThetaRegime::small_theta) {
        return c * std::pow(a, alpha_pl) / P;
    }
    return -c * std::pow(R, alpha_pl) / (theta * P);
}

}  // namespace detail

// Regime approximations of the COMP saddle (internal sign): for small
// theta the saddle sits near +C a^alpha / P on the signal side of the
// strip, for large theta near -C R^alpha/(theta P) on the interference
// side, C = 2(alpha-1)/(alpha-2) mu_1(G)/mu_2(G). Neither depends on
// the intensity. Initialization quality only.
inline double approx_saddle_comp(ThetaRegime regime, double a, double R, double alpha_pl,
                                 double P, double theta, const GainLaw& gain) {
    gain.validate();
    return detail::approx_saddle_comp_ratio(regime, a, R, alpha_pl, P, theta,
                                            gain.moment(1) / gain.moment(2));
}

// No-fading variant: unit deterministic gain, so the moment ratio is 1.
inline double approx_saddle_comp_nofading(ThetaRegime regime, double a, double R, double alpha_pl,
                                          double P, double theta) {
    return detail::approx_saddle_comp_ratio(regime, a, R, alpha_pl, P, theta, 1.0);
}

}  // namespace outage

#endif  // OUTAGE_SADDLE_HPP
