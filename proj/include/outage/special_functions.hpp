#ifndef OUTAGE_SPECIAL_FUNCTIONS_HPP
#define OUTAGE_SPECIAL_FUNCTIONS_HPP

// Scalar special functions backing the CGF models and the NIG base
// distribution: upper/lower/generalized incomplete gamma (the upper one
// also for negative non-integer order), the modified Bessel function
// K_1, and the standard normal density/CDF.
//
// Negative-order Gamma(a,z) is reduced with the downward recurrence
//   Gamma(a,z) = (Gamma(a+1,z) - z^a e^{-z}) / a
// until the order is positive, where the usual series / continued
// fraction pair applies. Direct quadrature of the defining integrals is
// kept out of here on purpose; the test suite uses it as the oracle.

#include <cmath>
#include <limits>
#include <string>

#include "outage/errors.hpp"
#include "outage/quadrature.hpp"

namespace outage {

inline double normal_pdf(double z) {
    static const double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * 0.7071067811865475244008444);
}

namespace detail {

inline bool near_nonpositive_integer(double a) {
    if (a > 0.0) return false;
    double r = std::fabs(a - std::round(a));
    return r < 1e-12 * std::max(1.0, std::fabs(a));
}

// Series for the lower incomplete gamma, a > 0, z < a + 1.
inline double gamma_lower_series(double a, double z) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        term *= z / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) {
            return sum * std::exp(a * std::log(z) - z);
        }
    }
    throw ConvergenceError("incomplete gamma series failed to converge");
}

// Modified Lentz continued fraction for the upper incomplete gamma,
// a > 0, z >= a + 1.
inline double gamma_upper_cf(double a, double z) {
    const double tiny = 1e-300;
    double b = z + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) {
            return h * std::exp(a * std::log(z) - z);
        }
    }
    throw ConvergenceError("incomplete gamma continued fraction failed to converge");
}

inline double gamma_upper_positive(double a, double z) {
    if (z < a + 1.0) {
        return std::tgamma(a) - gamma_lower_series(a, z);
    }
    return gamma_upper_cf(a, z);
}

}  // namespace detail

// Lower incomplete gamma gamma(a,z) = int_0^z x^{a-1} e^{-x} dx, a > 0.
inline double lower_inc_gamma(double a, double z) {
    if (!(a > 0.0)) throw DomainError("lower_inc_gamma: order must be positive");
    if (z < 0.0) throw DomainError("lower_inc_gamma: z must be nonnegative");
    if (z == 0.0) return 0.0;
    if (z < a + 1.0) return detail::gamma_lower_series(a, z);
    return std::tgamma(a) - detail::gamma_upper_cf(a, z);
}

// Upper incomplete gamma Gamma(a,z) = int_z^inf x^{a-1} e^{-x} dx.
// Negative non-integer orders are permitted for z > 0.
inline double upper_inc_gamma(double a, double z) {
    if (z < 0.0) throw DomainError("upper_inc_gamma: z must be nonnegative");
    if (z == 0.0) {
        if (a <= 0.0) throw DomainError("upper_inc_gamma: divergent at z=0 for a<=0");
        return std::tgamma(a);
    }
    if (a > 0.0) return detail::gamma_upper_positive(a, z);
    if (detail::near_nonpositive_integer(a)) {
        throw DomainError("upper_inc_gamma: non-positive integer order not supported");
    }
    // Reduce to positive order, then walk the recurrence back down.
    int k = static_cast<int>(std::floor(-a)) + 1;
    double g = detail::gamma_upper_positive(a + k, z);
    double log_z = std::log(z);
    for (int j = k - 1; j >= 0; --j) {
        double aj = a + j;
        g = (g - std::exp(aj * log_z - z)) / aj;
    }
    if (!std::isfinite(g)) {
        throw NumericalError("upper_inc_gamma: overflow in recurrence", g, std::numeric_limits<double>::infinity());
    }
    return g;
}

// Generalized incomplete gamma Gamma(a, z0, z1) = Gamma(a,z0) - Gamma(a,z1).
inline double generalized_inc_gamma(double a, double z0, double z1) {
    if (!(z0 > 0.0) || !(z1 > 0.0)) throw DomainError("generalized_inc_gamma: limits must be positive");
    if (z0 == z1) return 0.0;
    return upper_inc_gamma(a, z0) - upper_inc_gamma(a, z1);
}

// Complete gamma for possibly negative non-integer order.
inline double complete_gamma(double a) {
    if (detail::near_nonpositive_integer(a)) {
        throw DomainError("complete_gamma: pole at non-positive integer");
    }
    return std::tgamma(a);
}

// Exponentially scaled modified Bessel function e^x K_1(x), through the
// representation
//   K_1(x) = sqrt(pi/(2x)) e^{-x} / Gamma(3/2) * int_0^inf e^{-t} t^{1/2} (1 + t/(2x))^{1/2} dt,
// with t = s^2 to remove the sqrt kink at the origin. The integrand is
// positive and monotone-tailed, so the adaptive rule converges fast for
// the whole range of interest. The scaled form lets callers keep large
// exponents in log space.
inline double bessel_k1_scaled(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k1: x must be positive");
    const double upper = 9.6;  // e^{-s^2} below 1e-40 past here
    QuadratureSettings qs;
    qs.abs_tol = 1e-300;
    qs.rel_tol = 1e-13;
    auto integrand = [x](double s) {
        double t = s * s;
        return 2.0 * t * std::exp(-t) * std::sqrt(1.0 + t / (2.0 * x));
    };
    double integral = integrate_or_throw(integrand, 0.0, upper, qs, "bessel_k1");
    // sqrt(pi/(2x)) * (2/sqrt(pi)) = sqrt(2/x)
    double value = std::sqrt(2.0 / x) * integral;
    if (!std::isfinite(value)) {
        throw NumericalError("bessel_k1: non-finite result", value, std::numeric_limits<double>::infinity());
    }
    return value;
}

// Modified Bessel function of the second kind, order one. Underflows to
// zero for very large x.
inline double bessel_k1(double x) {
    return bessel_k1_scaled(x) * std::exp(-x);
}

}  // namespace outage

#endif  // OUTAGE_SPECIAL_FUNCTIONS_HPP
