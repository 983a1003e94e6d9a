#ifndef OUTAGE_PPP_HPP
#define OUTAGE_PPP_HPP

// CGF of Omega = theta*Y - X for the downlink COMP model: base stations
// form a homogeneous PPP of intensity lam; those in the annulus [a, R)
// jointly serve the user at the origin (signal X), those beyond R
// interfere (Y). Path loss P r^{-alpha} with alpha > 2; channel power
// gains are Gamma(m_f, r_f), or identically one in the no-fading case.
//
// In the plus convention,
//   K_Omega(t) = 2 pi lam [ int_a^R (E[e^{-t g P r^-alpha}] - 1) r dr
//                         + int_R^inf (E[e^{t theta g P r^-alpha}] - 1) r dr ].
// The infinite interference integral is mapped onto a finite interval
// with s = r^-alpha followed by s = sigma^2, which removes both the
// truncation heuristic and the endpoint singularity for alpha >= 2.
// Derivatives in t differentiate the integrand under the integral sign.
//
// The no-fading variant evaluates the interference side in closed form
// through incomplete gamma functions when t > 0; the signal side always
// uses real quadrature, since its closed form needs Gamma(a, -z), which
// is complex-valued.

#include <cmath>
#include <complex>
#include <memory>

#include "outage/cgf.hpp"
#include "outage/errors.hpp"
#include "outage/quadrature.hpp"
#include "outage/special_functions.hpp"

namespace outage {

struct PppCompParams {
    double lam = 1e-4;      // BS intensity per unit area
    double a = 30.0;        // exclusion radius, m
    double R = 150.0;       // cooperation radius, m
    double alpha_pl = 4.0;  // path-loss exponent, > 2
    double P = 1.0;         // transmit power, linear
    GainLaw gain;           // Nakagami-m power gain (fading variant)
    double theta = 1.0;     // SIR threshold, linear

    void validate() const {
        if (!(lam > 0.0)) throw DomainError("ppp: intensity must be positive");
        if (!(a > 0.0 && R > a)) throw DomainError("ppp: need 0 < a < R");
        if (!(alpha_pl > 2.0)) throw DomainError("ppp: path-loss exponent must exceed 2");
        if (!(P > 0.0)) throw DomainError("ppp: power must be positive");
        if (!(theta > 0.0)) throw DomainError("ppp: theta must be positive");
        gain.validate();
    }
};

namespace detail {

constexpr double kTwoPi = 6.283185307179586476925287;

// E[e^{sG}] - 1 for G ~ Gamma(m, r), s < r; expm1/log1p keep precision
// for small s.
inline double gamma_mgf_m1(double s, const GainLaw& g) {
    return std::expm1(-g.m_f * std::log1p(-s / g.r_f));
}

inline std::complex<double> gamma_mgf_m1_c(std::complex<double> s, const GainLaw& g) {
    return std::exp(-g.m_f * std::log(1.0 - s / g.r_f)) - 1.0;
}

// d^n/ds^n E[e^{sG}] = m (m+1) ... (m+n-1) / r^n * (1 - s/r)^{-m-n}.
inline double gamma_mgf_deriv(int n, double s, const GainLaw& g) {
    double rising = 1.0;
    for (int k = 0; k < n; ++k) rising *= g.m_f + k;
    return rising / std::pow(g.r_f, n) * std::pow(1.0 - s / g.r_f, -g.m_f - n);
}

class PppCompCgf final : public CgfBase {
  public:
    PppCompCgf(PppCompParams p, QuadratureSettings qs) : p_(p), qs_(qs) {
        p.validate();
        // The r-integrals carry scales as small as 1e-21 before the
        // 2 pi lam prefactor; the absolute tolerance is meaningful only
        // for the assembled CGF value, so refinement runs relative-only.
        qs_.abs_tol = 0.0;
    }

    double value(double t) const override {
        return pref() * (signal_integral(t) + interference_integral(t));
    }

    double derivative(int n, double t) const override {
        check_deriv_order(n);
        return pref() * (signal_deriv_integral(n, t) + interference_deriv_integral(n, t));
    }

    std::complex<double> char_exponent(double u) const override {
        const double alpha = p_.alpha_pl;
        const std::complex<double> j(0.0, 1.0);
        auto sig = integrate(
            [&](double r) {
                double c = p_.P * std::pow(r, -alpha);
                return gamma_mgf_m1_c(-j * (u * c), p_.gain) * r;
            },
            p_.a, p_.R, qs_);
        const double edge = std::pow(p_.R, -0.5 * alpha);
        auto interf = integrate(
            [&](double sigma) {
                double s = sigma * sigma;
                std::complex<double> h = gamma_mgf_m1_c(j * (u * p_.theta * p_.P * s), p_.gain);
                return h * sub_weight(sigma);
            },
            0.0, edge, qs_);
        return pref() * (sig.value + (2.0 / alpha) * interf.value);
    }

    ConvergenceStrip strip() const override {
        double hi = p_.gain.r_f * std::pow(p_.R, p_.alpha_pl) / (p_.theta * p_.P);
        double lo = -p_.gain.r_f * std::pow(p_.a, p_.alpha_pl) / p_.P;
        return {lo, hi};
    }

  private:
    double pref() const { return kTwoPi * p_.lam; }

    // sigma^{-4/alpha - 1} weight of the substituted interference integral.
    double sub_weight(double sigma) const {
        return std::pow(sigma, -4.0 / p_.alpha_pl - 1.0);
    }

    double signal_integral(double t) const {
        const double alpha = p_.alpha_pl;
        return integrate_or_throw(
            [&](double r) {
                double c = p_.P * std::pow(r, -alpha);
                return gamma_mgf_m1(-t * c, p_.gain) * r;
            },
            p_.a, p_.R, qs_, "ppp signal integral");
    }

    double interference_integral(double t) const {
        const double alpha = p_.alpha_pl;
        const double edge = std::pow(p_.R, -0.5 * alpha);
        double v = integrate_or_throw(
            [&](double sigma) {
                double s = sigma * sigma;
                return gamma_mgf_m1(t * p_.theta * p_.P * s, p_.gain) * sub_weight(sigma);
            },
            0.0, edge, qs_, "ppp interference integral");
        return (2.0 / alpha) * v;
    }

    double signal_deriv_integral(int n, double t) const {
        const double alpha = p_.alpha_pl;
        return integrate_or_throw(
            [&](double r) {
                double c = p_.P * std::pow(r, -alpha);
                double sign = (n % 2 == 0) ? 1.0 : -1.0;
                return sign * std::pow(c, n) * gamma_mgf_deriv(n, -t * c, p_.gain) * r;
            },
            p_.a, p_.R, qs_, "ppp signal derivative integral");
    }

    double interference_deriv_integral(int n, double t) const {
        const double alpha = p_.alpha_pl;
        const double edge = std::pow(p_.R, -0.5 * alpha);
        double v = integrate_or_throw(
            [&](double sigma) {
                double s = sigma * sigma;
                double c = p_.theta * p_.P * s;
                return std::pow(c, n) * gamma_mgf_deriv(n, t * c, p_.gain) * sub_weight(sigma);
            },
            0.0, edge, qs_, "ppp interference derivative integral");
        return (2.0 / alpha) * v;
    }

    PppCompParams p_;
    QuadratureSettings qs_;
};

}  // namespace detail

// Deterministic-gain interference integral over [R, inf) at decay-side
// argument s > 0, per unit intensity:
//   I(s) = int_R^inf (e^{-s theta P r^-alpha} - 1) r dr
//        = (s theta P)^{2/alpha} gammainc_lower(-2/alpha, s theta P R^-alpha)/alpha + R^2/2.
// Its m-th s-derivative bumps the gamma order by one each time:
//   I^(m)(s) = (-1)^m (1/alpha) (s theta P)^{2/alpha} s^{-m}
//              gammainc_lower(m - 2/alpha, s theta P R^-alpha).
inline double nofading_interference_closed(int m, double s, double R, double alpha_pl,
                                           double P, double theta) {
    double z = s * theta * P * std::pow(R, -alpha_pl);
    if (m == 0) {
        double glow = complete_gamma(-2.0 / alpha_pl) - upper_inc_gamma(-2.0 / alpha_pl, z);
        return std::pow(s * theta * P, 2.0 / alpha_pl) * glow / alpha_pl + 0.5 * R * R;
    }
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    double g = lower_inc_gamma(m - 2.0 / alpha_pl, z);
    return sign / alpha_pl * std::pow(s * theta * P, 2.0 / alpha_pl) * std::pow(s, -m) * g;
}

namespace detail {

class NoFadingCgf final : public CgfBase {
  public:
    NoFadingCgf(PppCompParams p, QuadratureSettings qs) : p_(p), qs_(qs) {
        p.validate();
        qs_.abs_tol = 0.0;  // see PppCompCgf: integral scales are far below any absolute floor
    }

    double value(double t) const override {
        return pref() * (signal_integral(t) + interference_value(t));
    }

    double derivative(int n, double t) const override {
        check_deriv_order(n);
        return pref() * (signal_deriv(n, t) + interference_deriv(n, t));
    }

    std::complex<double> char_exponent(double u) const override {
        const double alpha = p_.alpha_pl;
        const std::complex<double> j(0.0, 1.0);
        auto sig = integrate(
            [&](double r) {
                double c = p_.P * std::pow(r, -alpha);
                return (std::exp(-j * (u * c)) - 1.0) * r;
            },
            p_.a, p_.R, qs_);
        const double edge = std::pow(p_.R, -0.5 * alpha);
        auto interf = integrate(
            [&](double sigma) {
                double s = sigma * sigma;
                return (std::exp(j * (u * p_.theta * p_.P * s)) - 1.0) * sub_weight(sigma);
            },
            0.0, edge, qs_);
        return pref() * (sig.value + (2.0 / alpha) * interf.value);
    }

    ConvergenceStrip strip() const override {
        // The CGF is entire; these are overflow guards on exp arguments.
        double hi = 700.0 * std::pow(p_.R, p_.alpha_pl) / (p_.theta * p_.P);
        double lo = -700.0 * std::pow(p_.a, p_.alpha_pl) / p_.P;
        return {lo, hi};
    }

  private:
    double pref() const { return kTwoPi * p_.lam; }
    double sub_weight(double sigma) const { return std::pow(sigma, -4.0 / p_.alpha_pl - 1.0); }

    // Signal side K_X(-t): int_a^R (e^{-t P r^-alpha} - 1) r dr, always by
    // real quadrature (its closed form needs complex-argument Gamma).
    double signal_integral(double t) const {
        const double alpha = p_.alpha_pl;
        return integrate_or_throw(
            [&](double r) { return std::expm1(-t * p_.P * std::pow(r, -alpha)) * r; },
            p_.a, p_.R, qs_, "no-fading signal integral");
    }

    double signal_deriv(int n, double t) const {
        const double alpha = p_.alpha_pl;
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return sign * integrate_or_throw(
                          [&](double r) {
                              double c = p_.P * std::pow(r, -alpha);
                              return std::pow(c, n) * std::exp(-t * c) * r;
                          },
                          p_.a, p_.R, qs_, "no-fading signal derivative");
    }

    // Interference side K_Y(theta t): int_R^inf (e^{t theta P r^-alpha} - 1) r dr.
    double interference_quadrature(int n, double t) const {
        const double alpha = p_.alpha_pl;
        const double edge = std::pow(p_.R, -0.5 * alpha);
        double v = integrate_or_throw(
            [&](double sigma) {
                double s = sigma * sigma;
                double c = p_.theta * p_.P * s;
                double f = (n == 0) ? std::expm1(t * c) : std::pow(c, n) * std::exp(t * c);
                return f * sub_weight(sigma);
            },
            0.0, edge, qs_, "no-fading interference integral");
        return (2.0 / alpha) * v;
    }

    // The gamma closed form is real on the decay side t < 0 (there the
    // integrand is e^{-|t| theta P r^-alpha}); the growth side t >= 0 has
    // a tiny bounded exponent t theta P R^-alpha and integrates cheaply.
    // Near z = 0 the closed form cancels against R^2/2, so small |z|
    // also routes to quadrature.
    double interference_value(double t) const {
        double z = -t * p_.theta * p_.P * std::pow(p_.R, -p_.alpha_pl);
        if (!(z >= 0.05)) return interference_quadrature(0, t);
        return nofading_interference_closed(0, -t, p_.R, p_.alpha_pl, p_.P, p_.theta);
    }

    double interference_deriv(int n, double t) const {
        if (!(t < 0.0)) return interference_quadrature(n, t);
        // d^n/dt^n I(-t) = (-1)^n I^(n)(s) at s = -t.
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return sign * nofading_interference_closed(n, -t, p_.R, p_.alpha_pl, p_.P, p_.theta);
    }

    PppCompParams p_;
    QuadratureSettings qs_;
};

}  // namespace detail

inline CgfModel ppp_comp_cgf(const PppCompParams& p, const QuadratureSettings& qs = {}) {
    p.validate();
    return CgfModel(std::make_shared<detail::PppCompCgf>(p, qs));
}

inline CgfModel nofading_cgf(const PppCompParams& p, const QuadratureSettings& qs = {}) {
    p.validate();
    return CgfModel(std::make_shared<detail::NoFadingCgf>(p, qs));
}

// Limit cumulant (R/a -> inf):
//   k_n^lim = (-1)^n 2 pi lam mu_n(G) P^n a^{2 - n alpha} / (n alpha - 2).
inline double ppp_comp_cumulant_limit(int n, double lam, double a, double alpha_pl, double P,
                                      const GainLaw& gain) {
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * detail::kTwoPi * lam * gain.moment(n) * std::pow(P, n) *
           std::pow(a, 2.0 - n * alpha_pl) / (n * alpha_pl - 2.0);
}

// Exact n-th cumulant of Omega for the annulus geometry:
//   k_n = k_n^lim [1 + ((-theta)^n - 1) u^{2 - n alpha}],  u = R/a.
inline double ppp_comp_cumulant(int n, double lam, double a, double R, double alpha_pl, double P,
                                const GainLaw& gain, double theta) {
    double u = R / a;
    double bracket = 1.0 + (std::pow(-theta, n) - 1.0) * std::pow(u, 2.0 - n * alpha_pl);
    return ppp_comp_cumulant_limit(n, lam, a, alpha_pl, P, gain) * bracket;
}

struct SkewKurt {
    double skew2;
    double excess_kurtosis;
};

// Squared skewness and excess kurtosis of Omega in the a << R limit,
// computed as ratios of the limit cumulants. Both scale as 1/(lam a^2),
// so the law Gaussianizes as intensity or exclusion radius grow.
inline SkewKurt ppp_comp_skew_kurt(double lam, double a, double alpha_pl, const GainLaw& gain) {
    // R drops out of the limit; any R > a gives the same ratios.
    double k2 = ppp_comp_cumulant_limit(2, lam, a, alpha_pl, 1.0, gain);
    double k3 = ppp_comp_cumulant_limit(3, lam, a, alpha_pl, 1.0, gain);
    double k4 = ppp_comp_cumulant_limit(4, lam, a, alpha_pl, 1.0, gain);
    return {k3 * k3 / (k2 * k2 * k2), k4 / (k2 * k2)};
}

}  // namespace outage

#endif  // OUTAGE_PPP_HPP
