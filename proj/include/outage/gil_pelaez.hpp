#ifndef OUTAGE_GIL_PELAEZ_HPP
#define OUTAGE_GIL_PELAEZ_HPP

// Characteristic-function inversion of the complementary CDF,
//
//   Q(w) = Pr(V > w) = 1/2 + (1/pi) int_0^inf Im{ e^{K(ju) - j u w} } du/u,
//
// with K the plus-convention CGF, so e^{K(ju)} is the characteristic
// function. The integrand tends to k1 - w as u -> 0. Panels double in
// width for w = 0 and follow the zeros of the shifted phase (width
// pi/|w|) otherwise; integration stops once the amplitude envelope
// |e^{K(ju)}|/u falls below abs_tol and panel contributions are
// negligible. The reported error estimate is floored at abs_tol: the
// panel scheme cannot certify more than its own stopping tolerance, and
// values within a decade of that floor are flagged unstable.

#include <cmath>
#include <complex>

#include "outage/cgf.hpp"
#include "outage/errors.hpp"
#include "outage/quadrature.hpp"

namespace outage {

struct InversionSettings {
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;
    int max_panels = 1 << 14;
    double tail_cut = 0.0;  // 0 = derive from abs_tol via the amplitude envelope
};

struct InversionResult {
    double value = 0.0;
    double err_est = 0.0;
    bool unstable = false;
    int panels = 0;
};

inline InversionResult gil_pelaez_ccdf(const CgfModel& cgf, double omega,
                                       const InversionSettings& s = {}) {
    const double pi = 3.14159265358979323846;
    const double kappa1 = cgf.cumulant(1);
    const double kappa2 = cgf.cumulant(2);
    const double u_scale = 1.0 / std::sqrt(kappa2);

    auto integrand = [&](double u) -> double {
        if (u < 1e-12 * u_scale) return kappa1 - omega;
        std::complex<double> z = cgf.char_exponent(u);
        z -= std::complex<double>(0.0, u * omega);
        return std::imag(std::exp(z)) / u;
    };
    auto amplitude = [&](double u) { return std::exp(std::real(cgf.char_exponent(u))) / u; };

    QuadratureSettings qs;
    qs.abs_tol = s.abs_tol / 16.0;
    qs.rel_tol = 1e-10;

    const bool doubling = omega == 0.0;
    const double width0 = doubling ? 0.5 * u_scale : pi / std::fabs(omega);

    double acc = 0.0;
    double err = 0.0;
    double lo = 0.0;
    double width = width0;
    int quiet = 0;
    int panels = 0;
    bool done = false;

    for (; panels < s.max_panels; ++panels) {
        double hi = lo + width;
        auto panel = integrate(integrand, lo, hi, qs);
        acc += panel.value;
        err += panel.err_est;

        double amp = amplitude(hi);
        bool tail_ok = s.tail_cut > 0.0 ? (hi >= s.tail_cut) : (amp < s.abs_tol);
        bool small = std::fabs(panel.value) <
                     0.25 * std::max(s.abs_tol, s.rel_tol * std::fabs(acc));
        quiet = small ? quiet + 1 : 0;
        if (tail_ok && quiet >= 2) {
            err += amp;  // crude bound on the discarded tail
            done = true;
            ++panels;
            break;
        }
        lo = hi;
        if (doubling) width *= 2.0;
    }

    double value = 0.5 + acc / pi;
    if (!done) {
        throw NumericalError("gil_pelaez_ccdf: panel budget exhausted", value, err / pi);
    }

    InversionResult out;
    out.value = value;
    out.err_est = std::max(err / pi, s.abs_tol);
    out.unstable = std::fabs(out.value) < 10.0 * out.err_est;
    out.panels = panels;
    return out;
}

}  // namespace outage

#endif  // OUTAGE_GIL_PELAEZ_HPP
