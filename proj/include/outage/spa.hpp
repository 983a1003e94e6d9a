#ifndef OUTAGE_SPA_HPP
#define OUTAGE_SPA_HPP

// Saddle point CDF approximation
//
//   F(x) ~ G(z_hat) + g(z_hat) [1/s_hat - 1/u_hat],
//   u_hat = t_hat sqrt(K''(t_hat) / L''(s_hat)),
//
// where (g, G, L) describe a base distribution whose Legendre-Fenchel
// geometry is matched to the target's at the saddle. Three bases are
// provided:
//
//   normal          s_hat = z_hat = sgn(t) sqrt(-2c), L'' = 1
//                   (the Lugannani-Rice formula)
//   asymmetric NIG  parameters from (c, eta, rho) moment matching;
//                   real only under  c < 0  and
//                   0 <= rho - (5/3) eta <= 3/|c|
//   symmetric NIG   v from the cubic 5v^3 - 5v^2 + (rho c/3 - 4)v + 4 = 0,
//                   needing v < -1 for c < 0; when the root misses, the
//                   stand-in v = -1.000001 keeps the formula usable
//
// spa_cdf chains asymmetric NIG -> symmetric NIG -> normal, advancing
// whenever a construction reports a violated condition, a degenerate c,
// or a non-finite intermediate. Saddles within t_eps of zero use the
// continuity limit F = 1/2 + k3 / (6 sqrt(2 pi) k2^{3/2}) of the normal
// base; the NIG bases defer to it as well.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "outage/cgf.hpp"
#include "outage/errors.hpp"
#include "outage/nig.hpp"
#include "outage/saddle.hpp"
#include "outage/special_functions.hpp"

namespace outage {

enum class BaseKind { normal, symmetric_nig, asymmetric_nig };

enum class BaseRequest { auto_chain, asymmetric_nig, symmetric_nig, normal };

inline const char* to_string(BaseKind k) {
    switch (k) {
        case BaseKind::normal: return "normal";
        case BaseKind::symmetric_nig: return "sym_nig";
        default: return "nig";
    }
}

struct ConditionReport {
    double c = 0.0;
    double eta = 0.0;
    double rho = 0.0;
    bool asym_checked = false;   // asymmetric-NIG validity conditions evaluated
    bool asym_ok = false;
    std::string violation;     // first failed inequality, if any
    bool has_v = false;        // cubic root computed
    double v = 0.0;
    bool v_substituted = false;
    bool near_mean = false;
};

struct SpaResult {
    double cdf = 0.0;   // clamped to [0,1]
    double raw = 0.0;   // unclamped combination-formula value
    BaseKind method_used = BaseKind::normal;
    bool fell_back = false;
    ConditionReport condition;
    double z_hat = 0.0;
    double s_hat = 0.0;
    double u_hat = 0.0;
};

// Evaluated base quantities at z_hat, ready for the combination formula.
struct BaseEval {
    double cdf_at_z = 0.0;  // G(z_hat)
    double pdf_at_z = 0.0;  // g(z_hat)
    double s_hat = 0.0;
    double lpp = 0.0;       // L''(s_hat)
    double z_hat = 0.0;
};

namespace detail {

inline double near_mean_threshold(double k2) { return 1e-6 / std::sqrt(k2); }

inline double near_mean_limit(const SaddleInfo& s) {
    static const double sqrt_2pi = 2.5066282746310005024158;
    return 0.5 + s.k3 / (6.0 * sqrt_2pi * std::pow(s.k2, 1.5));
}

inline double c_epsilon(const SaddleInfo& s) {
    double k_at_saddle = s.c + s.x * s.t_hat;
    return 1e-14 * std::max(1.0, std::fabs(k_at_saddle));
}

}  // namespace detail

// The (g, G)-base combination formula for an already evaluated base.
// Saddles inside the near-mean window return the continuity limit
// instead of the cancellative 1/s - 1/u difference.
inline double wbb_cdf(const SaddleInfo& s, const BaseEval& base) {
    if (std::fabs(s.t_hat) < detail::near_mean_threshold(s.k2)) {
        return detail::near_mean_limit(s);
    }
    double u_hat = s.t_hat * std::sqrt(s.k2 / base.lpp);
    double value = base.cdf_at_z + base.pdf_at_z * (1.0 / base.s_hat - 1.0 / u_hat);
    if (!std::isfinite(value)) {
        throw NonFiniteError("wbb_cdf: non-finite combination");
    }
    return value;
}

// Standard normal base: s_hat = z_hat = sgn(t) sqrt(-2c), L'' = 1.
inline SpaResult lugannani_rice(const SaddleInfo& s) {
    SpaResult r;
    r.method_used = BaseKind::normal;
    r.condition.c = s.c;
    r.condition.eta = s.eta;
    r.condition.rho = s.rho;
    if (std::fabs(s.t_hat) < detail::near_mean_threshold(s.k2)) {
        r.raw = detail::near_mean_limit(s);
        r.cdf = std::clamp(r.raw, 0.0, 1.0);
        r.condition.near_mean = true;
        return r;
    }
    double sign = s.t_hat > 0.0 ? 1.0 : -1.0;
    double s_hat = sign * std::sqrt(std::max(0.0, -2.0 * s.c));
    double u_hat = s.t_hat * std::sqrt(s.k2);
    BaseEval base{normal_cdf(s_hat), normal_pdf(s_hat), s_hat, 1.0, s_hat};
    r.raw = wbb_cdf(s, base);
    r.cdf = std::clamp(r.raw, 0.0, 1.0);
    r.z_hat = s_hat;
    r.s_hat = s_hat;
    r.u_hat = u_hat;
    return r;
}

struct NigBase {
    NigParams params;
    BaseEval eval;
    bool v_substituted = false;  // symmetric base only
    double v = 0.0;              // cubic root actually used
};

// Asymmetric NIG base parameters (mu = 0, delta = 1) by matching eta and
// rho at the saddle:
//   z_hat = sgn(t) (3 rho/eta - 5)^{-1/2}
//   alpha = 9 [(3 rho - 5 eta)(3 rho - 4 eta)]^{-1/2}
//   beta  = (e z + sgn(K''') sqrt(alpha^2 (1+z^2) - e^2)) / (1 + z^2),
//           e = c + alpha sqrt(1 + z^2),
// where the radicand equals -c (c + 9/(3 rho - 5 eta)) and is
// nonnegative exactly under the stated sufficient condition.
inline NigBase nig_spa_params(const SaddleInfo& s) {
    if (!(s.c < -detail::c_epsilon(s))) {
        throw ConditionViolated("c < 0");
    }
    if (!(s.eta > 1e-12)) {
        throw ConditionViolated("eta > eta_min (target effectively symmetric)");
    }
    // The construction matches eta = K'''^2/K''^3, which drops the sign of
    // K'''; the base it builds always has sgn(L''') = sgn(z_hat) = sgn(t).
    // A target whose tilted skewness opposes the tilt direction has no
    // valid asymmetric-NIG match.
    if (s.k3 * s.t_hat < 0.0) {
        throw ConditionViolated("sgn(K''') consistent with sgn(t_hat)");
    }
    double d1 = 3.0 * s.rho - 5.0 * s.eta;
    if (!(d1 > 0.0)) {
        throw ConditionViolated("rho - (5/3) eta >= 0");
    }
    double abs_c = -s.c;
    if (d1 * abs_c > 9.0) {
        throw ConditionViolated("rho - (5/3) eta <= 3/|c|");
    }
    double sign_t = s.t_hat > 0.0 ? 1.0 : -1.0;
    double z = sign_t * std::sqrt(s.eta / d1);
    double alpha = 9.0 / std::sqrt(d1 * (d1 + s.eta));  // 3 rho - 4 eta = d1 + eta
    double root1pz2 = std::sqrt(1.0 + z * z);
    double e = s.c + alpha * root1pz2;
    // alpha^2 (1+z^2) - e^2: with alpha sqrt(1+z^2) = 9/d1 this reduces to
    // -c (c + 18/d1), which is nonnegative well inside the gated region
    // (the gate d1 |c| <= 9 is conservative against the exact bound 18).
    double radicand = -s.c * (s.c + 18.0 / d1);
    if (!(radicand >= 0.0)) {
        throw ConditionViolated("beta radicand nonnegative");
    }
    // Both quadratic roots solve the squared matching equation. The true
    // base must keep gamma = e - beta z nonnegative (the pre-squaring
    // equation) and put z_hat on the same side of its mean as x is of the
    // target's, i.e. sgn(s_hat) = sgn(t_hat). If both roots qualify, the
    // sqrt-term sign follows K'''.
    double sq = std::sqrt(radicand);
    double beta = 0.0;
    bool found = false;
    double sign_k3 = s.k3 >= 0.0 ? 1.0 : -1.0;
    for (double sgn : {sign_k3, -sign_k3}) {
        double cand = (e * z + sgn * sq) / (1.0 + z * z);
        if (!std::isfinite(cand) || !(std::fabs(cand) < alpha)) continue;
        if (e - cand * z < -1e-12 * alpha) continue;
        double s_hat = -cand + alpha * z / root1pz2;
        if (s_hat * sign_t <= 0.0) continue;
        beta = cand;
        found = true;
        break;
    }
    if (!found) {
        throw ConditionViolated("resulting |beta| < alpha");
    }

    NigBase out;
    out.params = NigParams{alpha, beta, 0.0, 1.0};
    out.eval.z_hat = z;
    out.eval.s_hat = -beta + alpha * z / root1pz2;
    out.eval.lpp = (z * z * z + z) / (out.eval.s_hat + beta);
    out.eval.cdf_at_z = nig_cdf(z, out.params);
    out.eval.pdf_at_z = nig_pdf(z, out.params);
    return out;
}

namespace detail {

// Real roots of the monic cubic y^3 + b y^2 + c y + d.
inline int cubic_real_roots(double b, double c, double d, double out[3]) {
    double p = c - b * b / 3.0;
    double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    double shift = -b / 3.0;
    double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc > 0.0) {
        double sq = std::sqrt(disc);
        double y = std::cbrt(-0.5 * q + sq) + std::cbrt(-0.5 * q - sq);
        out[0] = y + shift;
        return 1;
    }
    // Three real roots (trigonometric form).
    double m = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
    double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
        out[k] = m * std::cos(phi - 2.0943951023931954923 * k) + shift;
    }
    return 3;
}

}  // namespace detail

// Symmetric NIG base (mu = 0, beta = 0). Solves the cubic
//
//   5 v^3 - 5 v^2 + (rho c / 3 - 4) v + 4 = 0
//
// and takes its unique negative real root; v < -1 is required for
// c < 0, and a miss substitutes the stand-in v = -1.000001 (reported
// through v_substituted), which turns the base nearly normal. Then
//
//   alpha = delta = sqrt(c/(1+v)),  z_hat = sgn(t) sqrt(c (v-1)).
//
// The selection deliberately mirrors the source prescription. The
// cubic's matching branch is actually its root V > 1 (the unknown is
// V = sqrt(1 + w^2), and only that branch reproduces rho; the negative
// root matches the Legendre-Fenchel value c but scales the base
// kurtosis by (1+v)/(v-1)). Both selections were implemented and
// measured against the inversion oracle across this artifact's models;
// the prescribed one tracks the oracle distinctly better (the matched
// branch overweights heavy-tail corrections), so it is kept.
inline NigBase sym_nig_spa_params(const SaddleInfo& s) {
    double c_eps = detail::c_epsilon(s);
    if (std::fabs(s.c) < c_eps) {
        throw DegenerateC("sym_nig_spa_params: |c| below threshold (saddle at the mean)");
    }
    if (s.c > 0.0) {
        // c = K(t) - x t is never positive for a true saddle.
        throw DegenerateC("sym_nig_spa_params: positive c");
    }

    double coeff = (s.rho * s.c / 3.0 - 4.0) / 5.0;
    double roots[3];
    int n = detail::cubic_real_roots(-1.0, coeff, 0.8, roots);
    double v = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < n; ++i) {
        if (roots[i] < 0.0 && (!std::isfinite(v) || roots[i] < v)) v = roots[i];
    }
    if (std::isfinite(v)) {
        // one Newton polish step
        double f = 5.0 * v * v * v - 5.0 * v * v + (s.rho * s.c / 3.0 - 4.0) * v + 4.0;
        double fp = 15.0 * v * v - 10.0 * v + (s.rho * s.c / 3.0 - 4.0);
        if (fp != 0.0) v -= f / fp;
    }

    NigBase out;
    out.v = v;
    if (!std::isfinite(v) || !(v < -1.0)) {
        out.v = -1.000001;
        out.v_substituted = true;
    }
    v = out.v;

    double alpha = std::sqrt(s.c / (1.0 + v));
    double delta = alpha;
    double sign_t = s.t_hat > 0.0 ? 1.0 : -1.0;
    double z = sign_t * std::sqrt(s.c * (v - 1.0));
    out.params = NigParams{alpha, 0.0, 0.0, delta};
    out.eval.z_hat = z;
    out.eval.s_hat = alpha * z / std::sqrt(delta * delta + z * z);
    double w = z / delta;
    out.eval.lpp = delta / out.eval.s_hat * (w * w * w + w);
    out.eval.cdf_at_z = nig_cdf(z, out.params);
    out.eval.pdf_at_z = nig_pdf(z, out.params);
    return out;
}

// Full approximation with the fallback chain. `requested` selects the
// first base to try; Auto starts at asymmetric NIG. Advances on
// ConditionViolated / DegenerateC / NonFiniteError; the normal base is
// total, so the chain always terminates.
inline SpaResult spa_cdf(const CgfModel& cgf, double x, BaseRequest requested = BaseRequest::auto_chain) {
    SaddleInfo s = solve_saddle(cgf, x);
    ConditionReport rep;
    rep.c = s.c;
    rep.eta = s.eta;
    rep.rho = s.rho;

    if (std::fabs(s.t_hat) < detail::near_mean_threshold(s.k2)) {
        SpaResult r;
        r.raw = detail::near_mean_limit(s);
        r.cdf = std::clamp(r.raw, 0.0, 1.0);
        r.method_used = BaseKind::normal;
        rep.near_mean = true;
        r.condition = rep;
        r.fell_back = requested != BaseRequest::auto_chain && requested != BaseRequest::normal;
        return r;
    }

    int stage = 0;
    if (requested == BaseRequest::symmetric_nig) stage = 1;
    if (requested == BaseRequest::normal) stage = 2;

    bool fell = false;
    for (; stage <= 2; ++stage) {
        try {
            if (stage == 0) {
                NigBase base = nig_spa_params(s);
                rep.asym_checked = true;
                rep.asym_ok = true;
                SpaResult r;
                r.raw = wbb_cdf(s, base.eval);
                r.cdf = std::clamp(r.raw, 0.0, 1.0);
                r.method_used = BaseKind::asymmetric_nig;
                r.fell_back = fell;
                r.condition = rep;
                r.z_hat = base.eval.z_hat;
                r.s_hat = base.eval.s_hat;
                r.u_hat = s.t_hat * std::sqrt(s.k2 / base.eval.lpp);
                return r;
            }
            if (stage == 1) {
                NigBase base = sym_nig_spa_params(s);
                rep.has_v = true;
                rep.v = base.v;
                rep.v_substituted = base.v_substituted;
                SpaResult r;
                r.raw = wbb_cdf(s, base.eval);
                r.cdf = std::clamp(r.raw, 0.0, 1.0);
                r.method_used = BaseKind::symmetric_nig;
                r.fell_back = fell || base.v_substituted;
                r.condition = rep;
                r.z_hat = base.eval.z_hat;
                r.s_hat = base.eval.s_hat;
                r.u_hat = s.t_hat * std::sqrt(s.k2 / base.eval.lpp);
                return r;
            }
            SpaResult r = lugannani_rice(s);
            r.fell_back = fell;
            rep.near_mean = r.condition.near_mean;
            r.condition = rep;
            return r;
        } catch (const ConditionViolated& e) {
            if (stage == 0) {
                rep.asym_checked = true;
                rep.asym_ok = false;
            }
            if (rep.violation.empty()) rep.violation = e.which;
            fell = true;
        } catch (const DegenerateC& e) {
            if (rep.violation.empty()) rep.violation = e.what();
            fell = true;
        } catch (const NonFiniteError& e) {
            if (rep.violation.empty()) rep.violation = e.what();
            fell = true;
        }
    }
    throw ConvergenceError("spa_cdf: fallback chain exhausted");  // unreachable
}

struct OutageEstimate {
    double p_out = 0.0;   // 1 - cdf, clamped to [0,1]
    double raw = 0.0;     // 1 - raw cdf, unclamped
    SpaResult spa;
};

// SINR outage P_out = Pr(Omega > -theta sigma2) ~ 1 - F_Omega(-theta sigma2);
// sigma2 = 0 gives the SIR outage evaluated at zero.
inline OutageEstimate spa_outage(const CgfModel& omega, double theta, double sigma2 = 0.0,
                                 BaseRequest requested = BaseRequest::auto_chain) {
    if (!(theta > 0.0)) throw DomainError("spa_outage: theta must be positive");
    double w = -theta * sigma2;
    OutageEstimate out;
    out.spa = spa_cdf(omega, w, requested);
    out.raw = 1.0 - out.spa.raw;
    out.p_out = std::clamp(1.0 - out.spa.cdf, 0.0, 1.0);
    return out;
}

}  // namespace outage

#endif  // OUTAGE_SPA_HPP
