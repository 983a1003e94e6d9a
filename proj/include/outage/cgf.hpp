#ifndef OUTAGE_CGF_HPP
#define OUTAGE_CGF_HPP

// Cumulant generating functions in the plus convention
//
//   K_V(t) = ln E[e^{t V}],
//
// with derivatives up to order four, cumulants, the characteristic
// exponent K(j u), and an open convergence strip containing zero.
// All model CGFs quoted from sources that use M(t) = E[e^{-tX}] are
// transcribed here by t -> -t, so K'(0) is the mean and K'' > 0 on the
// whole strip for every model.
//
// Builders in this header:
//   normal_cgf            N(mean, var)
//   gamma_gain_cgf        Gamma(shape m_f, rate r_f) channel power gain
//   compound_poisson_cgf  sum of N ~ Poisson(lambda) iid inner draws
//   compound_binomial_cgf sum of N ~ Binomial(L, prob) iid inner draws
//   omega_cgf             Omega = theta*Y - X from independent X, Y
//   nig_cgf               NIG(alpha, beta, mu, delta)
//   affine_cgf            a*V + b of an inner law (a > 0)
// The spatial (PPP) builders live in ppp.hpp.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <sstream>

#include "outage/errors.hpp"
#include "outage/nig.hpp"

namespace outage {

// Open interval of real t on which the CGF is finite. Zero is always
// interior, since K(0) = 0.
struct ConvergenceStrip {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    // Strip shrunk by a relative margin; evaluations are allowed only here.
    ConvergenceStrip shrunk(double rel_margin = 1e-9) const {
        ConvergenceStrip s = *this;
        if (std::isfinite(s.lo)) s.lo += rel_margin * std::max(1.0, std::fabs(s.lo));
        if (std::isfinite(s.hi)) s.hi -= rel_margin * std::max(1.0, std::fabs(s.hi));
        return s;
    }

    bool contains(double t) const { return t > lo && t < hi; }
    bool empty() const { return !(lo < 0.0 && hi > 0.0); }
};

class CgfBase {
  public:
    virtual ~CgfBase() = default;
    virtual double value(double t) const = 0;
    virtual double derivative(int n, double t) const = 0;
    virtual std::complex<double> char_exponent(double u) const = 0;
    virtual ConvergenceStrip strip() const = 0;
    virtual double cumulant(int n) const { return derivative(n, 0.0); }
};

// Value-semantic immutable handle. Evaluation is range-checked against
// the margin-shrunk strip; everything is safe for concurrent use.
class CgfModel {
  public:
    CgfModel() = default;
    explicit CgfModel(std::shared_ptr<const CgfBase> impl) : impl_(std::move(impl)) {}

    bool valid() const { return static_cast<bool>(impl_); }

    ConvergenceStrip strip() const { return impl_->strip().shrunk(); }

    double value(double t) const {
        check(t);
        return impl_->value(t);
    }

    double derivative(int n, double t) const {
        check(t);
        return impl_->derivative(n, t);
    }

    std::complex<double> char_exponent(double u) const { return impl_->char_exponent(u); }

    double cumulant(int n) const { return impl_->cumulant(n); }

  private:
    void check(double t) const {
        ConvergenceStrip s = strip();
        if (!s.contains(t)) {
            std::ostringstream os;
            os << "CGF evaluated at t=" << t << " outside strip (" << s.lo << ", " << s.hi << ")";
            throw StripError(os.str());
        }
    }

    std::shared_ptr<const CgfBase> impl_;
};

// Gamma channel power gain for Nakagami-m fading: shape m_f, rate r_f.
// E[G^n] = m_f (m_f+1) ... (m_f+n-1) / r_f^n.
struct GainLaw {
    double m_f = 1.0;
    double r_f = 1.0;

    void validate() const {
        if (!(m_f > 0.0) || !(r_f > 0.0)) throw DomainError("GainLaw: shape and rate must be positive");
    }

    double moment(int n) const {
        double num = 1.0;
        for (int k = 0; k < n; ++k) num *= m_f + k;
        return num / std::pow(r_f, n);
    }

    double mean() const { return m_f / r_f; }
    double skew2() const { return 4.0 / m_f; }     // squared skewness of Gamma(m_f, .)
    double excess_kurtosis() const { return 6.0 / m_f; }
};

struct OmegaSpec {
    CgfModel signal;        // K_X
    CgfModel interference;  // K_Y
    double theta = 1.0;     // SINR threshold, linear scale
};

namespace detail {

inline void check_deriv_order(int n) {
    if (n < 1 || n > 4) throw DomainError("CGF derivative order must be 1..4");
}

// Derivatives of exp(g(t)) in terms of g's derivatives (Bell polynomials).
struct ExpDerivs {
    double e, d1, d2, d3, d4;
};

inline ExpDerivs exp_derivs(double g1, double g2, double g3, double g4, double e) {
    ExpDerivs r;
    r.e = e;
    r.d1 = e * g1;
    r.d2 = e * (g2 + g1 * g1);
    r.d3 = e * (g3 + 3.0 * g2 * g1 + g1 * g1 * g1);
    r.d4 = e * (g4 + 4.0 * g3 * g1 + 3.0 * g2 * g2 + 6.0 * g2 * g1 * g1 + g1 * g1 * g1 * g1);
    return r;
}

// Derivatives of ln(S(t)) in terms of S's derivatives.
inline double log_deriv(int n, double s, double s1, double s2, double s3, double s4) {
    double r1 = s1 / s;
    if (n == 1) return r1;
    double r2 = s2 / s;
    if (n == 2) return r2 - r1 * r1;
    double r3 = s3 / s;
    if (n == 3) return r3 - 3.0 * r2 * r1 + 2.0 * r1 * r1 * r1;
    double r4 = s4 / s;
    return r4 - 4.0 * r3 * r1 - 3.0 * r2 * r2 + 12.0 * r2 * r1 * r1 - 6.0 * r1 * r1 * r1 * r1;
}

class NormalCgf final : public CgfBase {
  public:
    NormalCgf(double mean, double var) : mean_(mean), var_(var) {
        if (!(var > 0.0)) throw DomainError("normal_cgf: variance must be positive");
    }
    double value(double t) const override { return mean_ * t + 0.5 * var_ * t * t; }
    double derivative(int n, double t) const override {
        check_deriv_order(n);
        if (n == 1) return mean_ + var_ * t;
        if (n == 2) return var_;
        return 0.0;
    }
    std::complex<double> char_exponent(double u) const override {
        return {-0.5 * var_ * u * u, mean_ * u};
    }
    ConvergenceStrip strip() const override { return {}; }

  private:
    double mean_, var_;
};

class GammaGainCgf final : public CgfBase {
  public:
    explicit GammaGainCgf(GainLaw g) : g_(g) { g.validate(); }
    double value(double t) const override { return -g_.m_f * std::log1p(-t / g_.r_f); }
    double derivative(int n, double t) const override {
        check_deriv_order(n);
        double fact = 1.0;
        for (int k = 2; k < n; ++k) fact *= k;  // (n-1)!
        return g_.m_f * fact / std::pow(g_.r_f - t, n);
    }
    std::complex<double> char_exponent(double u) const override {
        return -g_.m_f * std::log(std::complex<double>(1.0, -u / g_.r_f));
    }
    ConvergenceStrip strip() const override {
        return {-std::numeric_limits<double>::infinity(), g_.r_f};
    }
    double cumulant(int n) const override { return derivative(n, 0.0); }

  private:
    GainLaw g_;
};

class CompoundPoissonCgf final : public CgfBase {
  public:
    CompoundPoissonCgf(double lambda, CgfModel inner) : lambda_(lambda), inner_(std::move(inner)) {
        if (!(lambda > 0.0)) throw DomainError("compound_poisson_cgf: intensity must be positive");
    }
    double value(double t) const override { return lambda_ * std::expm1(inner_.value(t)); }
    double derivative(int n, double t) const override {
        check_deriv_order(n);
        auto e = exp_derivs(inner_.derivative(1, t),
                            n >= 2 ? inner_.derivative(2, t) : 0.0,
                            n >= 3 ? inner_.derivative(3, t) : 0.0,
                            n >= 4 ? inner_.derivative(4, t) : 0.0,
                            std::exp(inner_.value(t)));
        switch (n) {
            case 1: return lambda_ * e.d1;
            case 2: return lambda_ * e.d2;
            case 3: return lambda_ * e.d3;
            default: return lambda_ * e.d4;
        }
    }
    std::complex<double> char_exponent(double u) const override {
        return lambda_ * (std::exp(inner_.char_exponent(u)) - 1.0);
    }
    ConvergenceStrip strip() const override { return inner_.strip(); }

  private:
    double lambda_;
    CgfModel inner_;
};

class CompoundBinomialCgf final : public CgfBase {
  public:
    CompoundBinomialCgf(int count, double prob, CgfModel inner)
        : count_(count), prob_(prob), inner_(std::move(inner)) {
        if (count < 1) throw DomainError("compound_binomial_cgf: count must be >= 1");
        if (prob < 0.0 || prob > 1.0) throw DomainError("compound_binomial_cgf: prob must be in [0,1]");
    }
    double value(double t) const override {
        if (prob_ == 0.0) return 0.0;
        if (prob_ == 1.0) return count_ * inner_.value(t);
        return count_ * std::log1p(prob_ * std::expm1(inner_.value(t)));
    }
    double derivative(int n, double t) const override {
        check_deriv_order(n);
        if (prob_ == 0.0) return 0.0;
        if (prob_ == 1.0) return count_ * inner_.derivative(n, t);
        auto e = exp_derivs(inner_.derivative(1, t), inner_.derivative(2, t),
                            inner_.derivative(3, t), inner_.derivative(4, t),
                            std::exp(inner_.value(t)));
        double s = 1.0 - prob_ + prob_ * e.e;
        return count_ * log_deriv(n, s, prob_ * e.d1, prob_ * e.d2, prob_ * e.d3, prob_ * e.d4);
    }
    std::complex<double> char_exponent(double u) const override {
        if (prob_ == 0.0) return 0.0;
        if (prob_ == 1.0) return double(count_) * inner_.char_exponent(u);
        return double(count_) * std::log(1.0 + prob_ * (std::exp(inner_.char_exponent(u)) - 1.0));
    }
    ConvergenceStrip strip() const override { return inner_.strip(); }

  private:
    int count_;
    double prob_;
    CgfModel inner_;
};

class OmegaCgf final : public CgfBase {
  public:
    explicit OmegaCgf(OmegaSpec spec) : spec_(std::move(spec)) {
        if (!(spec_.theta > 0.0)) throw DomainError("omega_cgf: theta must be positive");
        if (strip().empty()) throw StripError("omega_cgf: component strips do not overlap around zero");
    }
    double value(double t) const override {
        return spec_.interference.value(spec_.theta * t) + spec_.signal.value(-t);
    }
    double derivative(int n, double t) const override {
        check_deriv_order(n);
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return std::pow(spec_.theta, n) * spec_.interference.derivative(n, spec_.theta * t) +
               sign * spec_.signal.derivative(n, -t);
    }
    std::complex<double> char_exponent(double u) const override {
        return spec_.interference.char_exponent(spec_.theta * u) + spec_.signal.char_exponent(-u);
    }
    ConvergenceStrip strip() const override {
        ConvergenceStrip sx = spec_.signal.strip();
        ConvergenceStrip sy = spec_.interference.strip();
        return {std::max(-sx.hi, sy.lo / spec_.theta), std::min(-sx.lo, sy.hi / spec_.theta)};
    }
    double cumulant(int n) const override {
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return std::pow(spec_.theta, n) * spec_.interference.cumulant(n) +
               sign * spec_.signal.cumulant(n);
    }

  private:
    OmegaSpec spec_;
};

class NigCgf final : public CgfBase {
  public:
    explicit NigCgf(NigParams p) : p_(p) { p.validate(); }
    double value(double t) const override {
        double b = p_.beta + t;
        return p_.mu * t + p_.delta * (p_.gamma() - std::sqrt(p_.alpha * p_.alpha - b * b));
    }
    double derivative(int n, double t) const override {
        check_deriv_order(n);
        double b = p_.beta + t;
        double a2 = p_.alpha * p_.alpha;
        double q = a2 - b * b;
        double rq = std::sqrt(q);
        switch (n) {
            case 1: return p_.mu + p_.delta * b / rq;
            case 2: return p_.delta * a2 / (q * rq);
            case 3: return 3.0 * p_.delta * a2 * b / (q * q * rq);
            default: return 3.0 * p_.delta * a2 * (a2 + 4.0 * b * b) / (q * q * q * rq);
        }
    }
    std::complex<double> char_exponent(double u) const override {
        std::complex<double> b(p_.beta, u);
        std::complex<double> root = std::sqrt(p_.alpha * p_.alpha - b * b);
        return std::complex<double>(0.0, p_.mu * u) + p_.delta * (p_.gamma() - root);
    }
    ConvergenceStrip strip() const override { return {-p_.alpha - p_.beta, p_.alpha - p_.beta}; }

  private:
    NigParams p_;
};

class AffineCgf final : public CgfBase {
  public:
    AffineCgf(CgfModel inner, double scale, double shift)
        : inner_(std::move(inner)), scale_(scale), shift_(shift) {
        if (!(scale > 0.0)) throw DomainError("affine_cgf: scale must be positive");
    }
    double value(double t) const override { return shift_ * t + inner_.value(scale_ * t); }
    double derivative(int n, double t) const override {
        check_deriv_order(n);
        double d = std::pow(scale_, n) * inner_.derivative(n, scale_ * t);
        if (n == 1) d += shift_;
        return d;
    }
    std::complex<double> char_exponent(double u) const override {
        return std::complex<double>(0.0, shift_ * u) + inner_.char_exponent(scale_ * u);
    }
    ConvergenceStrip strip() const override {
        ConvergenceStrip s = inner_.strip();
        return {s.lo / scale_, s.hi / scale_};
    }

  private:
    CgfModel inner_;
    double scale_, shift_;
};

}  // namespace detail

inline CgfModel normal_cgf(double mean, double var) {
    return CgfModel(std::make_shared<detail::NormalCgf>(mean, var));
}

// K_G(t) = -m_f ln(1 - t/r_f) on (-inf, r_f); cumulant(n) = m_f (n-1)! / r_f^n.
inline CgfModel gamma_gain_cgf(GainLaw g) {
    g.validate();
    return CgfModel(std::make_shared<detail::GammaGainCgf>(g));
}

// K(t) = lambda (e^{K_inner(t)} - 1); cumulant(n) = lambda E[G^n].
inline CgfModel compound_poisson_cgf(double lambda_pts, CgfModel inner) {
    return CgfModel(std::make_shared<detail::CompoundPoissonCgf>(lambda_pts, std::move(inner)));
}

// K(t) = L ln(1 - prob + prob e^{K_inner(t)}).
inline CgfModel compound_binomial_cgf(int count, double prob, CgfModel inner) {
    return CgfModel(std::make_shared<detail::CompoundBinomialCgf>(count, prob, std::move(inner)));
}

// K_Omega(t) = K_Y(theta t) + K_X(-t) for independent signal X and
// interference Y; cumulant(n) = theta^n k_n(Y) + (-1)^n k_n(X).
inline CgfModel omega_cgf(OmegaSpec spec) {
    return CgfModel(std::make_shared<detail::OmegaCgf>(std::move(spec)));
}

inline CgfModel nig_cgf(NigParams p) {
    return CgfModel(std::make_shared<detail::NigCgf>(p));
}

// CGF of a*V + b for inner law V.
inline CgfModel affine_cgf(CgfModel inner, double scale, double shift) {
    return CgfModel(std::make_shared<detail::AffineCgf>(std::move(inner), scale, shift));
}

}  // namespace outage

#endif  // OUTAGE_CGF_HPP
