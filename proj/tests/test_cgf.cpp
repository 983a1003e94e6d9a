#include <doctest.h>

#include <cmath>
#include <random>

#include "outage/cgf.hpp"
#include "outage/monte_carlo.hpp"
#include "outage/ppp.hpp"
#include "oracle_helpers.hpp"

using namespace outage;
namespace oracle = testing_oracles;

namespace {

PppCompParams comp_defaults(double avg_bs = 100.0, double theta = 1.0) {
    PppCompParams p;
    p.lam = avg_bs / (3.14159265358979323846 * 1e6);
    p.a = 30.0;
    p.R = 150.0;
    p.alpha_pl = 4.0;
    p.P = 1.0;
    p.gain = GainLaw{1.0, 1.0};
    p.theta = theta;
    return p;
}

}  // namespace

TEST_SUITE("cgf") {

TEST_CASE("gamma gain") {
    GainLaw exp_gain{1.0, 1.0};
    CgfModel g = gamma_gain_cgf(exp_gain);
    CHECK(g.value(0.0) == 0.0);
    CHECK(g.cumulant(1) == doctest::Approx(1.0));
    CHECK(g.cumulant(2) == doctest::Approx(1.0));
    CHECK(g.cumulant(3) == doctest::Approx(2.0));
    CHECK(g.cumulant(4) == doctest::Approx(6.0));

    CgfModel g23 = gamma_gain_cgf(GainLaw{2.0, 3.0});
    CHECK(g23.value(1.0) == doctest::Approx(-2.0 * std::log(2.0 / 3.0)).epsilon(1e-12));
    // cross-check by quadrature of E[e^{t G}] with the Gamma(2,3) density
    double mgf = oracle::quad(
        [](double x) { return std::exp(x) * 9.0 * x * std::exp(-3.0 * x); }, 0.0, 50.0);
    CHECK(g23.value(1.0) == doctest::Approx(std::log(mgf)).epsilon(1e-10));

    CHECK_THROWS_AS(g.value(1.0 + 1e-6), StripError);
    CHECK_THROWS_AS((void)gamma_gain_cgf(GainLaw{-1.0, 1.0}), DomainError);
}

TEST_CASE("compound poisson") {
    GainLaw exp_gain{1.0, 1.0};
    CgfModel cp = compound_poisson_cgf(10.0, gamma_gain_cgf(exp_gain));
    CHECK(cp.value(0.0) == 0.0);
    CHECK(cp.cumulant(2) == doctest::Approx(20.0).epsilon(1e-12));  // lam E[G^2]
    CHECK(cp.value(0.5) == doctest::Approx(10.0).epsilon(1e-12));

    SUBCASE("Monte Carlo MGF cross-check") {
        auto draw = [&](CounterRng& rng) {
            long long n = rng.poisson(10.0);
            double y = 0.0;
            for (long long i = 0; i < n; ++i) y += rng.exponential();
            return y;
        };
        auto est = oracle::mc_log_mgf(draw, 0.3, 1000000, 91);
        CHECK(std::fabs(est.value - cp.value(0.3)) < 4.0 * est.stderr_log);
        // at t = 0.5 the weight e^{tY} has infinite variance (2t sits on
        // the strip edge), so only a loose agreement band is meaningful
        auto edge = oracle::mc_log_mgf(draw, 0.5, 1000000, 91);
        CHECK(std::fabs(edge.value - 10.0) < 1.5);
    }
}

TEST_CASE("compound binomial") {
    GainLaw exp_gain{1.0, 1.0};
    CgfModel inner = gamma_gain_cgf(exp_gain);
    CgfModel zero = compound_binomial_cgf(10, 0.0, inner);
    CHECK(zero.value(0.4) == 0.0);
    CHECK(zero.derivative(2, 0.4) == 0.0);

    CgfModel full = compound_binomial_cgf(10, 1.0, inner);
    CHECK(full.value(0.4) == doctest::Approx(10.0 * inner.value(0.4)).epsilon(1e-14));

    CgfModel cb = compound_binomial_cgf(10, 0.7, inner);
    CHECK(cb.value(0.5) == doctest::Approx(10.0 * std::log(1.7)).epsilon(1e-12));

    CHECK_THROWS_AS((void)compound_binomial_cgf(0, 0.5, inner), DomainError);
    CHECK_THROWS_AS((void)compound_binomial_cgf(10, 1.5, inner), DomainError);

    SUBCASE("Monte Carlo MGF cross-check") {
        auto draw = [&](CounterRng& rng) {
            long long n = rng.binomial(10, 0.7);
            double y = 0.0;
            for (long long i = 0; i < n; ++i) y += rng.exponential();
            return y;
        };
        auto est = oracle::mc_log_mgf(draw, 0.3, 1000000, 17);
        CHECK(std::fabs(est.value - cb.value(0.3)) < 4.0 * est.stderr_log);
    }
}

TEST_CASE("omega composition") {
    SUBCASE("cumulant relation is algebraic") {
        // theta = 2, k2(Y) = 3, k2(X) = 1 -> k2(Omega) = 13
        CgfModel om = omega_cgf({normal_cgf(0.0, 1.0), normal_cgf(0.0, 3.0), 2.0});
        CHECK(om.cumulant(2) == doctest::Approx(13.0).epsilon(1e-15));
    }

    GainLaw exp_gain{1.0, 1.0};
    CgfModel x = gamma_gain_cgf(exp_gain);

    SUBCASE("symmetric at theta = 1") {
        CgfModel om = omega_cgf({x, x, 1.0});
        CHECK(om.cumulant(1) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(om.cumulant(3) == doctest::Approx(0.0).epsilon(1e-15));
    }

    SUBCASE("value at theta = 2") {
        CgfModel om = omega_cgf({x, x, 2.0});
        double expected = -std::log(1.0 - 0.6) - std::log(1.3);
        CHECK(om.value(0.3) == doctest::Approx(expected).epsilon(1e-13));
    }

    SUBCASE("composition cumulant identity on random compound models") {
        std::mt19937 gen(7);
        std::uniform_real_distribution<double> u(0.5, 3.0);
        for (int rep = 0; rep < 10; ++rep) {
            GainLaw g{u(gen), u(gen)};
            double lx = u(gen) * 4.0, ly = u(gen) * 4.0, theta = u(gen);
            CgfModel kx = compound_poisson_cgf(lx, gamma_gain_cgf(g));
            CgfModel ky = compound_poisson_cgf(ly, gamma_gain_cgf(g));
            CgfModel om = omega_cgf({kx, ky, theta});
            for (int n = 1; n <= 4; ++n) {
                double expect = std::pow(theta, n) * ky.cumulant(n) +
                                ((n % 2 == 0) ? 1.0 : -1.0) * kx.cumulant(n);
                CHECK(om.cumulant(n) == doctest::Approx(expect).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("ppp comp cgf") {
    PppCompParams p = comp_defaults();
    CgfModel k = ppp_comp_cgf(p);
    CHECK(k.value(0.0) == 0.0);

    SUBCASE("first derivative at zero vs analytic cumulant") {
        double analytic = ppp_comp_cumulant(1, p.lam, p.a, p.R, p.alpha_pl, p.P, p.gain, p.theta);
        CHECK(k.derivative(1, 0.0) == doctest::Approx(analytic).epsilon(1e-6));
    }

    SUBCASE("finite-difference consistency at half-strip") {
        double t0 = 0.5 * k.strip().hi;
        double h = 1e-4 * t0;
        double fd = oracle::central_diff([&](double t) { return k.derivative(1, t); }, t0, h);
        CHECK(k.derivative(2, t0) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("ppp comp cumulants") {
    PppCompParams p = comp_defaults();

    SUBCASE("bracket tends to one as R/a -> inf") {
        for (int n = 1; n <= 4; ++n) {
            double lim = ppp_comp_cumulant_limit(n, p.lam, p.a, p.alpha_pl, p.P, p.gain);
            double wide = ppp_comp_cumulant(n, p.lam, p.a, 1e9 * p.a, p.alpha_pl, p.P, p.gain, p.theta);
            CHECK(wide == doctest::Approx(lim).epsilon(1e-10));
        }
    }

    SUBCASE("even-order bracket positive for any theta") {
        for (double theta : {0.01, 0.3, 1.0, 3.0, 100.0}) {
            for (int n : {2, 4}) {
                double u = p.R / p.a;
                double bracket = 1.0 + (std::pow(-theta, n) - 1.0) * std::pow(u, 2.0 - n * p.alpha_pl);
                CHECK(bracket > 0.0);
            }
        }
    }

    SUBCASE("quadrature CGF derivatives match, n = 1..4") {
        CgfModel k = ppp_comp_cgf(p);
        for (int n = 1; n <= 4; ++n) {
            double analytic = ppp_comp_cumulant(n, p.lam, p.a, p.R, p.alpha_pl, p.P, p.gain, p.theta);
            CHECK(k.derivative(n, 0.0) == doctest::Approx(analytic).epsilon(1e-4));
        }
    }
}

TEST_CASE("ppp skewness and kurtosis of Omega") {
    PppCompParams p = comp_defaults();

    SUBCASE("exponential gain shape ratios") {
        CHECK(p.gain.skew2() == doctest::Approx(4.0));
        CHECK(p.gain.excess_kurtosis() == doctest::Approx(6.0));
    }

    SUBCASE("matches limit-cumulant ratios") {
        auto sk = ppp_comp_skew_kurt(p.lam, p.a, p.alpha_pl, p.gain);
        double k2 = ppp_comp_cumulant(2, p.lam, p.a, 1e6 * p.a, p.alpha_pl, p.P, p.gain, p.theta);
        double k3 = ppp_comp_cumulant(3, p.lam, p.a, 1e6 * p.a, p.alpha_pl, p.P, p.gain, p.theta);
        double k4 = ppp_comp_cumulant(4, p.lam, p.a, 1e6 * p.a, p.alpha_pl, p.P, p.gain, p.theta);
        CHECK(sk.skew2 == doctest::Approx(k3 * k3 / (k2 * k2 * k2)).epsilon(1e-3));
        CHECK(sk.excess_kurtosis == doctest::Approx(k4 / (k2 * k2)).epsilon(1e-3));
    }

    SUBCASE("strictly decreasing in lam and in a") {
        double prev_s = 1e300, prev_k = 1e300;
        for (double lam : {1e-5, 2e-5, 4e-5, 8e-5}) {
            auto sk = ppp_comp_skew_kurt(lam, p.a, p.alpha_pl, p.gain);
            CHECK(sk.skew2 < prev_s);
            CHECK(sk.excess_kurtosis < prev_k);
            prev_s = sk.skew2;
            prev_k = sk.excess_kurtosis;
        }
        prev_s = prev_k = 1e300;
        for (double a : {10.0, 20.0, 40.0, 80.0}) {
            auto sk = ppp_comp_skew_kurt(p.lam, a, p.alpha_pl, p.gain);
            CHECK(sk.skew2 < prev_s);
            CHECK(sk.excess_kurtosis < prev_k);
            prev_s = sk.skew2;
            prev_k = sk.excess_kurtosis;
        }
    }
}

TEST_CASE("no-fading cgf") {
    PppCompParams p = comp_defaults();
    CgfModel k = nofading_cgf(p);
    CHECK(k.value(0.0) == 0.0);

    SUBCASE("interference closed form vs quadrature (decay side)") {
        // I(s) = int_R^inf (e^{-s theta P r^-alpha} - 1) r dr, via the
        // substituted proper integral as the oracle.
        auto quad_side = [&](int m, double s) {
            double edge = std::pow(p.R, -0.5 * p.alpha_pl);
            return (2.0 / p.alpha_pl) *
                   oracle::quad(
                       [&](double sigma) {
                           double w = sigma * sigma;
                           double c = p.theta * p.P * w;
                           double sign = (m % 2 == 0) ? 1.0 : -1.0;
                           double f = (m == 0) ? std::expm1(-s * c)
                                               : sign * std::pow(c, m) * std::exp(-s * c);
                           return f * std::pow(sigma, -4.0 / p.alpha_pl - 1.0);
                       },
                       0.0, edge);
        };
        // arguments with z = s theta P R^-alpha comfortably above the
        // cancellation switch
        for (double s : {5e7, 2e8, 1e9}) {
            for (int m = 0; m <= 3; ++m) {
                double closed = nofading_interference_closed(m, s, p.R, p.alpha_pl, p.P, p.theta);
                CHECK(closed == doctest::Approx(quad_side(m, s)).epsilon(1e-6));
            }
        }
    }

    SUBCASE("derivative consistency by finite differences") {
        double t0 = 1.5e6;
        double h = 1e-4 * t0;
        double fd = oracle::central_diff([&](double t) { return k.derivative(2, t); }, t0, h);
        CHECK(k.derivative(3, t0) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("nig shape bound") {
    // excess kurtosis dominates squared skewness: K >= (4/3) S^2, with
    // 3/(delta gamma) of slack; checked through the CGF cumulants
    for (const auto& p : {NigParams{2.0, 1.0, 0.0, 1.0}, NigParams{1.1, -0.9, 2.0, 0.4},
                          NigParams{5.0, 4.9, 0.0, 3.0}, NigParams{1.0, 0.0, 0.0, 1.0}}) {
        CgfModel k = nig_cgf(p);
        double k2 = k.cumulant(2), k3 = k.cumulant(3), k4 = k.cumulant(4);
        double skew2 = k3 * k3 / (k2 * k2 * k2);
        double exkurt = k4 / (k2 * k2);
        CHECK(exkurt >= 4.0 / 3.0 * skew2);
        CHECK(exkurt - 4.0 / 3.0 * skew2 ==
              doctest::Approx(3.0 / (p.delta * p.gamma())).epsilon(1e-10));
    }
}

TEST_CASE("spatial model invariants") {
    PppCompParams p = comp_defaults();
    for (bool fading : {true, false}) {
        CgfModel k = fading ? ppp_comp_cgf(p) : nofading_cgf(p);
        double t_hat_scale = 7.6e7;  // order of the SIR saddle at these parameters
        for (double f : {-0.005, 0.2, 0.5, 1.2}) {
            CHECK(k.derivative(2, f * t_hat_scale) > 0.0);
        }
        CHECK(std::abs(k.char_exponent(0.0)) == doctest::Approx(0.0).epsilon(1e-12));
        for (double u : {3e5, 4e6}) {
            auto plus = k.char_exponent(u);
            auto minus = k.char_exponent(-u);
            CHECK(std::real(minus) == doctest::Approx(std::real(plus)).epsilon(1e-9));
            CHECK(std::imag(minus) == doctest::Approx(-std::imag(plus)).epsilon(1e-9));
        }
    }
}

TEST_CASE("model-wide invariants") {
    GainLaw g{1.3, 0.8};
    std::vector<CgfModel> models;
    models.push_back(gamma_gain_cgf(g));
    models.push_back(compound_poisson_cgf(6.0, gamma_gain_cgf(g)));
    models.push_back(compound_binomial_cgf(8, 0.6, gamma_gain_cgf(g)));
    models.push_back(omega_cgf({compound_poisson_cgf(7.0, gamma_gain_cgf(g)),
                                compound_poisson_cgf(3.0, gamma_gain_cgf(g)), 1.5}));
    models.push_back(nig_cgf(NigParams{2.0, 1.0, 0.0, 1.0}));
    models.push_back(normal_cgf(0.3, 2.0));

    std::mt19937 gen(42);
    for (const auto& m : models) {
        CHECK(m.value(0.0) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(m.derivative(1, 0.0) == doctest::Approx(m.cumulant(1)).epsilon(1e-6));

        ConvergenceStrip s = m.strip();
        double lo = std::max(s.lo, -30.0), hi = std::min(s.hi, 30.0);
        std::uniform_real_distribution<double> dist(lo + 0.02 * (hi - lo), hi - 0.02 * (hi - lo));
        for (int i = 0; i < 50; ++i) {
            CHECK(m.derivative(2, dist(gen)) > 0.0);  // convexity
        }

        CHECK(std::abs(m.char_exponent(0.0)) == doctest::Approx(0.0).epsilon(1e-12));
        for (double u : {0.3, 1.7, 6.0}) {
            auto plus = m.char_exponent(u);
            auto minus = m.char_exponent(-u);
            CHECK(std::real(minus) == doctest::Approx(std::real(plus)).epsilon(1e-10));
            CHECK(std::imag(minus) == doctest::Approx(-std::imag(plus)).epsilon(1e-10));
        }
    }
}

}  // TEST_SUITE
