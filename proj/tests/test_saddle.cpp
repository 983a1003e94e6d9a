#include <doctest.h>

#include <cmath>
#include <random>

#include "outage/ppp.hpp"
#include "outage/saddle.hpp"

using namespace outage;

namespace {

GainLaw exp_gain{1.0, 1.0};

CgfModel poisson_omega(double lam1, double lam2, double theta, GainLaw g = exp_gain) {
    return omega_cgf({compound_poisson_cgf(lam1, gamma_gain_cgf(g)),
                      compound_poisson_cgf(lam2, gamma_gain_cgf(g)), theta});
}

CgfModel binomial_omega(int L, double p, double theta, GainLaw g = exp_gain) {
    return omega_cgf({compound_binomial_cgf(L, p, gamma_gain_cgf(g)),
                      compound_binomial_cgf(L, 1.0 - p, gamma_gain_cgf(g)), theta});
}

// Bracketing bisection on a monotone function, as an oracle for roots.
template <class F>
double bisect(F&& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((fm <= 0.0) == (flo <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("saddle") {

TEST_CASE("initial guess") {
    CHECK(initial_saddle_guess(2.0, 2.0, 5.0) == 0.0);
    CHECK(initial_saddle_guess(0.0, -2.0, 4.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(initial_saddle_guess(0.0, 0.0, 0.0), DomainError);

    SUBCASE("within 25% of the analytic saddle at the reference Poisson setting") {
        // lambda = 10, p = 0.7, theta = 1: guess = -k1/k2 = 4/20 = 0.2
        CgfModel om = poisson_omega(7.0, 3.0, 1.0);
        double guess = initial_saddle_guess(0.0, om.cumulant(1), om.cumulant(2));
        double exact = analytic_saddle_poisson_nakagami(7.0, 3.0, 1.0, exp_gain);
        CHECK(std::fabs(guess - exact) / std::fabs(exact) < 0.25);
    }
}

TEST_CASE("solve_saddle basics") {
    SUBCASE("gaussian is exact") {
        CgfModel k = normal_cgf(1.0, 2.0);
        auto s = solve_saddle(k, 2.0);
        CHECK(s.t_hat == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(s.k2 == doctest::Approx(2.0));
    }

    SUBCASE("symmetric law saddles at zero without iterating") {
        CgfModel om = omega_cgf({gamma_gain_cgf(exp_gain), gamma_gain_cgf(exp_gain), 1.0});
        auto s = solve_saddle(om, 0.0);
        CHECK(s.t_hat == 0.0);
        CHECK(s.iterations == 0);
    }

    SUBCASE("exp/exp theta=2 saddle is -1/4") {
        CgfModel om = omega_cgf({gamma_gain_cgf(exp_gain), gamma_gain_cgf(exp_gain), 2.0});
        auto s = solve_saddle(om, 0.0);
        CHECK(s.t_hat == doctest::Approx(-0.25).epsilon(1e-10));
        CHECK(om.derivative(1, s.t_hat) == doctest::Approx(0.0).epsilon(1e-11));
        // independent bisection on K'
        double ref = bisect([&](double t) { return om.derivative(1, t); }, -0.99, 0.49);
        CHECK(s.t_hat == doctest::Approx(ref).epsilon(1e-9));
    }

    SUBCASE("abscissa outside the range of K'") {
        CgfModel g = gamma_gain_cgf(exp_gain);  // K' > 0 on the whole strip
        CHECK_THROWS_AS(solve_saddle(g, -1.0), RangeError);
        try {
            solve_saddle(g, -1.0);
        } catch (const RangeError& e) {
            CHECK(e.attainable_lo > -1.0);  // reported interval excludes the request
        }
    }
}

TEST_CASE("round-trip and sign properties") {
    std::vector<CgfModel> models;
    models.push_back(gamma_gain_cgf(GainLaw{2.0, 3.0}));
    models.push_back(omega_cgf({gamma_gain_cgf(exp_gain), gamma_gain_cgf(exp_gain), 2.0}));
    models.push_back(poisson_omega(7.0, 3.0, 1.0));
    models.push_back(nig_cgf(NigParams{2.0, 1.0, 0.0, 1.0}));

    std::mt19937 gen(123);
    for (const auto& m : models) {
        ConvergenceStrip s = m.strip();
        double lo = std::max(s.lo, -20.0), hi = std::min(s.hi, 20.0);
        std::uniform_real_distribution<double> dist(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo));
        double kappa1 = m.cumulant(1);
        for (int i = 0; i < 20; ++i) {
            double t0 = dist(gen);
            double x = m.derivative(1, t0);
            auto sol = solve_saddle(m, x);
            CHECK(sol.t_hat == doctest::Approx(t0).epsilon(1e-9));
            CHECK(sol.c <= 1e-12);
            if (x != kappa1) {
                CHECK(sol.t_hat * (x - kappa1) >= 0.0);  // sgn(t) = sgn(x - k1)
                if (std::fabs(x - kappa1) > 1e-6) CHECK(sol.c < 0.0);
            }
        }
    }
}

TEST_CASE("analytic Poisson-Nakagami saddle") {
    CHECK(analytic_saddle_poisson_nakagami(5.0, 0.0, 1.3, exp_gain) == doctest::Approx(-1.0));
    // theta lam2 = lam1 puts the mean of Omega at zero
    CHECK(analytic_saddle_poisson_nakagami(6.0, 3.0, 2.0, exp_gain) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(analytic_saddle_poisson_nakagami(7.0, 3.0, 1.0, exp_gain) ==
          doctest::Approx(0.20871215252208009).epsilon(1e-10));

    SUBCASE("equals the numeric solver on a 5x5 grid") {
        for (double p : {0.3, 0.45, 0.6, 0.75, 0.9}) {
            for (double theta : {0.3, 0.6, 1.0, 2.0, 4.0}) {
                double lam1 = 10.0 * p, lam2 = 10.0 * (1.0 - p);
                double analytic = analytic_saddle_poisson_nakagami(lam1, lam2, theta, exp_gain);
                auto s = solve_saddle(poisson_omega(lam1, lam2, theta), 0.0);
                CHECK(std::fabs(analytic - s.t_hat) < 1e-10);
            }
        }
    }
}

TEST_CASE("binomial saddle residual") {
    GainLaw g = exp_gain;
    CHECK(binomial_saddle_residual(0.0, 10, 0.5, 1.0, g) == doctest::Approx(0.0));
    // q = 0: root at internal +beta/theta
    CHECK(binomial_saddle_residual(g.r_f / 2.0, 10, 1.0, 2.0, g) ==
          doctest::Approx(0.0).epsilon(1e-14));

    SUBCASE("residual root reproduces the numeric solver") {
        int L = 10;
        double p = 0.7, theta = 1.0;
        CgfModel om = binomial_omega(L, p, theta);
        auto s = solve_saddle(om, 0.0);
        double root = bisect([&](double t) { return -binomial_saddle_residual(t, L, p, theta, g); },
                             -0.9, 0.9);
        CHECK(root == doctest::Approx(s.t_hat).epsilon(1e-9));
    }

    SUBCASE("Rayleigh closed form equals the polynomial root") {
        for (double p : {0.3, 0.5, 0.7}) {
            for (double theta : {0.5, 1.0, 2.0}) {
                double closed = binomial_saddle_rayleigh(p, theta, g);
                double lo = -0.999, hi = 0.999 / theta;
                double root = bisect(
                    [&](double t) { return -binomial_saddle_residual(t, 10, p, theta, g); }, lo, hi);
                CHECK(std::fabs(closed - root) < 1e-9);
                // and both satisfy the model saddle equation
                auto s = solve_saddle(binomial_omega(10, p, theta), 0.0);
                CHECK(std::fabs(closed - s.t_hat) < 1e-9);
            }
        }
    }
}

TEST_CASE("approximate binomial saddle") {
    GainLaw g = exp_gain;
    CHECK(approx_saddle_binomial(10, 1.0, 2.0, g) == doctest::Approx(-g.r_f));       // q -> 0
    CHECK(approx_saddle_binomial(10, 0.0, 2.0, g) == doctest::Approx(g.r_f / 2.0));  // q -> 1

    // initialization quality vs the exact Rayleigh root: recorded, not asserted
    double approx = approx_saddle_binomial(10, 0.7, 1.0, g);
    double exact = binomial_saddle_rayleigh(0.7, 1.0, g);
    MESSAGE("binomial approx saddle gap: approx=", approx, " exact=", exact,
            " rel=", std::fabs(approx - exact) / std::fabs(exact));
}

TEST_CASE("approximate COMP saddle") {
    double a = 30.0, R = 150.0, alpha = 4.0, P = 1.0;

    SUBCASE("large-theta value scales as 1/theta") {
        double v1 = approx_saddle_comp(ThetaRegime::large_theta, a, R, alpha, P, 2.0, exp_gain);
        double v2 = approx_saddle_comp(ThetaRegime::large_theta, a, R, alpha, P, 4.0, exp_gain);
        CHECK(v1 == doctest::Approx(2.0 * v2).epsilon(1e-14));
    }

    SUBCASE("regime values and sides") {
        // small theta: positive (signal side); large theta: negative
        CHECK(approx_saddle_comp(ThetaRegime::small_theta, a, R, alpha, P, 0.5, exp_gain) > 0.0);
        CHECK(approx_saddle_comp(ThetaRegime::large_theta, a, R, alpha, P, 50.0, exp_gain) < 0.0);
        CHECK(approx_saddle_comp(ThetaRegime::small_theta, a, R, alpha, P, 1.0, exp_gain) ==
              doctest::Approx(3.0 * 0.5 * std::pow(a, 4)).epsilon(1e-14));
        CHECK(approx_saddle_comp_nofading(ThetaRegime::small_theta, a, R, alpha, P, 1.0) ==
              doctest::Approx(3.0 * std::pow(a, 4)).epsilon(1e-14));
    }

    SUBCASE("initializes the solver inside its bracket at the reference COMP point") {
        PppCompParams p;
        p.lam = 100.0 / (3.14159265358979323846 * 1e6);
        p.a = a;
        p.R = R;
        p.alpha_pl = alpha;
        p.P = P;
        p.gain = exp_gain;
        p.theta = 1.0;
        CgfModel k = ppp_comp_cgf(p);
        double init = approx_saddle_comp(ThetaRegime::small_theta, a, R, alpha, P, 1.0, exp_gain);
        auto s = solve_saddle(k, 0.0, init);
        CHECK(k.strip().contains(init));
        CHECK(std::fabs(k.derivative(1, s.t_hat)) <= 1e-12);
        MESSAGE("Newton iterations from the regime initialization: ", s.iterations);
        CHECK(s.iterations <= 15);
    }
}

}  // TEST_SUITE
