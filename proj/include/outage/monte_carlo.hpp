#ifndef OUTAGE_MONTE_CARLO_HPP
#define OUTAGE_MONTE_CARLO_HPP

// Monte Carlo outage estimators. Trials are grouped into fixed-size
// stream blocks; every block owns a counter-based generator keyed by
// (seed, block index) and outage indicators are reduced as integer
// counts, so the estimate is bit-identical for any worker count or
// scheduling order.
//
// Zero-signal draws (no cooperating point at all) count as outage for
// any theta > 0: the SIR of an empty cooperation set is taken to be 0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "outage/cgf.hpp"
#include "outage/errors.hpp"
#include "outage/ppp.hpp"

namespace outage {

struct McSettings {
    long long trials = 1000000;
    std::uint64_t seed = 1;
    double r_tot = 1000.0;          // outer simulation radius for PPP models, m
    long long stream_block = 16384; // trials per deterministic substream
};

struct McResult {
    double p_hat = 0.0;
    double ci_halfwidth = 0.0;  // 95% normal-approximation half-width
    long long trials = 0;
    bool tail_warning = false;  // interference beyond r_tot exceeds 1% of k1(Y)
};

// Counter-based generator: a splitmix64 walk keyed by (seed, stream).
// Serial within a stream, independent across streams.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) {
        state_ = mix(mix(seed + 0x9E3779B97F4A7C15ull) ^ mix(stream + 0xD1B54A32D192ED03ull));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    // Uniform on (0,1), never exactly 0 or 1.
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

    double exponential() { return -std::log(uniform()); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Exact Poisson sampling: product method below mean 30, Hormann's
    // PTRS transformed rejection above.
    long long poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 30.0) {
            double limit = std::exp(-mean);
            long long k = 0;
            double prod = uniform();
            while (prod > limit) {
                ++k;
                prod *= uniform();
            }
            return k;
        }
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mean = std::log(mean);
        for (;;) {
            double u = uniform() - 0.5;
            double v = uniform();
            double us = 0.5 - std::fabs(u);
            double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            double k = kf;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * log_mean - mean - std::lgamma(k + 1.0)) {
                return static_cast<long long>(kf);
            }
        }
    }

    // Gamma(shape, rate) via Marsaglia-Tsang; shape < 1 boosted.
    double gamma(double shape, double rate) {
        if (shape < 1.0) {
            double g = gamma(shape + 1.0, rate);
            return g * std::pow(uniform(), 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            double vv = t * t * t;
            double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * vv / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - vv + std::log(vv))) return d * vv / rate;
        }
    }

    double gain_draw(const GainLaw& g) {
        if (g.m_f == 1.0) return exponential() / g.r_f;
        return gamma(g.m_f, g.r_f);
    }

    long long binomial(int n, double p) {
        long long k = 0;
        for (int i = 0; i < n; ++i) {
            if (uniform() < p) ++k;
        }
        return k;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

namespace detail {

// Runs `trial` over stream blocks on `threads` workers and reduces the
// integer outage counts. `trial(rng) -> bool` must consume randomness
// only through the supplied generator.
template <class Trial>
McResult run_blocks(const McSettings& mc, int threads, Trial&& trial) {
    if (mc.trials < 1) throw DomainError("monte carlo: trials must be >= 1");
    if (mc.stream_block < 1) throw DomainError("monte carlo: stream_block must be >= 1");
    const long long n_blocks = (mc.trials + mc.stream_block - 1) / mc.stream_block;
    threads = std::max(1, threads);

    std::vector<long long> partial(static_cast<std::size_t>(threads), 0);
    auto work = [&](int worker) {
        long long count = 0;
        for (long long b = worker; b < n_blocks; b += threads) {
            CounterRng rng(mc.seed, static_cast<std::uint64_t>(b));
            long long first = b * mc.stream_block;
            long long last = std::min(first + mc.stream_block, mc.trials);
            for (long long i = first; i < last; ++i) {
                if (trial(rng)) ++count;
            }
        }
        partial[static_cast<std::size_t>(worker)] = count;
    };

    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    long long hits = 0;
    for (long long c : partial) hits += c;

    McResult r;
    r.trials = mc.trials;
    r.p_hat = static_cast<double>(hits) / static_cast<double>(mc.trials);
    r.ci_halfwidth = 1.959963984540054 *
                     std::sqrt(std::max(0.0, r.p_hat * (1.0 - r.p_hat)) /
                               static_cast<double>(mc.trials));
    return r;
}

}  // namespace detail

enum class Aggregation { poisson, binomial };

// Compound aggregation models: signal X sums M gains, interference Y
// sums N gains; M ~ Poisson(lam1), N ~ Poisson(lam2) or M ~ Bin(L, p),
// N ~ Bin(L, 1-p) drawn independently, matching the independence the
// analytic CGF assumes.
inline McResult mc_outage_compound(Aggregation agg, double lam1, double lam2, int count,
                                   double p, const GainLaw& gain, double theta,
                                   const McSettings& mc, int threads = 1) {
    gain.validate();
    if (!(theta > 0.0)) throw DomainError("mc_outage_compound: theta must be positive");
    auto trial = [&](CounterRng& rng) -> bool {
        long long m, n;
        if (agg == Aggregation::poisson) {
            m = rng.poisson(lam1);
            n = rng.poisson(lam2);
        } else {
            m = rng.binomial(count, p);
            n = rng.binomial(count, 1.0 - p);
        }
        double x = 0.0, y = 0.0;
        for (long long i = 0; i < m; ++i) x += rng.gain_draw(gain);
        for (long long i = 0; i < n; ++i) y += rng.gain_draw(gain);
        return (theta * y - x > 0.0) || (m == 0 && n == 0);
    };
    return detail::run_blocks(mc, threads, trial);
}

// PPP COMP model on the disc of radius r_tot: cooperating points in
// [a, R), interferers in [R, r_tot). Radii by inverse CDF of the area
// measure; gains Gamma(m_f, r_f) or exactly 1 when fading is off.
inline McResult mc_outage_ppp_comp(const PppCompParams& p, bool fading, const McSettings& mc,
                                   int threads = 1) {
    p.validate();
    if (!(mc.r_tot > p.R)) throw DomainError("mc_outage_ppp_comp: r_tot must exceed R");
    const double mean_coop = p.lam * 3.14159265358979323846 * (p.R * p.R - p.a * p.a);
    const double mean_intf = p.lam * 3.14159265358979323846 * (mc.r_tot * mc.r_tot - p.R * p.R);
    const double half_alpha = 0.5 * p.alpha_pl;
    const bool alpha_is_4 = p.alpha_pl == 4.0;

    auto path_gain = [&](double r2) {
        return alpha_is_4 ? 1.0 / (r2 * r2) : std::pow(r2, -half_alpha);
    };

    auto trial = [&](CounterRng& rng) -> bool {
        long long nc = rng.poisson(mean_coop);
        long long ni = rng.poisson(mean_intf);
        double x = 0.0, y = 0.0;
        for (long long i = 0; i < nc; ++i) {
            double r2 = p.a * p.a + rng.uniform() * (p.R * p.R - p.a * p.a);
            double g = fading ? rng.gain_draw(p.gain) : 1.0;
            x += g * p.P * path_gain(r2);
        }
        for (long long i = 0; i < ni; ++i) {
            double r2 = p.R * p.R + rng.uniform() * (mc.r_tot * mc.r_tot - p.R * p.R);
            double g = fading ? rng.gain_draw(p.gain) : 1.0;
            y += g * p.P * path_gain(r2);
        }
        return (p.theta * y - x > 0.0) || (nc == 0 && ni == 0);
    };

    McResult r = detail::run_blocks(mc, threads, trial);
    // Interference mean ignored beyond r_tot, as a fraction of k1(Y).
    double missing = std::pow(p.R / mc.r_tot, p.alpha_pl - 2.0);
    r.tail_warning = missing > 0.01;
    return r;
}

}  // namespace outage

#endif  // OUTAGE_MONTE_CARLO_HPP
