#ifndef OUTAGE_RUNNER_HPP
#define OUTAGE_RUNNER_HPP

// Evaluation drivers behind the CLI verbs: single-point outage with any
// method (SPA bases, Gil-Pelaez, Monte Carlo), grid sweeps with CSV
// emission, and method-comparison reports against a designated
// reference. CSV numbers print through a fixed %.12g format so output
// is byte-identical across runs for identical configuration and seed;
// wall times are emitted only on request, since they never reproduce.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "outage/scenario.hpp"

namespace outage {

struct OutageResult {
    bool ok = false;
    std::string error;

    double p_out = 0.0;
    double raw = 0.0;               // unclamped value (SPA methods)
    Method method_requested = Method::auto_spa;
    BaseKind method_used = BaseKind::normal;  // SPA methods only
    bool is_spa = false;
    bool fell_back = false;
    ConditionReport condition;

    double err_est = 0.0;           // oracle methods
    bool unstable = false;          // gil_pelaez
    double ci_halfwidth = 0.0;      // mc
    bool tail_warning = false;      // mc on PPP models

    double wall_time_ms = 0.0;
};

inline OutageResult run_outage(const Scenario& sc, int threads = 1) {
    OutageResult out;
    out.method_requested = sc.method;
    auto start = std::chrono::steady_clock::now();
    try {
        sc.validate();
        switch (sc.method) {
            case Method::gil_pelaez: {
                CgfModel omega = build_cgf(sc);
                auto r = gil_pelaez_ccdf(omega, -sc.theta() * sc.sigma2, sc.inversion_settings());
                out.p_out = std::clamp(r.value, 0.0, 1.0);
                out.raw = r.value;
                out.err_est = r.err_est;
                out.unstable = r.unstable;
                break;
            }
            case Method::mc: {
                McResult r;
                if (sc.model == ModelKind::poisson_nakagami) {
                    r = mc_outage_compound(Aggregation::poisson, sc.p * sc.lambda,
                                           (1.0 - sc.p) * sc.lambda, sc.L, sc.p, sc.gain(),
                                           sc.theta(), sc.mc_settings(), threads);
                } else if (sc.model == ModelKind::binomial_nakagami) {
                    r = mc_outage_compound(Aggregation::binomial, 0.0, 0.0, sc.L, sc.p,
                                           sc.gain(), sc.theta(), sc.mc_settings(), threads);
                } else {
                    bool fading = sc.model == ModelKind::ppp_comp;
                    r = mc_outage_ppp_comp(ppp_params(sc), fading, sc.mc_settings(), threads);
                }
                out.p_out = r.p_hat;
                out.raw = r.p_hat;
                out.ci_halfwidth = r.ci_halfwidth;
                out.tail_warning = r.tail_warning;
                break;
            }
            default: {
                CgfModel omega = build_cgf(sc);
                OutageEstimate est = spa_outage(omega, sc.theta(), sc.sigma2, sc.base_request());
                out.p_out = est.p_out;
                out.raw = est.raw;
                out.is_spa = true;
                out.method_used = est.spa.method_used;
                out.fell_back = est.spa.fell_back;
                out.condition = est.spa.condition;
                break;
            }
        }
        out.ok = true;
    } catch (const Error& e) {
        out.error = e.what();
    }
    auto stop = std::chrono::steady_clock::now();
    out.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return out;
}

struct SweepSpec {
    std::string field;
    double from = 0.0;
    double to = 0.0;
    int steps = 1;       // number of grid points
    bool log_scale = false;
};

struct SweepOptions {
    std::vector<Method> methods{Method::auto_spa};
    int threads = 1;
    bool timing = false;  // emit wall_time_ms (breaks byte-reproducibility)
};

namespace detail {

inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::vector<double> sweep_grid(const SweepSpec& sw) {
    if (sw.steps < 1) throw ConfigError("sweep: steps must be >= 1");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(sw.steps));
    if (sw.steps == 1) {
        grid.push_back(sw.from);
        return grid;
    }
    if (sw.log_scale) {
        if (!(sw.from > 0.0) || !(sw.to > 0.0)) throw ConfigError("sweep: log scale needs positive bounds");
        double la = std::log(sw.from), lb = std::log(sw.to);
        for (int i = 0; i < sw.steps; ++i) {
            grid.push_back(std::exp(la + (lb - la) * i / (sw.steps - 1)));
        }
    } else {
        for (int i = 0; i < sw.steps; ++i) {
            grid.push_back(sw.from + (sw.to - sw.from) * i / (sw.steps - 1));
        }
    }
    return grid;
}

inline void apply_sweep_value(Scenario& sc, const std::string& field, double v) {
    if (field == "method" || field == "model") {
        throw ConfigError("sweep: field '" + field + "' is not sweepable");
    }
    if (field == "L") {
        sc.L = static_cast<int>(std::llround(v));
        return;
    }
    std::ostringstream os;
    os.precision(17);
    os << v;
    apply_scenario_key(sc, field, os.str());
}

}  // namespace detail

inline const std::string kCsvHeader =
    "model,method,sweep_field,sweep_value,theta_db,p_out,raw,fell_back,reference,"
    "abs_err_vs_reference,unstable,wall_time_ms";

// One CSV row; empty strings stand for missing numeric cells.
inline std::string csv_row(const Scenario& sc, Method method, const std::string& sweep_field,
                           const std::string& sweep_value, const OutageResult& r,
                           bool have_ref, Method ref_method, double ref_value, bool timing) {
    std::ostringstream os;
    os << to_string(sc.model) << ',' << to_string(method) << ',' << sweep_field << ','
       << sweep_value << ',' << detail::fmt_num(sc.theta_db) << ',';
    if (r.ok) os << detail::fmt_num(r.p_out);
    os << ',';
    if (r.ok) os << detail::fmt_num(r.raw);
    os << ',';
    os << (r.fell_back ? "true" : "false") << ',';
    if (have_ref) os << to_string(ref_method);
    os << ',';
    if (have_ref && r.ok && method != ref_method) os << detail::fmt_num(std::fabs(r.p_out - ref_value));
    os << ',';
    os << (r.unstable ? "true" : "false") << ',';
    if (timing) os << detail::fmt_num(r.wall_time_ms);
    return os.str();
}

// Evaluates every requested method on every grid point; rows come out
// in grid order (methods inner) regardless of how evaluation fans out.
// Failed rows keep their slot with empty value cells.
inline std::string run_sweep_csv(const Scenario& base, const SweepSpec& sw,
                                 const SweepOptions& opt) {
    base.validate();
    std::vector<double> grid = detail::sweep_grid(sw);
    {
        // field must exist and both bounds must keep the scenario valid
        Scenario probe = base;
        detail::apply_sweep_value(probe, sw.field, grid.front());
        probe.validate();
        detail::apply_sweep_value(probe, sw.field, grid.back());
        probe.validate();
    }

    struct Cell {
        Scenario sc;
        Method method;
        OutageResult result;
    };
    std::vector<Cell> cells;
    for (double v : grid) {
        Scenario sc = base;
        detail::apply_sweep_value(sc, sw.field, v);
        for (Method m : opt.methods) {
            Scenario msc = sc;
            msc.method = m;
            cells.push_back(Cell{msc, m, {}});
        }
    }

    const int workers = std::max(1, opt.threads);
    if (workers == 1) {
        for (auto& c : cells) c.result = run_outage(c.sc, 1);
    } else {
        std::vector<std::future<void>> futs;
        std::size_t next = 0;
        // chunked fan-out; results land in pre-assigned slots, so output
        // order never depends on completion order
        std::mutex mu;
        auto worker = [&]() {
            for (;;) {
                std::size_t i;
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (next >= cells.size()) return;
                    i = next++;
                }
                cells[i].result = run_outage(cells[i].sc, 1);
            }
        };
        futs.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) futs.push_back(std::async(std::launch::async, worker));
        for (auto& f : futs) f.get();
    }

    // Reference per grid point: gil_pelaez when evaluated and stable,
    // otherwise mc when present.
    std::ostringstream os;
    os << kCsvHeader << '\n';
    const std::size_t per_point = opt.methods.size();
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        bool have_ref = false;
        Method ref_method = Method::gil_pelaez;
        double ref_value = 0.0;
        const Cell* gp = nullptr;
        const Cell* mc = nullptr;
        for (std::size_t mi = 0; mi < per_point; ++mi) {
            const Cell& c = cells[gi * per_point + mi];
            if (c.method == Method::gil_pelaez && c.result.ok) gp = &c;
            if (c.method == Method::mc && c.result.ok) mc = &c;
        }
        if (gp && !gp->result.unstable) {
            have_ref = true;
            ref_method = Method::gil_pelaez;
            ref_value = gp->result.p_out;
        } else if (mc) {
            have_ref = true;
            ref_method = Method::mc;
            ref_value = mc->result.p_out;
        } else if (gp) {
            have_ref = true;
            ref_method = Method::gil_pelaez;
            ref_value = gp->result.p_out;
        }
        for (std::size_t mi = 0; mi < per_point; ++mi) {
            const Cell& c = cells[gi * per_point + mi];
            os << csv_row(c.sc, c.method, sw.field, detail::fmt_num(grid[gi]), c.result,
                          have_ref, ref_method, ref_value, opt.timing)
               << '\n';
        }
    }
    return os.str();
}

struct CompareRow {
    Method method;
    OutageResult result;
    bool is_reference = false;
    double abs_err = 0.0;  // vs reference; 0 for the reference row
};

struct CompareReport {
    Method reference = Method::gil_pelaez;
    bool reference_switched = false;  // gil_pelaez unstable, mc took over
    std::vector<CompareRow> rows;

    std::string to_table() const {
        std::ostringstream os;
        os << "method        p_out            |err| vs ref     fell_back  notes\n";
        for (const auto& r : rows) {
            char line[160];
            std::string notes;
            if (r.is_reference) notes = "reference";
            if (r.result.unstable) notes += (notes.empty() ? "" : ", ") + std::string("unstable");
            if (!r.result.ok) notes = "error: " + r.result.error;
            std::snprintf(line, sizeof(line), "%-13s %-16s %-16s %-10s %s\n",
                          to_string(r.method),
                          r.result.ok ? detail::fmt_num(r.result.p_out).c_str() : "",
                          (r.result.ok && !r.is_reference) ? detail::fmt_num(r.abs_err).c_str() : "",
                          r.result.fell_back ? "true" : "false", notes.c_str());
            os << line;
        }
        return os.str();
    }
};

// Evaluates each method once; the reference is gil_pelaez unless it
// reports unstable, in which case mc (run on demand) takes over.
inline CompareReport run_compare(const Scenario& base, const std::vector<Method>& methods,
                                 int threads = 1) {
    base.validate();
    CompareReport rep;
    bool have_mc = false;
    for (Method m : methods) {
        Scenario sc = base;
        sc.method = m;
        CompareRow row;
        row.method = m;
        row.result = run_outage(sc, threads);
        if (m == Method::mc) have_mc = true;
        rep.rows.push_back(std::move(row));
    }
    // Make sure a reference exists.
    auto find = [&](Method m) -> CompareRow* {
        for (auto& r : rep.rows) {
            if (r.method == m && r.result.ok) return &r;
        }
        return nullptr;
    };
    CompareRow* gp = find(Method::gil_pelaez);
    if (!gp) {
        Scenario sc = base;
        sc.method = Method::gil_pelaez;
        CompareRow row;
        row.method = Method::gil_pelaez;
        row.result = run_outage(sc, threads);
        rep.rows.push_back(std::move(row));
        gp = find(Method::gil_pelaez);
    }
    CompareRow* ref = gp;
    if (gp && gp->result.ok && gp->result.unstable) {
        CompareRow* mc = find(Method::mc);
        if (!mc && !have_mc) {
            Scenario sc = base;
            sc.method = Method::mc;
            CompareRow row;
            row.method = Method::mc;
            row.result = run_outage(sc, threads);
            rep.rows.push_back(std::move(row));
            mc = find(Method::mc);
        }
        if (mc) {
            ref = mc;
            rep.reference_switched = true;
        }
    }
    if (ref && ref->result.ok) {
        rep.reference = ref->method;
        ref->is_reference = true;
        for (auto& r : rep.rows) {
            if (!r.is_reference && r.result.ok) {
                r.abs_err = std::fabs(r.result.p_out - ref->result.p_out);
            }
        }
    }
    return rep;
}

}  // namespace outage

#endif  // OUTAGE_RUNNER_HPP
