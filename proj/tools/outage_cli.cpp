// Command-line front end: single-point outage evaluation, parameter
// sweeps with CSV emission, method comparison against an oracle
// reference, and direct oracle runs.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure in
// a non-sweep command (sweep flags failed rows and continues).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "outage/outage.hpp"

namespace {

using namespace outage;

struct CommonArgs {
    std::string config_path;
    std::string scenario_name;
    std::string out_path;
    int threads = 1;
    bool timing = false;
    std::vector<std::pair<std::string, std::string>> overrides;
};

Scenario load_scenario(const CommonArgs& args) {
    Scenario sc;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw ConfigError("cannot open config file '" + args.config_path + "'");
        auto scenarios = parse_scenario_config(in);
        if (scenarios.empty()) throw ConfigError("config file defines no scenario");
        if (args.scenario_name.empty()) {
            sc = scenarios.front().scenario;
        } else {
            bool found = false;
            for (const auto& ns : scenarios) {
                if (ns.name == args.scenario_name) {
                    sc = ns.scenario;
                    found = true;
                    break;
                }
            }
            if (!found) throw ConfigError("scenario '" + args.scenario_name + "' not in config");
        }
    }
    for (const auto& [key, value] : args.overrides) {
        apply_scenario_key(sc, key, value);
    }
    sc.validate();
    return sc;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario config file (INI-style key=value)");
    cmd->add_option("--scenario", args.scenario_name, "section name inside the config file");
    cmd->add_option("--out", args.out_path, "write CSV to this path");
    cmd->add_option("--threads", args.threads, "worker threads for sweeps / Monte Carlo")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--timing", args.timing, "fill the wall_time_ms CSV column");
    // every scenario key doubles as a flag: --set model=ppp_comp etc.
    cmd->add_option_function<std::vector<std::string>>(
        "--set",
        [&args](const std::vector<std::string>& kvs) {
            for (const auto& kv : kvs) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) throw CLI::ValidationError("--set expects key=value");
                args.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
            }
        },
        "scenario key override, key=value (repeatable)");
}

void add_named_overrides(CLI::App* cmd, CommonArgs& args) {
    static const char* keys[] = {"model",  "theta_db", "sigma2",   "lambda",      "p",
                                 "L",      "m_f",      "r_f",      "a_m",         "R_m",
                                 "alpha_pl", "power_db", "r_tot_m", "avg_bs_count", "method",
                                 "trials", "seed",     "stream_block", "inv_abs_tol", "inv_rel_tol",
                                 "max_panels"};
    for (const char* key : keys) {
        std::string name = std::string("--") + key;
        cmd->add_option_function<std::string>(
            name,
            [&args, key](const std::string& v) { args.overrides.emplace_back(key, v); },
            std::string("scenario key ") + key);
    }
}

void write_output(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << text;
}

std::string single_row_csv(const Scenario& sc, const OutageResult& r, bool timing) {
    std::string csv = kCsvHeader + "\n";
    csv += csv_row(sc, sc.method, "", "", r, false, Method::gil_pelaez, 0.0, timing) + "\n";
    return csv;
}

int run_outage_cmd(const CommonArgs& args) {
    Scenario sc = load_scenario(args);
    OutageResult r = run_outage(sc, args.threads);
    if (!r.ok) {
        std::cerr << "numerical failure: " << r.error << "\n";
        return 3;
    }
    std::printf("model=%s method=%s theta_db=%g\n", to_string(sc.model), to_string(sc.method),
                sc.theta_db);
    std::printf("p_out=%.10g raw=%.10g\n", r.p_out, r.raw);
    if (r.is_spa) {
        std::printf("base_used=%s fell_back=%s", to_string(r.method_used),
                    r.fell_back ? "true" : "false");
        if (!r.condition.violation.empty()) {
            std::printf(" violated=\"%s\"", r.condition.violation.c_str());
        }
        if (r.condition.has_v) std::printf(" v=%.8g", r.condition.v);
        std::printf("\n");
        std::printf("c=%.6g eta=%.6g rho=%.6g\n", r.condition.c, r.condition.eta, r.condition.rho);
    }
    if (sc.method == Method::gil_pelaez) {
        std::printf("err_est=%.3g unstable=%s\n", r.err_est, r.unstable ? "true" : "false");
    }
    if (sc.method == Method::mc) {
        std::printf("ci_halfwidth=%.3g\n", r.ci_halfwidth);
        if (r.tail_warning) {
            std::fprintf(stderr,
                         "warning: interference beyond r_tot exceeds 1%% of the interference mean; "
                         "consider a larger r_tot_m\n");
        }
    }
    if (!args.out_path.empty()) write_output(args.out_path, single_row_csv(sc, r, args.timing));
    return 0;
}

std::vector<Method> parse_methods(const std::string& list) {
    std::vector<Method> methods;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        auto comma = list.find(',', pos);
        std::string tok = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) {
            Scenario probe;
            apply_scenario_key(probe, "method", tok);
            methods.push_back(probe.method);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (methods.empty()) throw ConfigError("empty method list");
    return methods;
}

int run_sweep_cmd(const CommonArgs& args, const SweepSpec& sw, const std::string& methods) {
    Scenario sc = load_scenario(args);
    SweepOptions opt;
    opt.methods = methods.empty() ? std::vector<Method>{sc.method} : parse_methods(methods);
    opt.threads = args.threads;
    opt.timing = args.timing;
    std::string csv = run_sweep_csv(sc, sw, opt);
    if (args.out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        write_output(args.out_path, csv);
    }
    return 0;
}

int run_compare_cmd(const CommonArgs& args, const std::string& methods) {
    Scenario sc = load_scenario(args);
    std::vector<Method> list = parse_methods(methods);
    CompareReport rep = run_compare(sc, list, args.threads);
    std::fputs(rep.to_table().c_str(), stdout);
    bool any_failed = false;
    for (const auto& row : rep.rows) any_failed |= !row.result.ok;
    if (!args.out_path.empty()) {
        std::string csv = kCsvHeader + "\n";
        double ref_value = 0.0;
        for (const auto& row : rep.rows) {
            if (row.is_reference) ref_value = row.result.p_out;
        }
        for (const auto& row : rep.rows) {
            Scenario msc = sc;
            msc.method = row.method;
            csv += csv_row(msc, row.method, "", "", row.result, true, rep.reference, ref_value,
                           args.timing) +
                   "\n";
        }
        write_output(args.out_path, csv);
    }
    return any_failed ? 3 : 0;
}

int run_oracle_cmd(const CommonArgs& args) {
    Scenario sc = load_scenario(args);
    Scenario gp = sc;
    gp.method = Method::gil_pelaez;
    OutageResult rg = run_outage(gp, args.threads);
    Scenario mc = sc;
    mc.method = Method::mc;
    OutageResult rm = run_outage(mc, args.threads);
    if (rg.ok) {
        std::printf("gil_pelaez p_out=%.10g err_est=%.3g unstable=%s\n", rg.p_out, rg.err_est,
                    rg.unstable ? "true" : "false");
    } else {
        std::printf("gil_pelaez failed: %s\n", rg.error.c_str());
    }
    if (rm.ok) {
        std::printf("mc         p_out=%.10g ci=%.3g trials=%lld\n", rm.p_out, rm.ci_halfwidth,
                    sc.trials);
        if (rm.tail_warning) {
            std::fprintf(stderr, "warning: interference beyond r_tot exceeds 1%% of the "
                                 "interference mean\n");
        }
    } else {
        std::printf("mc failed: %s\n", rm.error.c_str());
    }
    return (rg.ok && rm.ok) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SINR/SIR outage probabilities via saddle point approximation"};
    app.require_subcommand(1);

    CommonArgs a_outage, a_sweep, a_compare, a_oracle;
    SweepSpec sweep;
    std::string sweep_methods, compare_methods = "auto,gil_pelaez";
    std::string scale = "linear";

    CLI::App* c_outage = app.add_subcommand("outage", "evaluate one scenario");
    add_common(c_outage, a_outage);
    add_named_overrides(c_outage, a_outage);

    CLI::App* c_sweep = app.add_subcommand("sweep", "sweep one scenario field, emit CSV");
    add_common(c_sweep, a_sweep);
    add_named_overrides(c_sweep, a_sweep);
    c_sweep->add_option("--sweep", sweep.field, "field to sweep")->required();
    c_sweep->add_option("--from", sweep.from, "first grid value")->required();
    c_sweep->add_option("--to", sweep.to, "last grid value")->required();
    c_sweep->add_option("--steps", sweep.steps, "number of grid points")->required();
    c_sweep->add_option("--scale", scale, "linear|log")->check(CLI::IsMember({"linear", "log"}));
    c_sweep->add_option("--methods", sweep_methods, "comma-separated method list");

    CLI::App* c_compare = app.add_subcommand("compare", "compare methods against a reference");
    add_common(c_compare, a_compare);
    add_named_overrides(c_compare, a_compare);
    c_compare->add_option("--methods", compare_methods, "comma-separated method list (>= 2)");

    CLI::App* c_oracle = app.add_subcommand("oracle", "run both oracles on one scenario");
    add_common(c_oracle, a_oracle);
    add_named_overrides(c_oracle, a_oracle);

    try {
        app.parse(argc, argv);
        if (*c_outage) return run_outage_cmd(a_outage);
        if (*c_sweep) {
            sweep.log_scale = scale == "log";
            return run_sweep_cmd(a_sweep, sweep, sweep_methods);
        }
        if (*c_compare) return run_compare_cmd(a_compare, compare_methods);
        if (*c_oracle) return run_oracle_cmd(a_oracle);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
