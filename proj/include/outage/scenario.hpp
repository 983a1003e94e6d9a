#ifndef OUTAGE_SCENARIO_HPP
#define OUTAGE_SCENARIO_HPP

// Experiment description shared by the CLI and the test drivers: one of
// the four wireless models plus threshold, method selection and oracle
// settings. Scenarios parse from flat INI-style key=value text (one
// optional [section] per scenario) with exactly the field names below;
// unknown keys are errors. dB quantities convert at the point of use.

#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "outage/cgf.hpp"
#include "outage/errors.hpp"
#include "outage/gil_pelaez.hpp"
#include "outage/monte_carlo.hpp"
#include "outage/ppp.hpp"
#include "outage/spa.hpp"

namespace outage {

enum class ModelKind { poisson_nakagami, binomial_nakagami, ppp_comp, ppp_comp_nofading };
enum class Method { auto_spa, nig, sym_nig, normal, gil_pelaez, mc };

inline const char* to_string(ModelKind m) {
    switch (m) {
        case ModelKind::poisson_nakagami: return "poisson_nakagami";
        case ModelKind::binomial_nakagami: return "binomial_nakagami";
        case ModelKind::ppp_comp: return "ppp_comp";
        default: return "ppp_comp_nofading";
    }
}

inline const char* to_string(Method m) {
    switch (m) {
        case Method::auto_spa: return "auto";
        case Method::nig: return "nig";
        case Method::sym_nig: return "sym_nig";
        case Method::normal: return "normal";
        case Method::gil_pelaez: return "gil_pelaez";
        default: return "mc";
    }
}

struct Scenario {
    ModelKind model = ModelKind::poisson_nakagami;
    double theta_db = 0.0;
    double sigma2 = 0.0;

    // compound models
    double lambda = 10.0;  // total Poisson intensity; lam1 = p lambda, lam2 = (1-p) lambda
    double p = 0.7;        // cooperation probability
    int L = 10;            // binomial node count

    // fading
    double m_f = 1.0;
    double r_f = 1.0;

    // PPP COMP geometry
    double a_m = 30.0;
    double R_m = 150.0;
    double alpha_pl = 4.0;
    double power_db = 0.0;
    double r_tot_m = 1000.0;
    double avg_bs_count = 0.0;  // when > 0, intensity = avg_bs_count / (pi r_tot^2)

    Method method = Method::auto_spa;

    // oracle settings
    long long trials = 100000;
    std::uint64_t seed = 1;
    long long stream_block = 16384;
    double inv_abs_tol = 1e-9;
    double inv_rel_tol = 1e-7;
    int max_panels = 1 << 14;

    double theta() const { return std::pow(10.0, theta_db / 10.0); }
    double power() const { return std::pow(10.0, power_db / 10.0); }
    GainLaw gain() const { return GainLaw{m_f, r_f}; }

    double intensity() const {
        if (avg_bs_count > 0.0) {
            return avg_bs_count / (3.14159265358979323846 * r_tot_m * r_tot_m);
        }
        return lambda;
    }

    BaseRequest base_request() const {
        switch (method) {
            case Method::nig: return BaseRequest::asymmetric_nig;
            case Method::sym_nig: return BaseRequest::symmetric_nig;
            case Method::normal: return BaseRequest::normal;
            default: return BaseRequest::auto_chain;
        }
    }

    InversionSettings inversion_settings() const {
        InversionSettings s;
        s.abs_tol = inv_abs_tol;
        s.rel_tol = inv_rel_tol;
        s.max_panels = max_panels;
        return s;
    }

    McSettings mc_settings() const {
        McSettings s;
        s.trials = trials;
        s.seed = seed;
        s.r_tot = r_tot_m;
        s.stream_block = stream_block;
        return s;
    }

    void validate() const {
        if (!std::isfinite(theta_db)) throw ConfigError("theta_db: must be finite");
        if (!(theta() > 0.0)) throw ConfigError("theta_db: resulting theta must be positive");
        if (sigma2 < 0.0) throw ConfigError("sigma2: must be nonnegative");
        if (!(m_f > 0.0)) throw ConfigError("m_f: must be positive");
        if (!(r_f > 0.0)) throw ConfigError("r_f: must be positive");
        switch (model) {
            case ModelKind::poisson_nakagami:
                if (!(lambda > 0.0)) throw ConfigError("lambda: must be positive");
                if (p < 0.0 || p > 1.0) throw ConfigError("p: must be in [0,1]");
                break;
            case ModelKind::binomial_nakagami:
                if (L < 1) throw ConfigError("L: must be >= 1");
                if (p < 0.0 || p > 1.0) throw ConfigError("p: must be in [0,1]");
                break;
            case ModelKind::ppp_comp:
            case ModelKind::ppp_comp_nofading:
                if (!(a_m > 0.0) || !(R_m > a_m) || !(r_tot_m > R_m)) {
                    throw ConfigError("geometry: need 0 < a_m < R_m < r_tot_m");
                }
                if (!(alpha_pl > 2.0)) throw ConfigError("alpha_pl: must exceed 2");
                if (!(intensity() > 0.0)) throw ConfigError("lambda/avg_bs_count: intensity must be positive");
                break;
        }
        if (trials < 1) throw ConfigError("trials: must be >= 1");
        if (stream_block < 1) throw ConfigError("stream_block: must be >= 1");
        if (!(inv_abs_tol > 0.0) || !(inv_rel_tol > 0.0)) throw ConfigError("inversion tolerances must be positive");
        if (max_panels < 16) throw ConfigError("max_panels: must be >= 16");
    }
};

inline PppCompParams ppp_params(const Scenario& sc) {
    PppCompParams p;
    p.lam = sc.intensity();
    p.a = sc.a_m;
    p.R = sc.R_m;
    p.alpha_pl = sc.alpha_pl;
    p.P = sc.power();
    p.gain = sc.gain();
    p.theta = sc.theta();
    return p;
}

// Omega CGF for the scenario's model.
inline CgfModel build_cgf(const Scenario& sc) {
    sc.validate();
    switch (sc.model) {
        case ModelKind::poisson_nakagami: {
            CgfModel g = gamma_gain_cgf(sc.gain());
            CgfModel x = compound_poisson_cgf(std::max(sc.p * sc.lambda, 1e-300), g);
            CgfModel y = compound_poisson_cgf(std::max((1.0 - sc.p) * sc.lambda, 1e-300), g);
            return omega_cgf({x, y, sc.theta()});
        }
        case ModelKind::binomial_nakagami: {
            CgfModel g = gamma_gain_cgf(sc.gain());
            CgfModel x = compound_binomial_cgf(sc.L, sc.p, g);
            CgfModel y = compound_binomial_cgf(sc.L, 1.0 - sc.p, g);
            return omega_cgf({x, y, sc.theta()});
        }
        case ModelKind::ppp_comp:
            return ppp_comp_cgf(ppp_params(sc));
        default:
            return nofading_cgf(ppp_params(sc));
    }
}

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline ModelKind parse_model(const std::string& v) {
    if (v == "poisson_nakagami") return ModelKind::poisson_nakagami;
    if (v == "binomial_nakagami") return ModelKind::binomial_nakagami;
    if (v == "ppp_comp") return ModelKind::ppp_comp;
    if (v == "ppp_comp_nofading") return ModelKind::ppp_comp_nofading;
    throw ConfigError("model: unknown value '" + v + "'");
}

inline Method parse_method(const std::string& v) {
    if (v == "auto") return Method::auto_spa;
    if (v == "nig") return Method::nig;
    if (v == "sym_nig") return Method::sym_nig;
    if (v == "normal") return Method::normal;
    if (v == "gil_pelaez") return Method::gil_pelaez;
    if (v == "mc") return Method::mc;
    throw ConfigError("method: unknown value '" + v + "'");
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + v + "'");
    }
}

inline long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long n = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + v + "'");
    }
}

}  // namespace detail

// Assign one key=value pair; throws ConfigError for unknown keys.
inline void apply_scenario_key(Scenario& sc, const std::string& key, const std::string& value) {
    using detail::parse_double;
    using detail::parse_int;
    if (key == "model") sc.model = detail::parse_model(value);
    else if (key == "theta_db") sc.theta_db = parse_double(key, value);
    else if (key == "sigma2") sc.sigma2 = parse_double(key, value);
    else if (key == "lambda") sc.lambda = parse_double(key, value);
    else if (key == "p") sc.p = parse_double(key, value);
    else if (key == "L") sc.L = static_cast<int>(parse_int(key, value));
    else if (key == "m_f") sc.m_f = parse_double(key, value);
    else if (key == "r_f") sc.r_f = parse_double(key, value);
    else if (key == "a_m") sc.a_m = parse_double(key, value);
    else if (key == "R_m") sc.R_m = parse_double(key, value);
    else if (key == "alpha_pl") sc.alpha_pl = parse_double(key, value);
    else if (key == "power_db") sc.power_db = parse_double(key, value);
    else if (key == "r_tot_m") sc.r_tot_m = parse_double(key, value);
    else if (key == "avg_bs_count") sc.avg_bs_count = parse_double(key, value);
    else if (key == "method") sc.method = detail::parse_method(value);
    else if (key == "trials") sc.trials = parse_int(key, value);
    else if (key == "seed") sc.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "stream_block") sc.stream_block = parse_int(key, value);
    else if (key == "inv_abs_tol") sc.inv_abs_tol = parse_double(key, value);
    else if (key == "inv_rel_tol") sc.inv_rel_tol = parse_double(key, value);
    else if (key == "max_panels") sc.max_panels = static_cast<int>(parse_int(key, value));
    else throw ConfigError("unknown configuration key '" + key + "'");
}

struct NamedScenario {
    std::string name;
    Scenario scenario;
};

// Parses INI-style text. Keys before any [section] form an anonymous
// scenario (name ""); each section starts from the defaults.
inline std::vector<NamedScenario> parse_scenario_config(std::istream& in) {
    std::vector<NamedScenario> out;
    NamedScenario current{"", Scenario{}};
    bool touched = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
            if (touched) out.push_back(current);
            current = NamedScenario{detail::trim(t.substr(1, t.size() - 2)), Scenario{}};
            touched = true;
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        apply_scenario_key(current.scenario, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
        touched = true;
    }
    if (touched) out.push_back(current);
    return out;
}

inline std::vector<NamedScenario> parse_scenario_config(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario_config(in);
}

}  // namespace outage

#endif  // OUTAGE_SCENARIO_HPP
