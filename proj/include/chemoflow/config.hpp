#pragma once

// Sectioned key-value configuration files.
//
//   # comment              (also ';' at line start)
//   [section]
//   key = value
//
// Values are whitespace-separated tokens; see README.md for the key reference.
// Every error message starts with "path:line:" (line 0 when a key is missing).

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chemoflow/error.hpp"
#include "chemoflow/galerkin.hpp"
#include "chemoflow/run_config.hpp"

namespace chemoflow {

namespace detail {

struct ConfigEntry {
    std::string value;
    int line = 0;
};

using ConfigMap = std::map<std::string, ConfigEntry>;  // "section.key" -> value

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

inline const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "grid.dim",          "grid.points",           "grid.length",
        "model.kappa",       "model.chi",             "model.consumption",
        "model.potential",   "initial.n0",            "initial.c0",
        "initial.u0",        "integrator.dt_init",    "integrator.dt_min",
        "integrator.dt_max", "integrator.t_end",      "integrator.cfl_safety",
        "integrator.scheme", "integrator.tol_pos",    "diagnostics.p_list",
        "diagnostics.serrin", "diagnostics.beta",     "diagnostics.snapshot_every",
        "diagnostics.validity_action", "output.dir",  "run.seed",
        "sweep.l_ladder",    "sweep.eps_ladder",      "sweep.norm",
        "sweep.distance"};
    return keys;
}

class ConfigReader {
public:
    ConfigReader(std::string path, ConfigMap map) : path_(std::move(path)), map_(std::move(map)) {}

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ConfigError(path_ + ":" + std::to_string(line) + ": " + msg);
    }
    [[noreturn]] void fail(const std::string& key, const std::string& msg) const { fail(line(key), key + ": " + msg); }

    [[nodiscard]] bool has(const std::string& key) const { return map_.count(key) != 0; }
    [[nodiscard]] int line(const std::string& key) const { return has(key) ? map_.at(key).line : 0; }

    [[nodiscard]] const std::string& raw(const std::string& key) const {
        if (!has(key)) fail(0, "missing required key '" + key + "'");
        return map_.at(key).value;
    }

    [[nodiscard]] double number_of(const std::string& key, const std::string& tok) const {
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0' || errno == ERANGE || std::isnan(v))
            fail(key, "expected a number, got '" + tok + "'");
        return v;
    }

    [[nodiscard]] double number(const std::string& key) const {
        const auto t = tokens(raw(key));
        if (t.size() != 1) fail(key, "expected a single number");
        return number_of(key, t[0]);
    }
    [[nodiscard]] double number(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    [[nodiscard]] long long integer(const std::string& key) const {
        const auto t = tokens(raw(key));
        if (t.size() != 1) fail(key, "expected a single integer");
        errno = 0;
        char* end = nullptr;
        const long long v = std::strtoll(t[0].c_str(), &end, 10);
        if (end == t[0].c_str() || *end != '\0' || errno == ERANGE) fail(key, "expected an integer, got '" + t[0] + "'");
        return v;
    }

    [[nodiscard]] std::vector<double> numbers(const std::string& key) const {
        std::vector<double> out;
        for (const auto& t : tokens(raw(key))) out.push_back(number_of(key, t));
        if (out.empty()) fail(key, "expected at least one number");
        return out;
    }

    [[nodiscard]] const std::string& path() const { return path_; }

private:
    std::string path_;
    ConfigMap map_;
};

inline ConfigMap read_config_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ":0: cannot open configuration file");
    ConfigMap map;
    std::string section, line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) { throw ConfigError(path + ":" + std::to_string(lineno) + ": " + msg); };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty() || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            static const std::set<std::string> sections{"grid",        "model",  "initial", "integrator",
                                                        "diagnostics", "output", "run",     "sweep"};
            if (!sections.count(section)) fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        if (section.empty()) fail("key outside of any section");
        const auto key = section + "." + trim(line.substr(0, eq));
        if (!known_keys().count(key)) fail("unknown key '" + key + "'");
        if (map.count(key)) fail("duplicate key '" + key + "' (first set on line " + std::to_string(map[key].line) + ")");
        const auto value = trim(line.substr(eq + 1));
        if (value.empty()) fail("empty value for '" + key + "'");
        map[key] = {value, lineno};
    }
    return map;
}

inline ScalarLaw parse_law(const ConfigReader& r, const std::string& key) {
    const auto t = tokens(r.raw(key));
    std::vector<double> a;
    for (std::size_t i = 1; i < t.size(); ++i) a.push_back(r.number_of(key, t[i]));
    const auto& kind = t[0];
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (a.size() < lo || a.size() > hi) r.fail(key, "wrong number of coefficients for '" + kind + "'");
    };
    if (kind == "constant" || kind == "linear") {
        need(1, 1);
        return kind == "constant" ? ScalarLaw::constant(a[0]) : ScalarLaw::linear(a[0]);
    }
    if (kind == "saturating") {
        need(1, 2);
        return ScalarLaw::saturating(a[0], a.size() > 1 ? a[1] : 1.0);
    }
    if (kind == "polynomial") {
        need(1, 64);
        return ScalarLaw::polynomial(a);
    }
    r.fail(key, "unknown law '" + kind + "' (expected constant, linear, saturating or polynomial)");
}

inline ProfileSpec parse_profile(const ConfigReader& r, const std::string& key, int dim) {
    const auto t = tokens(r.raw(key));
    ProfileSpec p;
    if (t[0] == "zero") {
        if (t.size() != 1) r.fail(key, "'zero' takes no arguments");
        return p;
    }
    if (t[0] != "gaussian") r.fail(key, "unknown profile '" + t[0] + "' (expected zero or gaussian)");
    if (t.size() != 3 && t.size() != 3 + static_cast<std::size_t>(dim))
        r.fail(key, "expected 'gaussian AMPLITUDE WIDTH' optionally followed by " + std::to_string(dim) + " offsets");
    p.kind = ProfileKind::gaussian;
    p.amplitude = r.number_of(key, t[1]);
    p.width = r.number_of(key, t[2]);
    for (std::size_t a = 3; a < t.size(); ++a) p.offset[a - 3] = r.number_of(key, t[a]);
    if (p.amplitude < 0.0) r.fail(key, "initial data violates assumption (C): amplitude must be nonnegative");
    if (!(p.width > 0.0)) r.fail(key, "profile width must be positive");
    return p;
}

inline RunConfig parse_run_config(const ConfigReader& r) {
    RunConfig cfg;
    const auto dim = r.integer("grid.dim");
    if (dim != 2 && dim != 3) r.fail("grid.dim", "dimension must be 2 or 3");
    cfg.grid.dim = static_cast<int>(dim);
    const auto pts = r.integer("grid.points");
    if (pts < 8 || pts % 2 != 0 || pts > 4096) r.fail("grid.points", "points must be even and in [8, 4096]");
    cfg.grid.points = static_cast<int>(pts);
    cfg.grid.length = r.number("grid.length");
    if (!(cfg.grid.length > 0.0) || std::isinf(cfg.grid.length)) r.fail("grid.length", "length must be positive");

    cfg.kappa = r.number("model.kappa", 1.0);
    if (r.has("model.chi")) cfg.chi = parse_law(r, "model.chi");
    if (r.has("model.consumption")) {
        cfg.f = parse_law(r, "model.consumption");
        if (cfg.f.value(0.0) != 0.0)
            r.fail("model.consumption", "consumption law violates assumption (A): f(0) = 0 is required");
    }
    if (r.has("model.potential")) {
        const auto t = tokens(r.raw("model.potential"));
        if (t[0] == "zero" && t.size() == 1) {
            cfg.potential.kind = PotentialKind::zero;
        } else if (t[0] == "gaussian_well" && t.size() == 3) {
            cfg.potential.kind = PotentialKind::gaussian_well;
            cfg.potential.depth = r.number_of("model.potential", t[1]);
            cfg.potential.width = r.number_of("model.potential", t[2]);
            if (!(cfg.potential.width > 0.0)) r.fail("model.potential", "well width must be positive");
        } else if (t[0] == "grid" && t.size() == 2) {
            cfg.potential.kind = PotentialKind::user_grid;
            cfg.potential.path = t[1];
        } else {
            r.fail("model.potential", "expected 'zero', 'gaussian_well DEPTH WIDTH' or 'grid PATH'");
        }
    }

    if (r.has("initial.n0")) cfg.n0 = parse_profile(r, "initial.n0", cfg.grid.dim);
    if (r.has("initial.c0")) cfg.c0 = parse_profile(r, "initial.c0", cfg.grid.dim);
    if (r.has("initial.u0")) {
        const auto t = tokens(r.raw("initial.u0"));
        if (t[0] == "zero" && t.size() == 1) {
            cfg.u0.kind = VelocityKind::zero;
        } else if ((t[0] == "taylor_green" || t[0] == "random") && t.size() == 2) {
            cfg.u0.kind = t[0] == "random" ? VelocityKind::random : VelocityKind::taylor_green;
            cfg.u0.amplitude = r.number_of("initial.u0", t[1]);
        } else {
            r.fail("initial.u0", "expected 'zero', 'taylor_green AMPLITUDE' or 'random AMPLITUDE'");
        }
    }
    // f >= 0 on the range of c0 (the profile maximum is its amplitude).
    if (cfg.c0.kind == ProfileKind::gaussian) {
        try {
            validate_consumption_law(cfg.f, cfg.c0.amplitude);
        } catch (const ConfigError& e) {
            r.fail("model.consumption", e.what());
        }
    }

    auto& ic = cfg.integrator;
    ic.t_end = r.number("integrator.t_end");
    ic.dt_init = r.number("integrator.dt_init", ic.dt_init);
    ic.dt_min = r.number("integrator.dt_min", ic.dt_min);
    ic.dt_max = r.number("integrator.dt_max", ic.dt_max);
    ic.cfl_safety = r.number("integrator.cfl_safety", ic.cfl_safety);
    ic.tol_pos = r.number("integrator.tol_pos", ic.tol_pos);
    if (r.has("integrator.scheme") && r.raw("integrator.scheme") != "etd_rk2")
        r.fail("integrator.scheme", "unknown scheme (available: etd_rk2)");
    if (!(ic.t_end >= 0.0) || std::isinf(ic.t_end)) r.fail("integrator.t_end", "t_end must be finite and nonnegative");
    try {
        validate(ic);
    } catch (const ConfigError& e) {
        r.fail(r.line("integrator.dt_init"), e.what());
    }

    auto& dc = cfg.diagnostics;
    if (r.has("diagnostics.p_list")) {
        dc.p_list = r.numbers("diagnostics.p_list");
        for (double p : dc.p_list)
            if (p < 1.0) r.fail("diagnostics.p_list", "exponents must be >= 1");
    }
    if (r.has("diagnostics.serrin")) {
        std::stringstream ss(r.raw("diagnostics.serrin"));
        std::string item;
        while (std::getline(ss, item, ';')) {
            const auto t = tokens(item);
            if (t.empty()) continue;
            if (t.size() != 2) r.fail("diagnostics.serrin", "expected pairs 'r s' separated by ';'");
            SerrinPair sp{r.number_of("diagnostics.serrin", t[0]), r.number_of("diagnostics.serrin", t[1])};
            try {
                require_serrin_admissible(cfg.grid.dim, sp);
            } catch (const ConfigError& e) {
                r.fail("diagnostics.serrin", e.what());
            }
            dc.serrin_pairs.push_back(sp);
        }
    }
    if (r.has("diagnostics.beta") && r.raw("diagnostics.beta") != "auto") {
        dc.beta = r.number("diagnostics.beta");
        if (!(*dc.beta > 0.0)) r.fail("diagnostics.beta", "beta must be positive or 'auto'");
    }
    if (r.has("diagnostics.snapshot_every")) {
        const auto k = r.integer("diagnostics.snapshot_every");
        if (k < 0) r.fail("diagnostics.snapshot_every", "must be nonnegative");
        dc.snapshot_every = static_cast<int>(k);
    }
    if (r.has("diagnostics.validity_action")) {
        const auto& v = r.raw("diagnostics.validity_action");
        if (v == "warn") cfg.validity_action = ValidityAction::warn;
        else if (v == "stop") cfg.validity_action = ValidityAction::stop;
        else r.fail("diagnostics.validity_action", "expected 'warn' or 'stop'");
    }

    if (r.has("output.dir")) cfg.output_dir = r.raw("output.dir");
    if (r.has("run.seed")) {
        const auto t = tokens(r.raw("run.seed"));
        errno = 0;
        char* end = nullptr;
        const unsigned long long s = t.size() == 1 ? std::strtoull(t[0].c_str(), &end, 10) : 0;
        if (t.size() != 1 || end == t[0].c_str() || *end != '\0' || errno == ERANGE || t[0][0] == '-')
            r.fail("run.seed", "expected an unsigned 64-bit integer");
        cfg.seed = s;
    }
    return cfg;
}

}  // namespace detail

/// Parses and validates a run configuration. [sweep] keys are accepted and ignored.
inline RunConfig parse_config(const std::string& path) {
    detail::ConfigReader r(path, detail::read_config_map(path));
    return detail::parse_run_config(r);
}

/// Parses a sweep plan: a run configuration plus a [sweep] section.
inline SweepPlan parse_sweep_plan(const std::string& path) {
    detail::ConfigReader r(path, detail::read_config_map(path));
    SweepPlan plan;
    plan.base = detail::parse_run_config(r);
    plan.l_ladder = r.numbers("sweep.l_ladder");
    plan.eps_ladder = r.numbers("sweep.eps_ladder");
    if (r.has("sweep.norm")) {
        const auto& v = r.raw("sweep.norm");
        if (v == "l2") plan.norm = ComparisonNorm::l2;
        else if (v == "h1") plan.norm = ComparisonNorm::h1;
        else r.fail("sweep.norm", "expected 'l2' or 'h1'");
    }
    if (r.has("sweep.distance")) {
        const auto& v = r.raw("sweep.distance");
        if (v == "terminal") plan.mode = DistanceMode::terminal;
        else if (v == "trajectory") plan.mode = DistanceMode::trajectory;
        else r.fail("sweep.distance", "expected 'terminal' or 'trajectory'");
    }
    try {
        validate(plan);
    } catch (const ConfigError& e) {
        r.fail(r.line("sweep.l_ladder"), e.what());
    }
    return plan;
}

}  // namespace chemoflow
