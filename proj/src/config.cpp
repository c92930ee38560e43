/// @file config.cpp

#include "vvns/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace vvns {
namespace {

const std::vector<std::string> kKnownKeys = {
    "nu",         "dt",       "t_end",    "scheme",   "setting",         "mesh_n",
    "mesh_file",  "h_near",   "h_far",    "growth",   "h_wall",          "forcing",         "seed",
    "max_mode",   "amplitude", "initial", "solver",   "tol",             "max_iter",
    "cadence",    "snapshot_cadence",     "out_dir",  "probe_x",         "probe_y",
    "viscosity",
};

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), curr(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        curr[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, sub});
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

std::string nearest_key(const std::string& key) {
    int best = 1 << 30;
    std::string name;
    for (const auto& k : kKnownKeys) {
        const int d = edit_distance(key, k);
        if (d < best) {
            best = d;
            name = k;
        }
    }
    return name;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
    std::ostringstream os;
    os << name << ":" << line << ": " << msg;
    throw std::runtime_error(os.str());
}

double to_double(const std::map<std::string, Entry>& kv, const std::string& name,
                 const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second.value, &pos);
        if (pos != it->second.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        fail(name, it->second.line, "key '" + key + "': expected a number, got '" +
                                        it->second.value + "'");
    }
}

long to_long(const std::map<std::string, Entry>& kv, const std::string& name,
             const std::string& key, long fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t pos = 0;
        const long v = std::stol(it->second.value, &pos);
        if (pos != it->second.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        fail(name, it->second.line, "key '" + key + "': expected an integer, got '" +
                                        it->second.value + "'");
    }
}

std::string to_string(const std::map<std::string, Entry>& kv, const std::string& key,
                      const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second.value;
}

int line_of(const std::map<std::string, Entry>& kv, const std::string& key) {
    auto it = kv.find(key);
    return it == kv.end() ? 0 : it->second.line;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name) {
    std::map<std::string, Entry> kv;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') continue;  // section header, cosmetic
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(name, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
            fail(name, lineno, "unknown key '" + key + "' (did you mean '" + nearest_key(key) +
                                   "'?)");
        if (kv.count(key)) fail(name, lineno, "duplicate key '" + key + "'");
        kv[key] = {value, lineno};
    }

    if (auto it = kv.find("viscosity"); it != kv.end()) {
        // Accepted alias for 'nu'.
        if (kv.count("nu"))
            fail(name, it->second.line, "keys 'viscosity' and 'nu' are aliases; give only one");
        kv["nu"] = it->second;
        kv.erase("viscosity");
    }

    for (const char* req : {"nu", "dt", "t_end", "scheme"})
        if (!kv.count(req)) fail(name, lineno, std::string("missing required key '") + req + "'");

    RunConfig cfg;
    cfg.scheme.nu = to_double(kv, name, "nu", 0.0);
    cfg.scheme.dt = to_double(kv, name, "dt", 0.0);
    cfg.scheme.t_end = to_double(kv, name, "t_end", 0.0);
    if (!(cfg.scheme.nu > 0.0)) fail(name, line_of(kv, "nu"), "key 'nu': must be positive");
    if (!(cfg.scheme.dt > 0.0)) fail(name, line_of(kv, "dt"), "key 'dt': must be positive");
    if (!(cfg.scheme.t_end >= cfg.scheme.dt))
        fail(name, line_of(kv, "t_end"), "key 't_end': must be >= dt");

    cfg.scheme_name = to_string(kv, "scheme", "be");
    if (cfg.scheme_name == "be")
        cfg.scheme.scheme = SchemeKind::BE;
    else if (cfg.scheme_name == "bdf2")
        cfg.scheme.scheme = SchemeKind::BDF2;
    else
        fail(name, line_of(kv, "scheme"), "key 'scheme': expected 'be' or 'bdf2'");

    cfg.setting_name = to_string(kv, "setting", "torus");
    if (cfg.setting_name == "torus")
        cfg.scheme.setting = Setting::torus;
    else if (cfg.setting_name == "channel")
        cfg.scheme.setting = Setting::channel;
    else
        fail(name, line_of(kv, "setting"), "key 'setting': expected 'torus' or 'channel'");

    cfg.mesh_file = to_string(kv, "mesh_file", "");
    cfg.mesh_n = static_cast<int>(to_long(kv, name, "mesh_n", 8));
    if (cfg.mesh_file.empty() && cfg.scheme.setting == Setting::torus && cfg.mesh_n < 1)
        fail(name, line_of(kv, "mesh_n"), "key 'mesh_n': must be >= 1");
    cfg.grading.h_near = to_double(kv, name, "h_near", cfg.grading.h_near);
    cfg.grading.h_far = to_double(kv, name, "h_far", cfg.grading.h_far);
    cfg.grading.growth = to_double(kv, name, "growth", cfg.grading.growth);
    cfg.grading.h_wall = to_double(kv, name, "h_wall", cfg.grading.h_wall);

    cfg.seed = static_cast<unsigned>(to_long(kv, name, "seed", 0));
    cfg.forcing_name = to_string(kv, "forcing", "zero");
    const int max_mode = static_cast<int>(to_long(kv, name, "max_mode", 2));
    const double amplitude = to_double(kv, name, "amplitude", 1.0);
    if (cfg.forcing_name == "zero")
        cfg.scheme.forcing = ForcingSpec::zero();
    else if (cfg.forcing_name == "steady_skew")
        cfg.scheme.forcing = ForcingSpec::steady_skew();
    else if (cfg.forcing_name == "random")
        cfg.scheme.forcing = ForcingSpec::random_fourier(cfg.seed, max_mode, amplitude);
    else
        fail(name, line_of(kv, "forcing"),
             "key 'forcing': expected 'zero', 'steady_skew', or 'random'");

    cfg.initial_name = to_string(kv, "initial", "rest");
    if (cfg.initial_name == "rest") {
        cfg.scheme.initial_velocity = nullptr;
        cfg.scheme.initial_vorticity = nullptr;
    } else if (cfg.initial_name == "taylor_green") {
        cfg.scheme.initial_velocity = [](double x, double y) {
            return std::array<double, 2>{std::sin(x) * std::cos(y), -std::cos(x) * std::sin(y)};
        };
        cfg.scheme.initial_vorticity = [](double x, double y) {
            return 2.0 * std::sin(x) * std::sin(y);
        };
    } else {
        fail(name, line_of(kv, "initial"), "key 'initial': expected 'rest' or 'taylor_green'");
    }

    const std::string solver = to_string(kv, "solver", "lu");
    if (solver == "lu")
        cfg.scheme.solver.method = SolverOptions::Method::DirectLU;
    else if (solver == "krylov")
        cfg.scheme.solver.method = SolverOptions::Method::Krylov;
    else
        fail(name, line_of(kv, "solver"), "key 'solver': expected 'lu' or 'krylov'");
    cfg.scheme.solver.tol = to_double(kv, name, "tol", cfg.scheme.solver.tol);
    cfg.scheme.solver.max_iter =
        static_cast<int>(to_long(kv, name, "max_iter", cfg.scheme.solver.max_iter));

    cfg.scheme.cadence = static_cast<int>(to_long(kv, name, "cadence", 1));
    if (cfg.scheme.cadence < 1) fail(name, line_of(kv, "cadence"), "key 'cadence': must be >= 1");
    cfg.snapshot_cadence = static_cast<int>(to_long(kv, name, "snapshot_cadence", 0));
    if (cfg.snapshot_cadence < 0)
        fail(name, line_of(kv, "snapshot_cadence"), "key 'snapshot_cadence': must be >= 0");
    cfg.out_dir = to_string(kv, "out_dir", ".");
    cfg.scheme.probe[0] = to_double(kv, name, "probe_x", cfg.scheme.probe[0]);
    cfg.scheme.probe[1] = to_double(kv, name, "probe_y", cfg.scheme.probe[1]);

    cfg.scheme.validate();
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

Mesh build_mesh(const RunConfig& config) {
    if (!config.mesh_file.empty()) return load_mesh(config.mesh_file);
    if (config.scheme.setting == Setting::torus) return build_torus_mesh(config.mesh_n);
    return build_channel_mesh(config.grading);
}

}  // namespace vvns
