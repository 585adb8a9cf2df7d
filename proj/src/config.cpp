#include "ecotone/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ecotone {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("invalid numeric value for " + key + ": '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("invalid integer value for " + key + ": '" + v + "'");
    }
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_int(key, trim(item)));
    return out;
}

void validate(const RunConfig& c) {
    if (c.catalog != "monotone" && c.catalog != "bistable" && c.catalog != "polynomial")
        throw ConfigError("model.catalog must be monotone, bistable or polynomial");
    if (c.catalog == "polynomial" && c.f_coeffs.empty())
        throw ConfigError("model.f_coeffs required for the polynomial catalog");
    if (c.alpha < 0.0) throw ConfigError("model.alpha must be non-negative");
    if (c.dim != 1 && c.dim != 2) throw ConfigError("grid.dim must be 1 or 2");
    if (c.nx < 3) throw ConfigError("grid.nx must be at least 3");
    if (c.dim == 2 && c.ny < 3) throw ConfigError("grid.ny must be at least 3");
    if (!(c.lx > 0.0)) throw ConfigError("grid.lx must be positive");
    if (c.dim == 2 && !(c.ly > 0.0)) throw ConfigError("grid.ly must be positive");
    if (!(c.dt > 0.0)) throw ConfigError("stepper.dt must be positive");
    if (!(c.horizon > 0.0)) throw ConfigError("stepper.horizon must be positive");
    if (c.snapshot_stride < 1) throw ConfigError("stepper.snapshot_stride must be >= 1");
    if (!(c.heat_tol > 0.0) || c.heat_tol > 1e-6)
        throw ConfigError("stepper.heat_tol must be in (0, 1e-6]");
    if (!(c.epsilon >= 0.0)) throw ConfigError("experiment.epsilon must be non-negative");
    if (!(c.tolerance > 0.0)) throw ConfigError("experiment.tolerance must be positive");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    c.raw_text = text;
    std::stringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "model" && section != "grid" && section != "stepper" &&
                section != "experiment" && section != "output")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (section.empty())
            throw ConfigError("key '" + key + "' appears before any section header");
        std::string fq = section + "." + key;

        if (section == "model") {
            if (key == "catalog") c.catalog = val;
            else if (key == "f_coeffs") c.f_coeffs = to_doubles(fq, val);
            else if (key == "phi_coeffs") c.phi_coeffs = to_doubles(fq, val);
            else if (key == "beta0") c.beta0 = to_double(fq, val);
            else if (key == "K") c.K = to_double(fq, val);
            else if (key == "gamma0") c.gamma0 = to_double(fq, val);
            else if (key == "delta") c.growth_delta = to_double(fq, val);
            else if (key == "C") c.C = to_double(fq, val);
            else if (key == "alpha") c.alpha = to_double(fq, val);
            else throw ConfigError("unknown key " + fq);
        } else if (section == "grid") {
            if (key == "dim") c.dim = to_int(fq, val);
            else if (key == "nx") c.nx = to_int(fq, val);
            else if (key == "ny") c.ny = to_int(fq, val);
            else if (key == "lx") c.lx = to_double(fq, val);
            else if (key == "ly") c.ly = to_double(fq, val);
            else throw ConfigError("unknown key " + fq);
        } else if (section == "stepper") {
            if (key == "dt") c.dt = to_double(fq, val);
            else if (key == "horizon") c.horizon = to_double(fq, val);
            else if (key == "snapshot_stride") c.snapshot_stride = to_int(fq, val);
            else if (key == "heat_tol") c.heat_tol = to_double(fq, val);
            else throw ConfigError("unknown key " + fq);
        } else if (section == "experiment") {
            if (key == "split_at") c.split_at = to_double(fq, val);
            else if (key == "h_list") c.h_list = to_doubles(fq, val);
            else if (key == "horizons") c.horizons = to_doubles(fq, val);
            else if (key == "probe_nodes") c.probe_nodes = to_ints(fq, val);
            else if (key == "epsilon") c.epsilon = to_double(fq, val);
            else if (key == "vbar") c.vbar = to_double(fq, val);
            else if (key == "vtilde") c.vtilde = to_double(fq, val);
            else if (key == "omega2_lo") c.omega2_lo = to_double(fq, val);
            else if (key == "omega2_hi") c.omega2_hi = to_double(fq, val);
            else if (key == "steepness") c.steepness = to_double(fq, val);
            else if (key == "contrast_steepness") c.contrast_steepness = to_double(fq, val);
            else if (key == "tolerance") c.tolerance = to_double(fq, val);
            else throw ConfigError("unknown key " + fq);
        } else {  // output
            if (key == "dir") c.out_dir = val;
            else throw ConfigError("unknown key " + fq);
        }
    }
    validate(c);
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

NonlinearitySpec config_nonlinearity(const RunConfig& c) {
    if (c.catalog == "monotone") return monotone_cubic();
    if (c.catalog == "bistable") return bistable_cubic();
    std::vector<double> phi = c.phi_coeffs.empty() ? std::vector<double>{1.0} : c.phi_coeffs;
    return polynomial_spec(c.f_coeffs, phi, c.beta0, c.K, c.gamma0, c.growth_delta, c.C);
}

SystemParams config_params(const RunConfig& c) {
    Grid g = c.dim == 2 ? make_grid(2, {c.lx, c.ly}, {c.nx, c.ny}) : make_grid_1d(c.lx, c.nx);
    return make_params(c.alpha, config_nonlinearity(c), std::move(g));
}

}  // namespace ecotone
