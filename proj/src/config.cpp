#include "config.hpp"

#include <cerrno>
#include <cstdlib>
#include <sstream>

#include "errors.hpp"
#include "textio.hpp"

namespace ratiolim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        throw ConfigError("config: integer expected for '" + key + "', got '" + value + "'");
    return v;
}

double parse_real(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        throw ConfigError("config: number expected for '" + key + "', got '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config: boolean expected for '" + key + "', got '" + value + "'");
}

std::vector<std::int64_t> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<std::int64_t> out;
    std::istringstream ss(value);
    std::string part;
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        if (part.empty()) throw ConfigError("config: empty list element for '" + key + "'");
        out.push_back(parse_int(key, part));
    }
    if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
    return out;
}

}  // namespace

void config_set(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "d") cfg.d = parse_int(key, value);
    else if (key == "s") cfg.s = parse_int(key, value);
    else if (key == "scales") cfg.scales = parse_int(key, value);
    else if (key == "a_seed") cfg.a_seed = parse_int(key, value);
    else if (key == "gamma_cap") cfg.gamma_cap = parse_int(key, value);
    else if (key == "box_radius") cfg.box_radius = parse_int(key, value);
    else if (key == "T") cfg.T = parse_int(key, value);
    else if (key == "delta_override") cfg.delta_override = parse_real(key, value);
    else if (key == "factor") cfg.factor = parse_real(key, value);
    else if (key == "allow_approximate") cfg.allow_approximate = parse_bool(key, value);
    else if (key == "est_window_cap") cfg.est_window_cap = parse_int(key, value);
    else if (key == "escape_T") cfg.escape_T = parse_int(key, value);
    else if (key == "cc_bound") cfg.cc_bound = parse_real(key, value);
    else if (key == "vd_bound") cfg.vd_bound = parse_real(key, value);
    else if (key == "vd_r_max") cfg.vd_r_max = parse_int(key, value);
    else if (key == "poincare_radii") cfg.poincare_radii = parse_int_list(key, value);
    else if (key == "poincare_stability") cfg.poincare_stability = parse_real(key, value);
    else if (key == "smoothing_ts") cfg.smoothing_ts = parse_int_list(key, value);
    else if (key == "smoothing_stability") cfg.smoothing_stability = parse_real(key, value);
    else if (key == "verify_deff") cfg.verify_deff = parse_int(key, value);
    else if (key == "decompose_gamma") cfg.decompose_gamma = parse_int(key, value);
    else if (key == "decompose_T") cfg.decompose_T = parse_int(key, value);
    else if (key == "max_cells") cfg.max_cells = parse_int(key, value);
    else if (key == "max_vertices") cfg.max_vertices = parse_int(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else throw ConfigError("config: unknown key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: line " + std::to_string(lineno) + " has an empty key or value");
        config_set(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text);
}

void RunConfig::validate() const {
    if (s < 1 || d <= s) throw ConfigError("config: requires d > s >= 1");
    if (scales < 1) throw ConfigError("config: scales must be >= 1");
    if (a_seed < 2 || a_seed % 2 != 0) throw ConfigError("config: a_seed must be a positive even integer");
    if (gamma_cap < 0) throw ConfigError("config: gamma_cap must be >= 0");
    if (box_radius < 1) throw ConfigError("config: box_radius must be >= 1");
    if (T < 0) throw ConfigError("config: T must be >= 0");
    if (!allow_approximate && box_radius < T + 1)
        throw ConfigError("config: exact-mode runs require box_radius >= T + 1");
    if (delta_override < 0.0 || delta_override >= 1.0)
        throw ConfigError("config: delta_override must lie in [0, 1)");
    if (!(factor > 1.0)) throw ConfigError("config: factor must exceed 1");
    if (decompose_gamma < 0) throw ConfigError("config: decompose_gamma must be >= 0");
    if (max_cells < 1 || max_vertices < 1) throw ConfigError("config: resource guards must be positive");
}

}  // namespace ratiolim
