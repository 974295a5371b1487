#include "axilab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace axilab {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
    bool in_quote = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        if (line[k] == '"') in_quote = !in_quote;
        if (line[k] == '#' && !in_quote) return line.substr(0, k);
    }
    return line;
}

bool parse_number(const std::string& tok, double& out) {
    std::size_t pos = 0;
    try {
        out = std::stod(tok, &pos);
    } catch (...) {
        return false;
    }
    return pos == tok.size();
}

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError("empty section name", line_no);
            cfg.sections_[section]; // section may stay empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line_no);
        if (val.empty()) throw ConfigError("empty value for key '" + key + "'", line_no);
        if (section.empty()) throw ConfigError("key outside any [section]", line_no);

        Value v;
        v.line = line_no;
        if (val.front() == '"') {
            if (val.size() < 2 || val.back() != '"')
                throw ConfigError("unterminated string", line_no);
            v.kind = Value::Kind::string;
            v.str = val.substr(1, val.size() - 2);
        } else if (val.front() == '[') {
            if (val.back() != ']') throw ConfigError("unterminated array", line_no);
            std::string inner = trim(val.substr(1, val.size() - 2));
            std::vector<std::string> toks;
            std::string cur;
            bool in_quote = false;
            for (char c : inner) {
                if (c == '"') in_quote = !in_quote;
                if (c == ',' && !in_quote) {
                    toks.push_back(trim(cur));
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            if (!trim(cur).empty()) toks.push_back(trim(cur));
            const bool strings = !toks.empty() && !toks.front().empty() && toks.front().front() == '"';
            if (strings) {
                v.kind = Value::Kind::string_list;
                for (auto& t : toks) {
                    if (t.size() < 2 || t.front() != '"' || t.back() != '"')
                        throw ConfigError("array mixes strings and non-strings", line_no);
                    v.str_list.push_back(t.substr(1, t.size() - 2));
                }
            } else {
                v.kind = Value::Kind::number_list;
                for (auto& t : toks) {
                    double d;
                    if (!parse_number(t, d))
                        throw ConfigError("bad number '" + t + "' in array", line_no);
                    v.num_list.push_back(d);
                }
            }
        } else if (val == "true" || val == "false") {
            v.kind = Value::Kind::boolean;
            v.flag = (val == "true");
        } else {
            double d;
            if (!parse_number(val, d))
                throw ConfigError("bad value '" + val + "' for key '" + key + "'", line_no);
            v.kind = Value::Kind::number;
            v.num = d;
        }
        cfg.sections_[section][key] = std::move(v);
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

bool Config::has_section(const std::string& section) const {
    return sections_.count(section) > 0;
}

const Config::Value& Config::lookup(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end())
        throw std::runtime_error(origin_ + ": missing section [" + section + "]");
    auto k = s->second.find(key);
    if (k == s->second.end())
        throw std::runtime_error(origin_ + ": missing key '" + key + "' in [" + section + "]");
    return k->second;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
    const Value& v = lookup(section, key);
    if (v.kind != Value::Kind::string)
        throw ConfigError("key '" + key + "' in [" + section + "] is not a string", v.line);
    return v.str;
}

double Config::get_number(const std::string& section, const std::string& key) const {
    const Value& v = lookup(section, key);
    if (v.kind != Value::Kind::number)
        throw ConfigError("key '" + key + "' in [" + section + "] is not a number", v.line);
    return v.num;
}

long Config::get_int(const std::string& section, const std::string& key) const {
    const double d = get_number(section, key);
    const long n = static_cast<long>(d);
    if (static_cast<double>(n) != d)
        throw std::runtime_error(origin_ + ": key '" + key + "' must be an integer");
    return n;
}

bool Config::get_bool(const std::string& section, const std::string& key) const {
    const Value& v = lookup(section, key);
    if (v.kind != Value::Kind::boolean)
        throw ConfigError("key '" + key + "' in [" + section + "] is not a boolean", v.line);
    return v.flag;
}

std::vector<std::string> Config::get_string_list(const std::string& section,
                                                 const std::string& key) const {
    const Value& v = lookup(section, key);
    if (v.kind == Value::Kind::string) return {v.str};
    if (v.kind != Value::Kind::string_list)
        throw ConfigError("key '" + key + "' in [" + section + "] is not a string array", v.line);
    return v.str_list;
}

std::vector<double> Config::get_number_list(const std::string& section,
                                            const std::string& key) const {
    const Value& v = lookup(section, key);
    if (v.kind == Value::Kind::number) return {v.num};
    if (v.kind != Value::Kind::number_list)
        throw ConfigError("key '" + key + "' in [" + section + "] is not a number array", v.line);
    return v.num_list;
}

std::string Config::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_number_or(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? get_number(section, key) : fallback;
}

long Config::get_int_or(const std::string& section, const std::string& key, long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool_or(const std::string& section, const std::string& key, bool fallback) const {
    return has(section, key) ? get_bool(section, key) : fallback;
}

std::string Config::canonical() const {
    std::ostringstream os;
    for (const auto& [section, keys] : sections_) {
        os << '[' << section << "]\n";
        for (const auto& [key, v] : keys) {
            os << key << " = ";
            switch (v.kind) {
                case Value::Kind::string:
                    os << '"' << v.str << '"';
                    break;
                case Value::Kind::number:
                    os << format_number(v.num);
                    break;
                case Value::Kind::boolean:
                    os << (v.flag ? "true" : "false");
                    break;
                case Value::Kind::string_list: {
                    os << '[';
                    for (std::size_t k = 0; k < v.str_list.size(); ++k)
                        os << (k ? ", " : "") << '"' << v.str_list[k] << '"';
                    os << ']';
                    break;
                }
                case Value::Kind::number_list: {
                    os << '[';
                    for (std::size_t k = 0; k < v.num_list.size(); ++k)
                        os << (k ? ", " : "") << format_number(v.num_list[k]);
                    os << ']';
                    break;
                }
            }
            os << '\n';
        }
        os << '\n';
    }
    return os.str();
}

std::uint64_t Config::hash() const {
    const std::string text = canonical();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

RunConfig RunConfig::from_config(const Config& cfg) {
    RunConfig rc;
    rc.grid = make_grid(static_cast<int>(cfg.get_int("grid", "nr")),
                        static_cast<int>(cfg.get_int("grid", "nz")),
                        cfg.get_number("grid", "r_max"), cfg.get_number("grid", "z_len"));

    const std::string solver = cfg.get_string_or("run", "solver", "gamma");
    if (solver == "gamma")
        rc.solver = SolverKind::gamma;
    else if (solver == "ns")
        rc.solver = SolverKind::ns;
    else if (solver == "verify_suite")
        rc.solver = SolverKind::verify_suite;
    else
        throw std::runtime_error("unknown solver '" + solver + "' (gamma | ns | verify_suite)");

    rc.end_time = cfg.get_number_or("run", "end_time", 0.1);
    rc.dt = cfg.get_number_or("run", "dt", 0.0);
    rc.cfl = cfg.get_number_or("run", "cfl", 0.4);
    rc.snapshot_dt = cfg.get_number_or("run", "snapshot_dt", 0.0);
    rc.seed = static_cast<std::uint32_t>(cfg.get_int_or("run", "seed", 0));
    rc.output_dir = cfg.get_string_or("run", "output_dir", "out");
    rc.outer_bc = cfg.get_string_or("run", "outer_bc", "dirichlet_zero");
    if (rc.outer_bc != "dirichlet_zero" && rc.outer_bc != "fixed")
        throw std::runtime_error("unknown outer_bc '" + rc.outer_bc + "'");
    rc.reproducible = cfg.get_bool_or("run", "reproducible", false);

    if (cfg.has_section("initial")) {
        rc.initial_preset = cfg.get_string_or("initial", "preset", "bump");
        rc.initial_file = cfg.get_string_or("initial", "file", "");
        for (const char* key : {"amplitude", "omega", "perturbation", "r_inner", "r_outer",
                                "z_width"})
            if (cfg.has("initial", key))
                rc.initial_params[key] = cfg.get_number("initial", key);
    } else {
        rc.initial_preset = "bump";
    }

    if (cfg.has_section("drift.b1")) {
        DriftSpec::B1Shell s;
        s.amplitude = cfg.get_number("drift.b1", "amplitude");
        s.r_in = cfg.get_number("drift.b1", "r_in");
        s.r_out = cfg.get_number("drift.b1", "r_out");
        rc.drift.b1 = s;
    }
    if (cfg.has_section("drift.b2")) {
        DriftSpec::B2Stream s;
        s.amplitude = cfg.get_number("drift.b2", "amplitude");
        s.z_mode = static_cast<int>(cfg.get_int_or("drift.b2", "z_mode", 1));
        rc.drift.b2 = s;
    }
    if (cfg.has_section("drift.b3")) {
        const std::string kind = cfg.get_string_or("drift.b3", "kind", "scaled_inverse_r");
        if (kind != "scaled_inverse_r")
            throw std::runtime_error("unknown drift.b3 kind '" + kind + "'");
        DriftSpec::B3Scaled s;
        s.c = cfg.get_number("drift.b3", "c");
        rc.drift.b3 = s;
    }

    rc.scales_r0 = cfg.get_number_or("diagnostics", "scales_r0", rc.grid.r_max / 4.0);
    rc.scales_levels = static_cast<int>(cfg.get_int_or("diagnostics", "scales_levels", 3));
    rc.anchor_z = cfg.get_number_or("diagnostics", "anchor_z", 0.5 * rc.grid.z_len);
    if (cfg.has("diagnostics", "enable"))
        rc.diagnostics = cfg.get_string_list("diagnostics", "enable");
    else
        rc.diagnostics = {"norms", "oscillation"};

    const bool needs_cylinders =
        std::count(rc.diagnostics.begin(), rc.diagnostics.end(), "oscillation") > 0 ||
        std::count(rc.diagnostics.begin(), rc.diagnostics.end(), "verifier") > 0;
    if (needs_cylinders && rc.end_time < rc.scales_r0 * rc.scales_r0 - 1e-12)
        throw std::runtime_error(
            "diagnostic cylinders need end_time >= scales_r0^2; got end_time = " +
            std::to_string(rc.end_time) + ", scales_r0 = " + std::to_string(rc.scales_r0));

    rc.verifier_c0 = cfg.get_number_or("verifier", "c0", 0.1);
    rc.verifier_delta = cfg.get_number_or("verifier", "delta", 0.05);
    rc.mean_value_p = static_cast<int>(cfg.get_int_or("verifier", "mean_value_p", 3));
    rc.gamma_min = cfg.get_number_or("verifier", "gamma_min", 0.95);
    rc.case_threshold = cfg.get_number_or("verifier", "case_threshold", 10.0);

    rc.canonical_text = cfg.canonical();
    rc.config_hash = cfg.hash();
    return rc;
}

} // namespace axilab
