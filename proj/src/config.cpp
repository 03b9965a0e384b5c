#include "atomtf/config.hpp"

#include <algorithm>
#include <sstream>

#include "atomtf/hash.hpp"
#include "atomtf/io.hpp"

namespace atomtf {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item));
    }
    return out;
}

}  // namespace

const std::vector<std::string>& Config::known_keys() {
    static const std::vector<std::string> keys = {
        "Z",            "charges",      "positions",   "q",
        "beta",         "N",            "grid.nodes",  "grid.r_min",
        "grid.r_max",   "tolerance",    "Z_sweep",     "beta_sweep",
        "scott.t_values", "scott.L_max", "scott.r_cut", "scott.momentum_nodes",
        "spectrum.kind", "spectrum.L_max", "spectrum.lambda_cut",
        "bounds.epsilon_ladder", "bounds.C0",  "check.grid_scale",
        "jobs",
    };
    return keys;
}

Config Config::from_file(const std::filesystem::path& path) {
    return from_string(read_file(path));
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::stringstream ss(text);
    std::string line;
    std::vector<std::string> bad;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               " is not of the form key = value: '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            bad.push_back(key);
            continue;
        }
        cfg.values_[key] = value;
    }
    if (!bad.empty()) {
        std::string msg = "unknown config key(s):";
        for (const auto& k : bad) msg += " '" + k + "'";
        msg += "; valid keys are:";
        for (const auto& k : known_keys()) msg += " " + k;
        throw config_error(msg);
    }
    return cfg;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(it->second);
}

int Config::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : static_cast<int>(parse_double(it->second) + 0.5);
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_list(it->second);
}

std::string Config::digest() const {
    Fnv64 h;
    for (const auto& [k, v] : values_) {
        h.update(k).update("=").update(v).update("\n");
    }
    return h.hex();
}

NuclearConfiguration Config::nuclear() const {
    std::vector<double> charges;
    if (has("charges"))
        charges = get_list("charges", {});
    else
        charges = {get_double("Z", 1.0)};

    std::vector<Vec3> positions;
    if (has("positions")) {
        std::stringstream ss(get("positions", ""));
        std::string triple;
        while (std::getline(ss, triple, ';')) {
            auto xyz = parse_list(triple);
            if (xyz.size() != 3) throw config_error("positions must be x,y,z triples");
            positions.push_back({xyz[0], xyz[1], xyz[2]});
        }
    } else {
        positions.assign(charges.size(), Vec3{0.0, 0.0, 0.0});
    }
    if (charges.size() != positions.size())
        throw config_error("charges and positions must have the same length");

    double zsum = 0.0;
    for (double z : charges) zsum += z;
    const int q = get_int("q", 2);
    const double beta = get_double("beta", 0.0);
    const double N = get_double("N", zsum);
    return NuclearConfiguration(charges, positions, q, beta, N);
}

}  // namespace atomtf
