#include "endslab/lab.hpp"

#include "endslab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace endslab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("config: '" + key + "' is not a number: " + text);
    }
    if (trim(text.substr(used)) != "") throw ConfigError("config: '" + key + "' is not a number: " + text);
    return v;
}

const std::vector<std::string>& common_keys() {
    static const std::vector<std::string> keys{"experiment", "model", "dimension", "neck_radius", "neck_min",
                                               "c_plus", "c_minus", "r_max", "seed"};
    return keys;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (cfg.values_.count(key)) throw ConfigError("config: duplicate key '" + key + "'");
        cfg.values_[key] = value;
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("config: cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse(os.str());
}

std::string ExperimentConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, fallback);
    if (v != std::floor(v)) throw ConfigError("config: '" + key + "' must be an integer");
    return static_cast<int>(v);
}

std::vector<double> ExperimentConfig::get_list(const std::string& key, const std::vector<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::istringstream in(it->second);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw ConfigError("config: '" + key + "' is an empty list");
    return out;
}

std::string ExperimentConfig::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
    return out;
}

std::string ExperimentConfig::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
    return buf;
}

ModelManifold model_from_config(const ExperimentConfig& config) {
    const std::string kind = config.get_string("model", "two-end");
    const int n = config.get_int("dimension", 3);
    if (n < 3 || n % 2 == 0) throw ConfigError("config: dimension must be odd and >= 3");
    const double r_max = config.get_double("r_max", 400.0);
    const double R = config.get_double("neck_radius", 1.0);
    try {
        if (kind == "two-end") {
            return ModelManifold(n, WarpProfile::two_end(R, config.get_double("neck_min", 0.5),
                                                         config.get_double("c_plus", 0.0),
                                                         config.get_double("c_minus", 0.0)),
                                 r_max);
        }
        if (kind == "flat-one-end") return ModelManifold(n, WarpProfile::flat_one_end(R), r_max);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: invalid model: ") + e.what());
    }
    throw ConfigError("config: unknown model '" + kind + "'");
}

const std::vector<ExperimentInfo>& experiment_catalog() {
    static const std::vector<ExperimentInfo> catalog = lab_experiments();
    return catalog;
}

ExperimentReport run(const ExperimentConfig& config) {
    const std::string name = config.experiment();
    const auto& cat = experiment_catalog();
    const auto it = std::find_if(cat.begin(), cat.end(), [&](const ExperimentInfo& e) { return e.name == name; });
    if (it == cat.end()) throw ConfigError("unknown experiment '" + name + "'");
    for (const auto& [key, value] : config.values()) {
        const bool known = std::find(common_keys().begin(), common_keys().end(), key) != common_keys().end() ||
                           std::find(it->keys.begin(), it->keys.end(), key) != it->keys.end();
        if (!known) throw ConfigError("config: key '" + key + "' is not used by " + name);
    }
    ExperimentReport rep = run_lab_experiment(name, config);
    rep.experiment = name;
    return rep;
}

RunOutcome run_checked(const ExperimentConfig& config) {
    RunOutcome out;
    try {
        out.report = run(config);
        out.exit_code = out.report.passed() ? exit_pass : exit_tolerance;
    } catch (const ConfigError& e) {
        out.exit_code = exit_config;
        out.error = e.what();
    } catch (const std::exception& e) {
        out.exit_code = exit_numerical;
        out.error = e.what();
    }
    return out;
}

void write_outputs(const ExperimentReport& report, const ExperimentConfig& config, const std::string& out_dir,
                   bool svg) {
    std::filesystem::create_directories(out_dir);
    const std::string base = (std::filesystem::path(out_dir) / report.experiment).string();
    const std::string h = config.hash();
    write_atomic(base + ".csv", report.to_csv(h));
    write_atomic(base + ".json", report.to_json(h));
    if (svg) write_atomic(base + ".svg", report.to_svg());
}

}  // namespace endslab
