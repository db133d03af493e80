#pragma once

#include "endslab/geometry.hpp"
#include "endslab/report.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace endslab {

/// Malformed or invalid configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat key = value configuration; '#' starts a comment, lists are comma
/// separated.  Keys are kept sorted so the hash is independent of file order.
class ExperimentConfig {
public:
    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::string& path);

    std::string experiment() const { return get_string("experiment", ""); }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

    /// key=value lines in key order.
    std::string canonical() const;
    /// FNV-1a (64 bit) of canonical(), as 16 hex digits.
    std::string hash() const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a64(const std::string& bytes);

/// Model from the common keys: model = two-end | flat-one-end, dimension,
/// neck_radius, neck_min, c_plus, c_minus, r_max.
ModelManifold model_from_config(const ExperimentConfig& config);

struct ExperimentInfo {
    std::string name;
    int criterion = 0;  // acceptance criterion number (0: none)
    std::string summary;
    std::vector<std::string> keys;  // experiment-specific keys
};

const std::vector<ExperimentInfo>& experiment_catalog();

/// Runs the named experiment.  Throws ConfigError for unknown names or keys,
/// NumericalError (or another std::exception) for numerical failures.
ExperimentReport run(const ExperimentConfig& config);

enum ExitCode : int { exit_pass = 0, exit_tolerance = 1, exit_config = 2, exit_numerical = 3 };

struct RunOutcome {
    ExperimentReport report;
    int exit_code = exit_pass;
    std::string error;
};

/// run() with the exceptions mapped to exit codes.
RunOutcome run_checked(const ExperimentConfig& config);

/// Writes <out>/<experiment>.csv and .json (and .svg when requested) atomically.
void write_outputs(const ExperimentReport& report, const ExperimentConfig& config, const std::string& out_dir,
                   bool svg);

}  // namespace endslab
