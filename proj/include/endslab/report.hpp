#pragma once

#include <map>
#include <string>
#include <vector>

namespace endslab {

inline constexpr const char* kVersion = "0.3.0";

/// Least-squares line through (log x, log y).
struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
    double r2 = 0.0;
    double residual = 0.0;  // root-mean-square residual in log space
    std::size_t points = 0;
};

/// Requires >= 5 points (>= 2 when min_points is lowered) with positive x, y.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                     std::size_t min_points = 5);

/// Ordinary least-squares line y = a + b x with the same diagnostics.
LogLogFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

struct Check {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct FittedQuantity {
    double value = 0.0;
    double std_error = 0.0;
    double residual = 0.0;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, FittedQuantity> fits;
    std::vector<Check> checks;
    std::vector<std::string> notes;

    void add_row(std::vector<double> row);
    /// Records a check |value - target| <= tolerance.
    Check& check_close(const std::string& name, double value, double target, double tolerance,
                       const std::string& detail = "");
    /// Records a boolean check.
    Check& check_true(const std::string& name, bool ok, const std::string& detail = "");
    void add_fit(const std::string& name, const LogLogFit& fit);
    /// Adds fits, checks and notes under `prefix`; rows are appended when
    /// the columns agree.
    void merge(const ExperimentReport& other, const std::string& prefix);

    bool passed() const;
    std::string to_csv(const std::string& config_hash) const;
    std::string to_json(const std::string& config_hash) const;
    /// Log-log SVG of every column against the first one.
    std::string to_svg() const;
};

/// Writes `content` to `path` via a temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

/// Printable representation of a double that round-trips exactly.
std::string format_double(double v);

}  // namespace endslab
