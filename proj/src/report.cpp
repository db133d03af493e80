#include "endslab/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace endslab {

namespace {

LogLogFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    LogLogFit fit;
    fit.points = n;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit: abscissae are all equal");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - fit.intercept - fit.slope * x[i];
        sse += e * e;
    }
    fit.residual = std::sqrt(sse / n);
    fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    if (n > 2) {
        const double s2 = sse / (n - 2);
        fit.slope_stderr = std::sqrt(s2 / sxx);
        double sx2 = 0;
        for (double v : x) sx2 += v * v;
        fit.intercept_stderr = std::sqrt(s2 * sx2 / (n * sxx));
    }
    return fit;
}

}  // namespace

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
    if (x.size() < min_points) throw std::invalid_argument("fit_loglog: too few points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("fit_loglog: nonpositive value");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    return least_squares(lx, ly);
}

LogLogFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_linear: bad input");
    return least_squares(x, y);
}

void ExperimentReport::add_row(std::vector<double> row) {
    if (!columns.empty() && row.size() != columns.size()) {
        throw std::logic_error("ExperimentReport: row width does not match columns");
    }
    rows.push_back(std::move(row));
}

Check& ExperimentReport::check_close(const std::string& name, double value, double target,
                                     double tolerance, const std::string& detail) {
    Check c{name, value, target, tolerance, std::abs(value - target) <= tolerance, detail};
    if (!std::isfinite(value)) c.passed = false;
    checks.push_back(c);
    return checks.back();
}

Check& ExperimentReport::check_true(const std::string& name, bool ok, const std::string& detail) {
    checks.push_back({name, ok ? 1.0 : 0.0, 1.0, 0.0, ok, detail});
    return checks.back();
}

void ExperimentReport::add_fit(const std::string& name, const LogLogFit& fit) {
    fits[name + ".slope"] = {fit.slope, fit.slope_stderr, fit.residual};
    fits[name + ".intercept"] = {fit.intercept, fit.intercept_stderr, fit.residual};
    fits[name + ".r2"] = {fit.r2, 0.0, fit.residual};
}

void ExperimentReport::merge(const ExperimentReport& other, const std::string& prefix) {
    if (columns.empty()) columns = other.columns;
    if (columns == other.columns) {
        rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    } else if (!other.rows.empty()) {
        notes.push_back(prefix + "rows not merged (different columns)");
    }
    for (const auto& [k, v] : other.fits) fits[prefix + k] = v;
    for (Check c : other.checks) {
        c.name = prefix + c.name;
        checks.push_back(c);
    }
    for (const auto& n : other.notes) notes.push_back(prefix + n);
}

bool ExperimentReport::passed() const {
    for (const auto& c : checks) {
        if (!c.passed) return false;
    }
    return true;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string ExperimentReport::to_csv(const std::string& config_hash) const {
    std::ostringstream os;
    os << "# experiment: " << experiment << "\n";
    os << "# config_hash: " << config_hash << "\n";
    os << "# version: endslab " << kVersion << "\n";
    for (const auto& [name, f] : fits) {
        os << "# fit " << name << ": value=" << format_double(f.value)
           << " stderr=" << format_double(f.std_error) << " residual=" << format_double(f.residual) << "\n";
    }
    for (const auto& c : checks) {
        os << "# check " << c.name << ": " << (c.passed ? "PASS" : "FAIL")
           << " value=" << format_double(c.value) << " target=" << format_double(c.target)
           << " tol=" << format_double(c.tolerance);
        if (!c.detail.empty()) os << " (" << c.detail << ")";
        os << "\n";
    }
    for (const auto& n : notes) os << "# note: " << n << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << "\n";
    }
    return os.str();
}

std::string ExperimentReport::to_json(const std::string& config_hash) const {
    using nlohmann::ordered_json;
    ordered_json j;
    j["experiment"] = experiment;
    j["config_hash"] = config_hash;
    j["version"] = kVersion;
    j["passed"] = passed();
    j["columns"] = columns;
    ordered_json rj = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json r = ordered_json::array();
        for (double v : row) {
            if (std::isfinite(v)) r.push_back(v);
            else r.push_back(format_double(v));
        }
        rj.push_back(r);
    }
    j["rows"] = rj;
    ordered_json fj = ordered_json::object();
    for (const auto& [name, f] : fits) {
        fj[name] = {{"value", f.value}, {"stderr", f.std_error}, {"residual", f.residual}};
    }
    j["fits"] = fj;
    ordered_json cj = ordered_json::array();
    for (const auto& c : checks) {
        cj.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", std::isfinite(c.value) ? ordered_json(c.value) : ordered_json(format_double(c.value))},
                      {"target", c.target},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
    }
    j["checks"] = cj;
    j["notes"] = notes;
    return j.dump(2) + "\n";
}

std::string ExperimentReport::to_svg() const {
    const double W = 640, H = 420, pad = 50;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << pad << "\" y=\"20\" font-size=\"14\">" << experiment << " (log-log)</text>\n";
    if (rows.empty() || columns.size() < 2) {
        os << "</svg>\n";
        return os.str();
    }
    double x0 = std::numeric_limits<double>::max(), x1 = -x0, y0 = x0, y1 = -x0;
    auto usable = [](double v) { return std::isfinite(v) && v > 0.0; };
    for (const auto& row : rows) {
        if (!usable(row[0])) continue;
        x0 = std::min(x0, std::log10(row[0]));
        x1 = std::max(x1, std::log10(row[0]));
        for (std::size_t c = 1; c < row.size(); ++c) {
            if (!usable(std::abs(row[c]))) continue;
            y0 = std::min(y0, std::log10(std::abs(row[c])));
            y1 = std::max(y1, std::log10(std::abs(row[c])));
        }
    }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\""
       << H - 2 * pad << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (std::size_t c = 1; c < columns.size(); ++c) {
        os << "<polyline fill=\"none\" stroke=\"" << colors[(c - 1) % 6] << "\" points=\"";
        for (const auto& row : rows) {
            if (!usable(row[0]) || !usable(std::abs(row[c]))) continue;
            const double px = pad + (std::log10(row[0]) - x0) / (x1 - x0) * (W - 2 * pad);
            const double py = H - pad - (std::log10(std::abs(row[c])) - y0) / (y1 - y0) * (H - 2 * pad);
            os << px << "," << py << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << W - pad - 120 << "\" y=\"" << pad + 14 * c << "\" font-size=\"11\" fill=\""
           << colors[(c - 1) % 6] << "\">" << columns[c] << "</text>\n";
    }
    os << "<text x=\"" << pad << "\" y=\"" << H - 15 << "\" font-size=\"11\">" << columns[0]
       << " (10^" << format_double(x0) << " .. 10^" << format_double(x1) << ")</text>\n";
    os << "</svg>\n";
    return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace endslab
