#include "endslab/lab.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>

using namespace endslab;
namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"runs every acceptance experiment and prints one line per criterion"};
    std::string dir, out_dir;
    std::vector<int> only;
    app.add_option("experiments", dir, "directory with the *.cfg catalog")->required()->check(CLI::ExistingDirectory);
    app.add_option("--out", out_dir, "also write CSV/JSON outputs here");
    app.add_option("--only", only, "criterion numbers to run");
    CLI11_PARSE(app, argc, argv);

    // experiment name -> config file
    std::map<std::string, fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".cfg") continue;
        try {
            files[ExperimentConfig::load(entry.path().string()).experiment()] = entry.path();
        } catch (const ConfigError& e) {
            std::cerr << entry.path() << ": " << e.what() << "\n";
            return exit_config;
        }
    }

    int failed = 0;
    for (const auto& info : experiment_catalog()) {
        if (info.criterion == 0) continue;
        if (!only.empty() && std::find(only.begin(), only.end(), info.criterion) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        std::string status, detail;
        const auto it = files.find(info.name);
        if (it == files.end()) {
            status = "FAIL";
            detail = "no config in the catalog";
        } else {
            const ExperimentConfig config = ExperimentConfig::load(it->second.string());
            const RunOutcome out = run_checked(config);
            if (!out.error.empty()) {
                status = "FAIL";
                detail = "exit " + std::to_string(out.exit_code) + ": " + out.error;
            } else {
                status = out.exit_code == exit_pass ? "PASS" : "FAIL";
                int shown = 0;
                for (const auto& c : out.report.checks) {
                    if (c.passed && status == "FAIL") continue;
                    if (shown++ == 3) {
                        detail += " ...";
                        break;
                    }
                    detail += (detail.empty() ? "" : "; ") + c.name + "=" + format_double(c.value);
                }
                if (!out_dir.empty()) write_outputs(out.report, config, out_dir, false);
            }
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (status != "PASS") ++failed;
        std::printf("[%s] criterion %2d %-18s %6.1fs  %s\n", status.c_str(), info.criterion, info.name.c_str(), secs,
                    detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
