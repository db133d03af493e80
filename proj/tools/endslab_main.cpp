#include "endslab/lab.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace endslab;

int main(int argc, char** argv) {
    CLI::App app{"endslab experiment runner"};
    std::string experiment, config_path, out_dir = "out", plot;
    app.add_option("experiment", experiment, "experiment name, or 'list'")->required();
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--emit-plot", plot, "plot format")->check(CLI::IsMember({"svg"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    if (experiment == "list") {
        for (const auto& e : experiment_catalog()) {
            std::cout << e.name;
            if (e.criterion > 0) std::cout << " [criterion " << e.criterion << "]";
            std::cout << ": " << e.summary << "\n";
        }
        return exit_pass;
    }

    ExperimentConfig config;
    try {
        if (!config_path.empty()) config = ExperimentConfig::load(config_path);
        if (!config.has("experiment")) config.set("experiment", experiment);
        if (config.experiment() != experiment) {
            throw ConfigError("config is for '" + config.experiment() + "', not '" + experiment + "'");
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }

    const RunOutcome out = run_checked(config);
    if (out.exit_code == exit_config || out.exit_code == exit_numerical) {
        std::cerr << "error: " << out.error << "\n";
        return out.exit_code;
    }
    try {
        write_outputs(out.report, config, out_dir, plot == "svg");
    } catch (const std::exception& e) {
        std::cerr << "error: cannot write outputs: " << e.what() << "\n";
        return exit_numerical;
    }
    for (const auto& c : out.report.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
                  << " target=" << format_double(c.target) << " tol=" << format_double(c.tolerance) << "\n";
    }
    std::cout << out.report.experiment << ": " << (out.exit_code == exit_pass ? "pass" : "FAIL") << " (config "
              << config.hash() << ")\n";
    return out.exit_code;
}
