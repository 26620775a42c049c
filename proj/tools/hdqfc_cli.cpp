#include <chrono>
#include <fstream>
#include <iostream>

#include <omp.h>

#include <CLI11.hpp>

#include "hdqfc/errors.hpp"
#include "hdqfc/workbench.hpp"

namespace wb = hdqfc::workbench;

namespace {

constexpr int exit_validation = 2;
constexpr int exit_numerical = 3;

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    int threads = 0;
    std::string format = "csv";
};

int run_validate(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        return exit_validation;
    }
    wb::json doc;
    try {
        doc = wb::json::parse(in);
    } catch (const wb::json::parse_error& e) {
        std::cout << "error: <document>: not valid JSON: " << e.what() << "\n";
        return exit_validation;
    }
    bool failed = false;
    for (const auto& issue : wb::validate_config(doc)) {
        std::cout << (issue.warning ? "warning: " : "error: ") << (issue.path.empty() ? "<root>" : issue.path) << ": "
                  << issue.message << "\n";
        failed = failed || !issue.warning;
    }
    return failed ? exit_validation : 0;
}

int run(const std::string& scenario, const RunOptions& opt) {
    wb::ScenarioConfig cfg = opt.config.empty() ? wb::ScenarioConfig{} : wb::load_config(opt.config);
    cfg.scenario = scenario;
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.out.empty()) cfg.output_dir = opt.out;
    if (opt.threads > 0) omp_set_num_threads(opt.threads);
    const auto format = wb::format_from_string(opt.format);

    const auto start = std::chrono::steady_clock::now();
    const auto output = wb::run_scenario(scenario, cfg, format);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto manifest = wb::write_outputs(cfg.output_dir, scenario, cfg, output, elapsed);

    for (const auto& [file, sum] : manifest.checksums) std::cout << sum << "  " << cfg.output_dir << "/" << file << "\n";
    std::cout << output.summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hdqfc: OAM quantum frequency converter workbench"};
    app.require_subcommand(1);
    app.set_version_flag("--version", wb::software_version());

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "schema and physics checks of a config, no computation");
    validate->add_option("--config,config", validate_path, "config file")->required();

    const std::vector<std::pair<std::string, std::string>> scenarios{
        {"fig1", "Gaussian vs flat-top conversion efficiency tables and gamma surfaces"},
        {"fig3", "crosstalk matrix and interference scans"},
        {"fig4", "tomography of balanced qudits in d = 2, 3, 5"},
        {"table1", "simulated efficiencies next to the literature constants"},
        {"sweep", "conversion efficiency over an (L, gamma) grid"},
        {"tomo", "single tomography run"}};
    RunOptions opt;
    for (const auto& [name, help] : scenarios) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "config file (defaults built in)");
        sub->add_option("--seed", opt.seed, "RNG seed, overrides the config");
        sub->add_option("--out", opt.out, "output directory, overrides the config");
        sub->add_option("--threads", opt.threads, "OpenMP threads")->check(CLI::NonNegativeNumber);
        sub->add_option("--format", opt.format, "table format")->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_validation;
    }

    try {
        if (validate->parsed()) return run_validate(validate_path);
        for (const auto& [name, _] : scenarios)
            if (app.get_subcommand(name)->parsed()) return run(name, opt);
    } catch (const hdqfc::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return exit_validation;
    } catch (const hdqfc::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    }
    return 0;
}
