#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdqfc/counting.hpp"
#include "hdqfc/sfg.hpp"

namespace hdqfc::workbench {

using json = nlohmann::json;

struct GridBlock {
    std::size_t n_points = 512;
    std::size_t z_steps = 200;
    std::optional<double> pitch;  // m; default sizes the window to 8x the largest beam
};

struct PumpBlock {
    double power = 0.2;                 // W
    double flat_top_width = 200e-6;     // m
    double gaussian_waist = 100e-6;     // m
    int edge_order = 20;
    bool diffraction = true;
};

struct SignalBlock {
    double waist = 100e-6;  // m
    double power = 1e-3;    // W
};

struct Fig1Block {
    std::vector<int> charges{-2, -1, 0, 1, 2};
    std::vector<double> gammas{1.0, 2.0, 3.0, 4.0};
    std::vector<int> surface_charges{-2, -1, 0, 1, 2};
};

struct Fig3Block {
    std::vector<int> crosstalk_charges{-3, -2, -1, 0, 1, 2, 3};
    double crosstalk_duration = 30.0;  // s
    double crosstalk_rate = 12.0;      // Hz
    double crosstalk_dark_rate = 0.2;  // Hz
    double collection_decay = 0.35;    // per |L|
    int phase_steps = 60;
    double interference_rate = 5.0;    // Hz
    double interference_dark_rate = 0.1;
    std::vector<double> interference_durations{60.0, 150.0};  // s per point, d = 2 and d = 3
};

struct Fig4Block {
    std::vector<int> dimensions{2, 3, 5};
    std::vector<double> durations{100.0, 300.0, 300.0};  // s
    std::vector<double> dark_counts{16.0, 20.0, 40.0};   // per analyzer over the duration
    double source_rate = 5.0;                            // Hz
    qudit::CollectionModel collection = qudit::CollectionModel::projective;
    int replicates = 20;
};

struct Table1Block {
    std::vector<int> charges{0, 1, 2, 3};
};

struct SweepBlock {
    sfg::PumpKind kind = sfg::PumpKind::flat_top;
    std::vector<int> charges{-2, -1, 0, 1, 2};
    std::vector<double> gammas{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
};

struct TomoBlock {
    int dimension = 3;
    std::vector<qudit::cplx> amplitudes;  // empty = balanced
    double duration = 300.0;
    double source_rate = 5.0;
    double dark_rate = 0.0;
    qudit::CollectionModel collection = qudit::CollectionModel::ideal;
    bool subtract_dark = false;
};

struct ScenarioConfig {
    std::string scenario = "fig1";
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    sfg::CrystalSpec crystal;
    sfg::WaveTriplet triplet;
    GridBlock grid;
    PumpBlock pump;
    SignalBlock signal;
    Fig1Block fig1;
    Fig3Block fig3;
    Fig4Block fig4;
    Table1Block table1;
    SweepBlock sweep;
    TomoBlock tomo;
};

struct ConfigIssue {
    std::string path;  // e.g. "triplet.visible_m"
    std::string message;
    bool warning = false;
};

/// Schema and physics checks without running anything. Unknown keys are errors.
std::vector<ConfigIssue> validate_config(const json& document);

/// Parses and validates; any error-level issue throws ValidationError listing
/// every issue with its path.
ScenarioConfig parse_config(const json& document);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical form with every field explicit.
json to_json(const ScenarioConfig& config);

const std::vector<std::string>& scenario_names();

// ---------------------------------------------------------------------------

enum class Format { csv, json };
Format format_from_string(const std::string& name);

/// Column-oriented table written as CSV or as a JSON array of records.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    std::string to_csv() const;
    json to_json() const;
};

struct OutputFile {
    std::string name;
    std::string content;
};

struct ScenarioOutput {
    std::vector<OutputFile> files;
    json summary;
};

ScenarioOutput run_fig1(const ScenarioConfig& config, Format format = Format::csv);
ScenarioOutput run_fig3(const ScenarioConfig& config, Format format = Format::csv);
ScenarioOutput run_fig4(const ScenarioConfig& config, Format format = Format::csv);
ScenarioOutput run_table1(const ScenarioConfig& config, Format format = Format::csv);
ScenarioOutput run_sweep(const ScenarioConfig& config, Format format = Format::csv);
ScenarioOutput run_tomo(const ScenarioConfig& config, Format format = Format::csv);
ScenarioOutput run_scenario(const std::string& name, const ScenarioConfig& config, Format format = Format::csv);

/// Density matrix as nested [re, im] pairs, row-major.
json density_matrix_json(const qudit::Matrix& rho);

// ---------------------------------------------------------------------------

struct LiteratureEntry {
    std::string reference;
    std::string configuration;
    std::string state;
    int charge;
    double eta_p;  // %/W
};

std::vector<LiteratureEntry> load_literature(const std::filesystem::path& path = {});
std::filesystem::path default_literature_path();

// ---------------------------------------------------------------------------

std::string software_version();
std::string sha256_hex(const std::string& bytes);

struct RunManifest {
    std::string scenario;
    std::string version;
    json config;
    std::uint64_t seed = 0;
    double wall_clock_s = 0.0;
    std::map<std::string, std::string> checksums;  // file -> sha256

    json to_json() const;
};

/// Writes every output plus summary.json and manifest.json into `dir`.
RunManifest write_outputs(const std::filesystem::path& dir, const std::string& scenario, const ScenarioConfig& config,
                          const ScenarioOutput& output, double wall_clock_s);

}  // namespace hdqfc::workbench
