#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "hdqfc/errors.hpp"
#include "hdqfc/workbench.hpp"

namespace hdqfc::workbench {

std::string software_version() { return HDQFC_VERSION; }

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw NumericalError("SHA-256 digest failed");
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

json RunManifest::to_json() const {
    json outputs = json::object();
    for (const auto& [file, sum] : checksums) outputs[file] = {{"sha256", sum}};
    return {{"scenario", scenario}, {"version", version}, {"seed", seed},
            {"wall_clock_s", wall_clock_s}, {"config", config}, {"outputs", outputs}};
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << content;
    if (!out) throw ValidationError("write failed for " + path.string());
}

}  // namespace

RunManifest write_outputs(const std::filesystem::path& dir, const std::string& scenario, const ScenarioConfig& config,
                          const ScenarioOutput& output, double wall_clock_s) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + dir.string() + ": " + ec.message());

    RunManifest m;
    m.scenario = scenario;
    m.version = software_version();
    m.config = to_json(config);
    m.seed = config.seed;
    m.wall_clock_s = wall_clock_s;

    auto emit = [&](const std::string& name, const std::string& content) {
        write_file(dir / name, content);
        m.checksums[name] = sha256_hex(content);
    };
    for (const auto& f : output.files) emit(f.name, f.content);
    emit(scenario + "_summary.json", output.summary.dump(2) + "\n");
    write_file(dir / (scenario + "_manifest.json"), m.to_json().dump(2) + "\n");
    return m;
}

}  // namespace hdqfc::workbench
