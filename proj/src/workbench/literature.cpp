#include <fstream>

#include "hdqfc/errors.hpp"
#include "hdqfc/workbench.hpp"

namespace hdqfc::workbench {

std::filesystem::path default_literature_path() {
    return std::filesystem::path(HDQFC_DATA_DIR) / "table1_literature.json";
}

std::vector<LiteratureEntry> load_literature(const std::filesystem::path& path) {
    const auto file = path.empty() ? default_literature_path() : path;
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open literature table " + file.string());
    std::vector<LiteratureEntry> out;
    try {
        const json doc = json::parse(in);
        for (const auto& row : doc.at("rows"))
            for (const auto& e : row.at("entries"))
                out.push_back({row.at("reference").get<std::string>(), row.at("configuration").get<std::string>(),
                               row.at("state").get<std::string>(), e.at("L").get<int>(), e.at("eta_p").get<double>()});
    } catch (const json::exception& e) {
        throw ValidationError("malformed literature table " + file.string() + ": " + e.what());
    }
    return out;
}

}  // namespace hdqfc::workbench
