#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bidisc/pipeline.hpp"

using namespace bidisc;

namespace {

// "1,1;8,8" -> {(1,1), (8,8)}; the empty string is the empty list.
std::vector<ModeKey> parse_modes(const std::string& text) {
    std::vector<ModeKey> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        const auto comma = item.find(',');
        if (comma == std::string::npos) throw ConfigError("--modes: expected m1,m2 pairs separated by ';'");
        out.push_back({std::stoi(item.substr(0, comma)), std::stoi(item.substr(comma + 1))});
    }
    return out;
}

// Config errors happen before a RunConfig exists; the record goes to --out (default "out").
int error_exit(const std::string& out_dir, const std::string& message) {
    const nlohmann::json rec{{"exit_code", 1}, {"kind", "validation"}, {"message", message}};
    std::cerr << rec.dump() << "\n";
    const std::filesystem::path dir = out_dir.empty() ? "out" : out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!ec) std::ofstream(dir / "error.json") << rec.dump(2) << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical dbar-Neumann problem on the bi-disc"};
    std::string config_path, preset_name, out_dir, modes, study = "pipeline";
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--preset", preset_name, "data preset: zero, polynomial, corner-one, suff-satisfying, suff-violating");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--modes", modes, "modes for the series study, e.g. \"1,1;8,8\"");
    app.add_option("--study", study, "which study to run")->check(CLI::IsMember({"pipeline", "series", "bergman", "sufficiency"}));
    CLI11_PARSE(app, argc, argv);

    RunConfig c;
    try {
        nlohmann::json j = nlohmann::json::object();
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            j = nlohmann::json::parse(is);
        }
        if (!preset_name.empty()) j["data"] = {{"preset", preset_name}};
        if (!out_dir.empty()) j["out"] = out_dir;
        if (app.count("--modes")) {
            j["modes"] = nlohmann::json::array();
            for (const auto& [a, b] : parse_modes(modes)) j["modes"].push_back({a, b});
        }
        c = run_config_from_json(j);
    } catch (const std::exception& e) {
        return error_exit(out_dir, e.what());
    }

    if (study == "series") return run_series_study(c);
    if (study == "bergman") return run_bergman_study(c);
    if (study == "sufficiency") return run_sufficiency_study(c);
    return run_pipeline(c);
}
