// mazer-sim: parameter sweeps, resonance scans and beam filtering for the
// cold-atom micromaser. Writes CSV.

#include <mazer/cli.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

int main(int argc, char** argv)
{
    using namespace mazer::cli;

    CLI::App app{"Cold-atom micromaser (mazer) scattering simulator"};
    app.set_version_flag("--version", std::string(mazer::version));

    std::string command;
    std::string config_path;
    std::map<std::string, std::string> flags;
    auto flag = [&](const std::string& name, const std::string& help) {
        return app.add_option_function<std::string>(
            "--" + name,
            [&flags, name](const std::string& v) { flags[normalize_key(name)] = v; },
            help);
    };

    std::string names;
    for (const auto& [name, value] : command_names()) {
        names += (names.empty() ? "" : ", ") + name;
    }
    app.add_option("command", command, "One of: " + names);
    app.add_option("--config", config_path, "key = value configuration file");
    flag("k-over-kappa", "Incident wavenumber k/kappa");
    flag("delta-over-g", "Detuning delta/g");
    flag("n", "Initial photon number");
    flag("kappa-l", "Interaction length kappa*L");
    flag("mode", "mesa | sech2 | sin2 | custom:PATH");
    flag("grid", "start:stop:count or comma-separated values");
    flag("segments", "Segments for non-mesa modes");
    flag("out", "Output CSV path (stdout if omitted)");
    flag("g-hz", "Coupling g/2pi in Hz (width conversion)");
    flag("mass-kg", "Atomic mass in kg");
    flag("k0-over-kappa", "Most probable k/kappa of the beam");
    flag("axis", "find-peaks axis: kappa_L | delta_over_g | k_over_kappa");
    flag("observable", "R_a | T_a | R_b | T_b | P_em | T_total");
    flag("min-prominence", "Minimum peak prominence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        Settings settings;
        std::filesystem::path base_dir;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw ConfigError("cannot open config file: " + config_path);
            }
            settings = parse_settings(in);
            base_dir = std::filesystem::path(config_path).parent_path();
        }
        for (const auto& [key, value] : flags) {
            settings[key] = value;
            if (key == "mode") {
                base_dir.clear();
            }
        }
        if (!command.empty()) {
            settings["command"] = command;
        }
        if (!settings.contains("command")) {
            throw ConfigError("no command given");
        }
        return run(make_config(settings, base_dir));
    } catch (const ConfigError& e) {
        std::cerr << "mazer-sim: " << e.what() << '\n';
        return exit_config;
    } catch (const mazer::InvalidParameter& e) {
        std::cerr << "mazer-sim: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "mazer-sim: solver error: " << e.what() << '\n';
        return exit_solver;
    }
}
