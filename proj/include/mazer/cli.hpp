#ifndef MAZER_CLI_HPP
#define MAZER_CLI_HPP

#include <mazer/beams.hpp>
#include <mazer/observables.hpp>
#include <mazer/peaks.hpp>

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace mazer::cli {

/// Bad configuration; maps to exit status 1.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 1;
inline constexpr int exit_solver = 2;

enum class Command {
    SweepLength,
    SweepDetuning,
    SweepK,
    TransmissionScan,
    BeamFilter,
    FindPeaks,
    JcCompare
};

inline const std::map<std::string, Command>& command_names()
{
    static const std::map<std::string, Command> names = {
        {"sweep-length", Command::SweepLength},
        {"sweep-detuning", Command::SweepDetuning},
        {"sweep-k", Command::SweepK},
        {"transmission-scan", Command::TransmissionScan},
        {"beam-filter", Command::BeamFilter},
        {"find-peaks", Command::FindPeaks},
        {"jc-compare", Command::JcCompare},
    };
    return names;
}

inline std::string to_string(Command command)
{
    for (const auto& [name, value] : command_names()) {
        if (value == command) {
            return name;
        }
    }
    return "unknown";
}

/// Either `start:stop:count` or an explicit comma-separated list.
struct GridSpec
{
    std::string text;
    std::vector<double> values;
};

/* keys are normalized to snake_case */
using Settings = std::map<std::string, std::string>;

struct RunConfig
{
    Command command = Command::SweepLength;
    ModelParams params{0.05, 0.0, 0, 10.0, ModeKind::Mesa};
    std::string mode_text = "mesa";
    SolverOptions solver;
    std::optional<GridSpec> grid;
    std::string out_path;
    std::optional<double> g_hz;
    std::optional<double> mass_kg;
    double k0_over_kappa = 0.05;
    SweepAxis axis = SweepAxis::KappaL;
    Observable observable = Observable::P_em;
    double min_prominence = default_min_prominence;
};

inline std::string normalize_key(std::string key)
{
    for (char& c : key) {
        if (c == '-') {
            c = '_';
        } else {
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    return key;
}

inline std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Parses `key = value` lines; `#` starts a comment.
inline Settings parse_settings(std::istream& in)
{
    Settings settings;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected `key = value`");
        }
        const std::string key = normalize_key(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key");
        }
        settings[key] = value;
    }
    return settings;
}

inline double parse_real(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(value)) {
        throw ConfigError(key + ": not a finite number: '" + text + "'");
    }
    return value;
}

inline long parse_integer(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + text + "'");
    }
    if (used != text.size()) {
        throw ConfigError(key + ": not an integer: '" + text + "'");
    }
    return value;
}

inline GridSpec parse_grid(const std::string& text)
{
    GridSpec grid{text, {}};
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, sep)) {
        parts.push_back(trim(part));
    }
    if (sep == ':') {
        if (parts.size() != 3) {
            throw ConfigError("grid: expected start:stop:count");
        }
        const long count = parse_integer("grid count", parts[2]);
        if (count < 2) {
            throw ConfigError("grid: count must be >= 2");
        }
        const double start = parse_real("grid start", parts[0]);
        const double stop = parse_real("grid stop", parts[1]);
        if (!(stop > start)) {
            throw ConfigError("grid: stop must exceed start");
        }
        grid.values = linspace(start, stop, static_cast<std::size_t>(count));
    } else {
        for (const auto& p : parts) {
            grid.values.push_back(parse_real("grid", p));
        }
        try {
            check_grid(grid.values);
        } catch (const InvalidParameter& e) {
            throw ConfigError(std::string("grid: ") + e.what());
        }
        if (grid.values.empty()) {
            throw ConfigError("grid: empty");
        }
    }
    return grid;
}

/**
 * Builds a run configuration from settings. Relative custom-mode paths are
 * resolved against base_dir.
 */
inline RunConfig make_config(const Settings& settings,
                             const std::filesystem::path& base_dir = {})
{
    RunConfig config;
    double k = 0.05;
    double delta = 0.0;
    long n = 0;
    double length = 10.0;
    ModeKind kind = ModeKind::Mesa;
    bool axis_set = false;
    bool observable_set = false;

    for (const auto& [key, value] : settings) {
        if (key == "command") {
            const auto it = command_names().find(value);
            if (it == command_names().end()) {
                throw ConfigError("unknown command: '" + value + "'");
            }
            config.command = it->second;
        } else if (key == "k_over_kappa") {
            k = parse_real(key, value);
        } else if (key == "delta_over_g") {
            delta = parse_real(key, value);
        } else if (key == "n") {
            n = parse_integer(key, value);
        } else if (key == "kappa_l") {
            length = parse_real(key, value);
        } else if (key == "mode") {
            config.mode_text = value;
            if (value == "mesa") {
                kind = ModeKind::Mesa;
            } else if (value == "sech2") {
                kind = ModeKind::SechSquared;
            } else if (value == "sin2") {
                kind = ModeKind::Sinusoidal;
            } else if (value.rfind("custom:", 0) == 0) {
                kind = ModeKind::Custom;
                std::filesystem::path path = value.substr(7);
                if (path.is_relative() && !base_dir.empty()) {
                    path = base_dir / path;
                }
                try {
                    config.solver.custom_mode = load_custom_mode(path.string(), 1.0);
                } catch (const InvalidParameter& e) {
                    throw ConfigError(std::string("mode: ") + e.what());
                }
            } else {
                throw ConfigError("unknown mode: '" + value + "'");
            }
        } else if (key == "grid") {
            config.grid = parse_grid(value);
        } else if (key == "segments") {
            const long segments = parse_integer(key, value);
            if (segments < 1) {
                throw ConfigError("segments must be >= 1");
            }
            config.solver.segments = static_cast<std::size_t>(segments);
        } else if (key == "out") {
            config.out_path = value;
        } else if (key == "g_hz") {
            config.g_hz = parse_real(key, value);
            if (!(*config.g_hz > 0.0)) {
                throw ConfigError("g_hz must be > 0");
            }
        } else if (key == "mass_kg") {
            config.mass_kg = parse_real(key, value);
            if (!(*config.mass_kg > 0.0)) {
                throw ConfigError("mass_kg must be > 0");
            }
        } else if (key == "k0_over_kappa") {
            config.k0_over_kappa = parse_real(key, value);
            if (!(config.k0_over_kappa > 0.0)) {
                throw ConfigError("k0_over_kappa must be > 0");
            }
        } else if (key == "axis") {
            axis_set = true;
            if (value == "kappa_L" || value == "kappa_l") {
                config.axis = SweepAxis::KappaL;
            } else if (value == "delta_over_g") {
                config.axis = SweepAxis::DeltaOverG;
            } else if (value == "k_over_kappa") {
                config.axis = SweepAxis::KOverKappa;
            } else {
                throw ConfigError("unknown axis: '" + value + "'");
            }
        } else if (key == "observable") {
            observable_set = true;
            static const std::map<std::string, Observable> names = {
                {"R_a", Observable::R_a}, {"T_a", Observable::T_a},
                {"R_b", Observable::R_b}, {"T_b", Observable::T_b},
                {"P_em", Observable::P_em}, {"T_total", Observable::T_total}};
            const auto it = names.find(value);
            if (it == names.end()) {
                throw ConfigError("unknown observable: '" + value + "'");
            }
            config.observable = it->second;
        } else if (key == "min_prominence") {
            config.min_prominence = parse_real(key, value);
        } else {
            throw ConfigError("unknown setting: '" + key + "'");
        }
    }

    if (n < 0 || n > 1000000) {
        throw ConfigError("n must be a non-negative photon number");
    }
    try {
        config.params = ModelParams(k, delta, static_cast<int>(n), length, kind);
    } catch (const InvalidParameter& e) {
        throw ConfigError(e.what());
    }

    switch (config.command) {
    case Command::SweepLength:
    case Command::JcCompare:
        config.axis = SweepAxis::KappaL;
        break;
    case Command::SweepDetuning:
        config.axis = SweepAxis::DeltaOverG;
        break;
    case Command::TransmissionScan:
        config.axis = SweepAxis::DeltaOverG;
        if (!observable_set) {
            config.observable = Observable::T_total;
        }
        break;
    case Command::SweepK:
    case Command::BeamFilter:
        config.axis = SweepAxis::KOverKappa;
        break;
    case Command::FindPeaks:
        if (!axis_set) {
            config.axis = SweepAxis::KappaL;
        }
        break;
    }
    if (config.grid && config.axis == SweepAxis::KOverKappa &&
        !(config.grid->values.front() > 0.0)) {
        throw ConfigError("grid: k/kappa values must be > 0");
    }
    if (config.grid && config.axis == SweepAxis::KappaL &&
        config.grid->values.front() < 0.0) {
        throw ConfigError("grid: kappa*L values must be >= 0");
    }
    return config;
}

inline std::string format_number(double value)
{
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

namespace detail {

inline std::vector<double> default_grid(const RunConfig& config)
{
    switch (config.axis) {
    case SweepAxis::KappaL: return linspace(0.0, 20.0, 2001);
    case SweepAxis::DeltaOverG: return linspace(-0.1, 0.1, 4001);
    case SweepAxis::KOverKappa: return linspace(0.005, 0.2, 2000);
    }
    return {};
}

inline std::string timestamp()
{
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

inline void write_preamble(std::ostream& out, const RunConfig& config,
                           const std::string& grid_text)
{
    const ModelParams& p = config.params;
    out << "# mazer-sim version: " << mazer::version << '\n';
    out << "# timestamp: " << timestamp() << '\n';
    out << "# command: " << to_string(config.command) << '\n';
    out << "# k_over_kappa: " << format_number(p.k_over_kappa()) << '\n';
    out << "# delta_over_g: " << format_number(p.delta_over_g()) << '\n';
    out << "# n: " << p.n_photons() << '\n';
    out << "# kappa_L: " << format_number(p.kappa_L()) << '\n';
    out << "# mode: " << config.mode_text << '\n';
    out << "# segments: " << config.solver.segments << '\n';
    out << "# axis: " << to_string(config.axis) << '\n';
    out << "# grid: " << grid_text << '\n';
    if (config.command == Command::BeamFilter) {
        out << "# k0_over_kappa: " << format_number(config.k0_over_kappa) << '\n';
    }
    if (config.command == Command::FindPeaks ||
        config.command == Command::TransmissionScan) {
        out << "# min_prominence: " << format_number(config.min_prominence) << '\n';
    }
    if (config.g_hz) {
        out << "# g_hz: " << format_number(*config.g_hz) << '\n';
    }
    if (config.mass_kg) {
        out << "# mass_kg: " << format_number(*config.mass_kg) << '\n';
    }
    if (config.g_hz && config.mass_kg) {
        const double k = config.params.k_over_kappa();
        out << "# incident_temperature_K: "
            << format_number(effective_temperature(k, *config.g_hz, *config.mass_kg))
            << '\n';
        if (const auto kb = cooling_wavenumber(k, config.params.delta_over_g())) {
            out << "# emitted_temperature_K: "
                << format_number(effective_temperature(*kb, *config.g_hz, *config.mass_kg))
                << '\n';
        }
    }
}

inline void write_outcome(std::ostream& out, const SweepRow& row)
{
    out << format_number(row.coordinate);
    if (row.outcome) {
        const auto& o = *row.outcome;
        for (double v : {o.R_a, o.T_a, o.R_b, o.T_b, o.P_em, o.T_total}) {
            out << ',' << format_number(v);
        }
    } else {
        out << ",nan,nan,nan,nan,nan,nan";
    }
    out << '\n';
}

inline std::function<double(double)> observable_function(const RunConfig& config)
{
    return [&config](double x) {
        try {
            return select(outcome(with_coordinate(config.params, config.axis, x),
                                  config.solver),
                          config.observable);
        } catch (const DegenerateInput&) {
            return 0.0;
        }
    };
}

} // namespace detail

/**
 * Executes one command and writes its CSV to `out`. Diagnostics go to `err`.
 * Returns 0 on success, 2 if any solver evaluation failed.
 */
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    std::vector<double> grid;
    std::string grid_text;
    if (config.grid) {
        grid = config.grid->values;
        grid_text = config.grid->text;
    } else if (config.command == Command::BeamFilter) {
        grid = beam_grid(config.k0_over_kappa, config.params, config.solver);
        grid_text = "adaptive";
    } else {
        grid = detail::default_grid(config);
        grid_text = "default";
    }
    out.precision(17);

    switch (config.command) {
    case Command::SweepLength:
    case Command::SweepDetuning:
    case Command::SweepK:
    case Command::TransmissionScan: {
        const SweepTable table = sweep(config.params, config.axis, grid, config.solver);
        int status = exit_ok;
        for (const auto& row : table.rows) {
            if (!row.outcome) {
                err << "solver error at " << to_string(config.axis) << " = "
                    << format_number(row.coordinate) << ": " << row.error << '\n';
                status = exit_solver;
            }
        }
        detail::write_preamble(out, config, grid_text);
        if (config.command == Command::TransmissionScan && grid.size() >= 3) {
            const auto peaks = find_peaks_refined(detail::observable_function(config),
                                                  grid, config.min_prominence);
            out << "# resonances: " << peaks.size() << '\n';
            for (const Peak& p : peaks) {
                out << "# resonance: position=" << format_number(p.position)
                    << " amplitude=" << format_number(p.amplitude)
                    << " fwhm=" << format_number(p.fwhm);
                if (config.g_hz) {
                    out << " fwhm_hz=" << format_number(width_in_hz(p.fwhm, *config.g_hz));
                }
                out << (p.partial ? " partial" : "") << '\n';
            }
        }
        out << to_string(config.axis) << ",R_a,T_a,R_b,T_b,P_em,T_total\n";
        for (const auto& row : table.rows) {
            detail::write_outcome(out, row);
        }
        return status;
    }
    case Command::JcCompare: {
        const SweepTable table = sweep(config.params, SweepAxis::KappaL, grid, config.solver);
        int status = exit_ok;
        detail::write_preamble(out, config, grid_text);
        out << "kappa_L,P_em,P_jc,abs_diff\n";
        for (const auto& row : table.rows) {
            const double jc = jc_emission_probability(config.params.with_kappa_L(row.coordinate));
            out << format_number(row.coordinate) << ',';
            if (row.outcome) {
                out << format_number(row.outcome->P_em) << ',' << format_number(jc)
                    << ',' << format_number(std::abs(row.outcome->P_em - jc)) << '\n';
            } else {
                err << "solver error at kappa_L = " << format_number(row.coordinate)
                    << ": " << row.error << '\n';
                status = exit_solver;
                out << "nan," << format_number(jc) << ",nan\n";
            }
        }
        return status;
    }
    case Command::FindPeaks: {
        if (grid.size() < 3) {
            throw ConfigError("find-peaks needs at least 3 grid points");
        }
        const auto peaks = find_peaks_refined(detail::observable_function(config),
                                              grid, config.min_prominence);
        detail::write_preamble(out, config, grid_text);
        out << "position,amplitude,fwhm,prominence,partial\n";
        for (const Peak& p : peaks) {
            out << format_number(p.position) << ',' << format_number(p.amplitude)
                << ',' << format_number(p.fwhm) << ',' << format_number(p.prominence)
                << ',' << (p.partial ? 1 : 0) << '\n';
        }
        return exit_ok;
    }
    case Command::BeamFilter: {
        const VelocityDistribution initial = maxwell_boltzmann(config.k0_over_kappa, grid);
        VelocityDistribution final_dist;
        try {
            final_dist = filter_distribution(initial, config.params, config.solver);
        } catch (const InvalidParameter&) {
            throw;
        } catch (const std::exception& e) {
            err << "solver error: " << e.what() << '\n';
            return exit_solver;
        }
        detail::write_preamble(out, config, grid_text);
        out << "k_over_kappa,P_i,P_f\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out << format_number(grid[i]) << ',' << format_number(initial.weights[i])
                << ',' << format_number(final_dist.weights[i]) << '\n';
        }
        return exit_ok;
    }
    }
    return exit_ok;
}

/// Runs and writes to config.out_path, or to stdout when it is empty.
inline int run(const RunConfig& config, std::ostream& err = std::cerr)
{
    if (config.out_path.empty()) {
        return run(config, std::cout, err);
    }
    std::ostringstream buffer;
    const int status = run(config, buffer, err);
    std::ofstream file(config.out_path, std::ios::binary);
    if (!file) {
        throw ConfigError("cannot write output file: " + config.out_path);
    }
    file << buffer.str();
    return status;
}

/// Golden-file comparison: equal after dropping `# timestamp:` lines.
inline std::string strip_timestamp(const std::string& csv)
{
    std::istringstream in(csv);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (line.rfind("# timestamp:", 0) == 0) {
            continue;
        }
        out += line;
        out += '\n';
    }
    return out;
}

} // namespace mazer::cli

#endif
