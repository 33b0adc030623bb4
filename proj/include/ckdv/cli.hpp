#pragma once

// Experiment configuration, artifact writers and the ckdvlab subcommands.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ckdv {

inline constexpr const char* library_version = "1.0.0";

struct ExperimentConfig {
    std::string command = "theorem1";
    // grid
    std::size_t n = 256;
    double length = 40.0;  ///< L_tau
    // model
    std::vector<double> eps{0.12, 0.1, 0.08, 0.065};
    double rho0 = 1.0;
    double rho1 = 1.5;
    double alpha = 1e8;
    double beta = 0.0;
    double offset = 1.0;
    double amplitude = 1.0;  ///< derivative-of-Gaussian source data
    double width = 1.0;
    std::vector<double> rhos{1.0, 20.0, 100.0, 500.0};
    std::vector<double> times{50.0, 100.0};
    // solver
    double d_rho = 1e-3;
    double dr = 0.2;
    double rhs_tol = 1e-12;
    bool dealias = true;
    double energy_bound = 1000.0;
    double slope_tol = 0.3;
    // output
    std::string out = "out";
    std::uint64_t seed = 12345;
    bool quiet = false;
    bool flip_b2_sign = false;  ///< debug hook for the self-test

    bool operator==(const ExperimentConfig&) const = default;
};

/// Defaults tuned per subcommand (grid length, eps list, pulse width).
ExperimentConfig default_config(const std::string& command);

/// Throws ConfigError for an unknown command or out-of-range parameters.
void validate(const ExperimentConfig& cfg);

/// INI text with sections [run], [grid], [model], [solver], [debug].
/// Numbers use the shortest round-trip form, so parsing the text
/// gives back an identical config.
std::string to_ini(const ExperimentConfig& cfg);
ExperimentConfig from_ini(const std::string& text, ExperimentConfig base);
/// Throws ConfigError if the file cannot be read or parsed.
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base);

/// 64-bit FNV-1a hash of to_ini(cfg), as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Comma-separated list of reals.
std::vector<double> parse_real_list(const std::string& text);
std::string format_real(double x);

/// Manifest lines (without the comment prefix) shared by all artifacts.
std::vector<std::string> manifest_lines(const ExperimentConfig& cfg);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
};

/// RFC-4180 quoting for one field.
std::string csv_field(const std::string& s);
/// Manifest as "# " lines, then the header row and the data rows.
void write_csv(const std::filesystem::path& path, const CsvTable& table, const std::vector<std::string>& manifest);

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgPlot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool logx = false;
    bool logy = false;
    std::vector<SvgSeries> series;
};

/// SVG 1.1 document: axes with ticks, one polyline per series, legend.
std::string render_svg(const SvgPlot& plot, const std::vector<std::string>& manifest = {});
void write_svg(const std::filesystem::path& path, const SvgPlot& plot, const std::vector<std::string>& manifest);

struct CommandResult {
    int status = 0;  ///< 0 success, 1 a check failed
    std::vector<std::filesystem::path> files;
    std::vector<std::string> summary;  ///< human-readable lines
};

CommandResult cmd_soliton(const ExperimentConfig& cfg);
CommandResult cmd_residual_sweep(const ExperimentConfig& cfg);
CommandResult cmd_theorem1(const ExperimentConfig& cfg);
CommandResult cmd_ckdv(const ExperimentConfig& cfg);
CommandResult cmd_boussinesq(const ExperimentConfig& cfg);
CommandResult cmd_selftest(const ExperimentConfig& cfg);

/// Dispatches on cfg.command.
CommandResult run_command(const ExperimentConfig& cfg);

struct SelfCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
};

/// Wronskian, propagator, Bessel, round-trip, resolvent and zero-mean
/// checks. flip_b2_sign is forwarded to the Bessel check.
std::vector<SelfCheck> run_self_checks(bool flip_b2_sign = false);

} // namespace ckdv
