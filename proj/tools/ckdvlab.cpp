// ckdvlab: experiment runner for the cKdV / radial Boussinesq library.
//
//   ckdvlab <command> [--config FILE] [--out DIR] [--eps LIST] [--n N] [--quiet]
//
// Exit codes: 0 success, 1 a numerical check failed, 2 usage or config error,
// 3 solver failure.

#include "ckdv/cli.hpp"
#include "ckdv/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

int main(int argc, char** argv)
{
    CLI::App app{"cKdV and radial Boussinesq experiments"};
    app.set_version_flag("--version", std::string("ckdvlab ") + ckdv::library_version);
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<std::string> eps_list;
    std::size_t n = 0;
    bool quiet = false, flip = false;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"soliton", "closed-form solitary wave: profiles, decay and mass diagnostics"},
        {"residual-sweep", "residual of the long-wave ansatz against eps"},
        {"theorem1", "Boussinesq solution against the ansatz, error and energy"},
        {"ckdv", "evolve derivative-of-Gaussian data under cKdV"},
        {"boussinesq", "one Boussinesq run seeded from the ansatz"},
        {"selftest", "built-in numerical checks"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--eps", eps_list, "comma-separated eps values");
        sub->add_option("--n", n, "grid size");
        sub->add_flag("--quiet", quiet, "print nothing but errors");
        sub->add_flag("--flip-b2-sign", flip, "debug: replace B^2 by -B^2 in the Boussinesq solver");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        ckdv::ExperimentConfig cfg = ckdv::default_config(command);
        if (!config_path.empty()) {
            cfg = ckdv::load_config(config_path, cfg);
            if (cfg.command != command) {
                throw ckdv::ConfigError("config is for '" + cfg.command + "' but the command is '" + command + "'");
            }
        }
        if (!out_dir.empty()) cfg.out = out_dir;
        if (eps_list) cfg.eps = ckdv::parse_real_list(*eps_list);
        if (n != 0) cfg.n = n;
        if (quiet) cfg.quiet = true;
        if (flip) cfg.flip_b2_sign = true;
        ckdv::validate(cfg);

        const ckdv::CommandResult res = ckdv::run_command(cfg);
        if (!cfg.quiet) {
            for (const auto& line : res.summary) std::cout << line << "\n";
            for (const auto& f : res.files) std::cout << "wrote " << f.string() << "\n";
        }
        return res.status;
    } catch (const ckdv::ConfigError& e) {
        std::cerr << "ckdvlab: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ckdvlab: " << e.what() << "\n";
        return 3;
    }
}
