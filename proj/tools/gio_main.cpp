#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gio/config.hpp"
#include "gio/sweep.hpp"

namespace {

// 0 success, 2 configuration, 3 physics, 4 numerics.
constexpr int exit_config = 2;
constexpr int exit_physics = 3;
constexpr int exit_numerics = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gio::ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int do_run(const std::string& cfg_path) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string raw = slurp(cfg_path);
    const gio::RunConfig cfg = gio::parse_run_config(raw);
    if (cfg.output_path.empty())
        throw gio::ConfigError("config: 'output_path' is required for run");

    const gio::RunResult res = gio::execute_run(cfg);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    gio::write_atomic(cfg.output_path,
                      gio::render_csv(cfg, res, gio::config_fingerprint(raw), wall_ms));
    std::cout << "wrote " << cfg.output_path << " (" << res.rows.size()
              << (res.rows.size() == 1 ? " row, " : " rows, ") << res.columns.size() + 1
              << " columns)\n";
    for (const auto& warning : res.warnings) std::cerr << "warning: " << warning << "\n";
    return 0;
}

int do_validate(const std::string& cfg_path) {
    const gio::RunConfig cfg = gio::parse_run_config(slurp(cfg_path));
    std::cout << gio::validate_report(cfg);
    return 0;
}

int do_presets_list() {
    std::cout << "indium_table1  trapped-ion cavity model, published parameter table\n"
              << "raw_indium     same model derived from raw experimental inputs\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian input-output channel calculator"};
    app.require_subcommand(1);

    std::string run_cfg, validate_cfg;
    auto* run_cmd = app.add_subcommand("run", "execute a sweep and write the result table");
    run_cmd->add_option("config", run_cfg, "run configuration (JSON)")->required();
    auto* val_cmd = app.add_subcommand("validate", "check a configuration and print derived quantities");
    val_cmd->add_option("config", validate_cfg, "run configuration (JSON)")->required();
    auto* presets_cmd = app.add_subcommand("presets", "preset operations");
    auto* list_cmd = presets_cmd->add_subcommand("list", "list shipped scenario presets");
    presets_cmd->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return exit_config;
    }

    try {
        if (*run_cmd) return do_run(run_cfg);
        if (*val_cmd) return do_validate(validate_cfg);
        if (*list_cmd) return do_presets_list();
    } catch (const gio::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const gio::PhysicsError& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return exit_physics;
    } catch (const gio::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_numerics;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerics;
    }
    return exit_config;
}
