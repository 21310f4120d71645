#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "magpair/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;

magpair::ScenarioConfig load_config(const std::string& path, bool dimensionless) {
    magpair::ScenarioConfig config = magpair::load_scenario(path);
    if (dimensionless) config = magpair::to_dimensionless(config);
    return config;
}

int cmd_run(const std::string& path, const std::string& out_dir, bool dimensionless, int threads) {
    const magpair::ScenarioConfig config = load_config(path, dimensionless);
    const magpair::RunSummary summary = magpair::run_scenario(config, out_dir, threads);
    for (const std::string& f : summary.files) std::cout << "wrote " << out_dir << "/" << f << "\n";
    if (summary.dicke_slope)
        std::cout << "dicke small-separation slope: " << *summary.dicke_slope << "\n";
    if (summary.flagged_rows > 0) {
        std::cout << summary.flagged_rows
                  << " oracle row(s) failed to converge (status no_convergence)\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}

int cmd_validate(const std::string& path, bool dimensionless) {
    const magpair::ScenarioConfig config = load_config(path, dimensionless);
    std::cout << "valid: " << path << "\n";
    std::cout << "  unit_mode: " << (config.unit_mode == magpair::UnitMode::SI ? "si" : "dimensionless")
              << "\n";
    std::cout << "  dipole1 levels: " << config.dipole1.dim()
              << ", dipole2 levels: " << config.dipole2.dim() << "\n";
    std::cout << "  separation: " << config.geometry.r << "\n";
    std::cout << "  sweep: " << magpair::sweep_axis_name(config.sweep.axis);
    if (config.sweep.axis != magpair::SweepAxis::None)
        std::cout << " [" << config.sweep.min << ", " << config.sweep.max << "] x "
                  << config.sweep.points << (config.sweep.log_spacing ? " (log)" : " (linear)");
    std::cout << "\n  outputs:";
    for (magpair::OutputKind k : config.outputs) std::cout << " " << magpair::output_kind_name(k);
    std::cout << "\n  config_hash: " << magpair::scenario_config_hash(config) << "\n";
    return kExitOk;
}

int cmd_oracle_check(const std::string& path, bool dimensionless) {
    const magpair::ScenarioConfig config = load_config(path, dimensionless);
    const std::vector<magpair::OracleCheckRow> rows = magpair::oracle_check(config);
    std::printf("%-6s %-34s %23s %23s %12s %s\n", "what", "where", "closed(re)", "oracle(re)", "rel_err",
                "result");
    int failures = 0;
    for (const auto& row : rows) {
        const bool ok = row.pass;
        if (!ok) ++failures;
        std::printf("%-6s %-34s %23.15e %23.15e %12.3e %s\n", row.quantity.c_str(), row.where.c_str(),
                    row.closed.real(), row.oracle.real(), row.rel_err,
                    ok ? "pass" : (row.status == "no_convergence" ? "FAIL (no convergence)" : "FAIL"));
    }
    std::printf("%d/%zu checks passed\n", static_cast<int>(rows.size()) - failures, rows.size());
    if (failures == 0) return kExitOk;
    for (const auto& row : rows)
        if (!row.pass && row.status == "no_convergence") return kExitNoConvergence;
    return kExitNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"magpair: field-induced magnetic dipole-dipole interaction calculator"};
    app.require_subcommand(1);

    bool dimensionless = false;
    int threads = 1;
    app.add_flag("--dimensionless", dimensionless, "rescale the scenario to mu0 = hbar = c = 1");
    app.add_option("--threads", threads, "worker threads for sweep points")->check(CLI::PositiveNumber);

    std::string run_file, out_dir = "out";
    CLI::App* run = app.add_subcommand("run", "execute a scenario and write CSV outputs + manifest");
    run->add_option("file", run_file, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (created if missing)");

    std::string validate_file;
    CLI::App* validate = app.add_subcommand("validate", "parse and validate a scenario file");
    validate->add_option("file", validate_file, "scenario JSON file")->required();

    std::string oracle_file;
    CLI::App* oracle =
        app.add_subcommand("oracle-check", "compare closed forms against quadrature oracles");
    oracle->add_option("file", oracle_file, "scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (run->parsed()) return cmd_run(run_file, out_dir, dimensionless, threads);
        if (validate->parsed()) return cmd_validate(validate_file, dimensionless);
        if (oracle->parsed()) return cmd_oracle_check(oracle_file, dimensionless);
    } catch (const magpair::ScenarioError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const magpair::ExtrapolationError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitValidation;
}
