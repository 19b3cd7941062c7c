#include <iostream>

#include <CLI11.hpp>

#include <beurling/cli.hpp>

int main(int argc, char** argv) {
    namespace bc = beurling::cli;
    CLI::App app{"Certified numerics for Beurling zeta functions"};
    app.set_version_flag("--version", std::string(beurling::kToolVersion));
    std::string config_path, out_override;
    int jobs = 1;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", out_override, "output directory (overrides output.dir)");

    auto* plot = app.add_subcommand("plot", "reshape a report artifact into tidy plot data");
    std::string artifact, kind, plot_out;
    plot->add_option("--artifact", artifact, "report CSV")->required();
    plot->add_option("--kind", kind, "deviation, bounds or zeros")->required();
    plot->add_option("--output", plot_out, "destination CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : bc::kConfigError;
    }

    if (plot->parsed()) {
        try {
            beurling::emit_plot_data(artifact, beurling::plot_kind_from_string(kind), plot_out, {});
        } catch (const beurling::BeurlingError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return bc::kConfigError;
        }
        return 0;
    }
    if (config_path.empty()) {
        std::cerr << "error: --config is required\n" << app.help();
        return bc::kConfigError;
    }
    bc::RunConfig cfg;
    try {
        cfg = bc::load_config(config_path);
    } catch (const beurling::BeurlingError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return bc::kConfigError;
    }
    cfg.jobs = jobs;
    if (!out_override.empty()) cfg.out_dir = out_override;
    const bc::RunResult r = bc::run(cfg);
    if (!r.message.empty()) std::cerr << r.message << "\n";
    for (const auto& a : r.artifacts) std::cout << "wrote " << a.string() << "\n";
    return r.exit_code;
}
