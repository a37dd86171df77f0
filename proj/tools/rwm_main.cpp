#include "rwm/config.hpp"
#include "rwm/reports.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>

int main(int argc, char** argv) {
    CLI::App app{"rwm: growth sequences, dyadic towers and renewal sequences"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    rwm::CommandOptions opts;
    std::string precision;
    app.add_option("--config", config_path, "configuration file (default: built-in)");
    app.add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    app.add_flag("--force", opts.force, "allow a brute-force depth below c(n_max)+2");
    app.add_option("--precision", precision, "override [run] precision")
        ->check(CLI::IsMember({"double", "exact"}));
    app.add_flag_callback("--print-config", [] {
        std::cout << rwm::default_config_text();
        std::exit(0);
    }, "print the built-in configuration and exit");

    const std::map<std::string, std::string> commands{
        {"growth", "growth sequence class, c(n) table, G2 partial sums"},
        {"tower", "tower correlations, return-sequence ratios, smiley report"},
        {"renewal", "renewal sequence, tail statistics, smoothness, Fourier bound"},
        {"product", "product model code sums, difference ratio, zero-type windows"},
        {"all", "every report above"}};
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : rwm::exit_config;
    }

    rwm::RunConfig cfg;
    try {
        cfg = config_path.empty() ? rwm::parse_config(rwm::default_config_text())
                                  : rwm::load_config(config_path);
        if (!precision.empty()) {
            rwm::set_precision(cfg, precision == "exact" ? rwm::Precision::exact
                                                         : rwm::Precision::double_precision);
        }
    } catch (const std::exception& e) {
        std::cerr << "rwm: config error: " << e.what() << '\n';
        return rwm::exit_config;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    return rwm::run_command(name, cfg, opts, std::cout, std::cerr);
}
