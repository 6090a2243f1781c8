#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "midcurve/cli_config.hpp"
#include "midcurve/errors.hpp"

namespace {

struct command_args {
    std::string config_path;
    midcurve::cli::command_overrides overrides;
    std::optional<std::string> output_path;
};

void add_common_options(CLI::App* cmd, command_args& args) {
    cmd->add_option("--config", args.config_path, "Path to the key=value config file")
        ->required();
    cmd->add_option("--model", args.overrides.model,
                    "Override model.kind (deterministic|linear|loglinear)");
    cmd->add_option("--method", args.overrides.method,
                    "Override engine.method (quadrature|mc)");
    cmd->add_option("--paths", args.overrides.paths, "Override engine.paths");
    cmd->add_option("--seed", args.overrides.seed, "Override engine.seed");
    cmd->add_option("--strikes", args.overrides.strikes,
                    "Strike grid: lo:hi:step or atm±X:step");
    cmd->add_option("--output", args.output_path,
                    "Write the CSV to this file instead of stdout");
}

int dispatch(const command_args& args,
             int (*runner)(const midcurve::cli::run_config&,
                           const midcurve::cli::command_overrides&, std::ostream&)) {
    const auto config = midcurve::cli::parse_config_file(args.config_path);
    if (args.output_path) {
        std::ofstream out(*args.output_path);
        if (!out)
            throw midcurve::data_error("cannot open output file: " + *args.output_path);
        return runner(config, args.overrides, out);
    }
    return runner(config, args.overrides, std::cout);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"midcurve: physically settled midcurve swaption pricing under "
                 "terminal-swap-rate annuity models"};
    app.require_subcommand(1);

    command_args price_args, skew_args, calibrate_args, dump_args;
    auto* price = app.add_subcommand("price", "Price one midcurve swaption");
    add_common_options(price, price_args);
    auto* skew = app.add_subcommand(
        "skew", "Implied normal vol and implied correlation across strikes");
    add_common_options(skew, skew_args);
    auto* calibrate = app.add_subcommand(
        "calibrate", "Estimate the annuity-ratio slopes (sigma_e, sigma_s)");
    add_common_options(calibrate, calibrate_args);
    auto* dump = app.add_subcommand(
        "marginal-dump", "Dump natural and tilted marginal grids per leg");
    add_common_options(dump, dump_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (price->parsed()) return dispatch(price_args, midcurve::cli::run_price);
        if (skew->parsed()) return dispatch(skew_args, midcurve::cli::run_skew);
        if (calibrate->parsed())
            return dispatch(calibrate_args, midcurve::cli::run_calibrate);
        if (dump->parsed()) return dispatch(dump_args, midcurve::cli::run_marginal_dump);
        std::cerr << "error: no command given\n";
        return 2;
    } catch (const midcurve::invalid_input& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const midcurve::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
