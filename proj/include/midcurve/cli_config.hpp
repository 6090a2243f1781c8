#pragma once

#include <optional>
#include <string>
#include <vector>

#include "midcurve/copula_pricer.hpp"
#include "midcurve/models.hpp"

namespace midcurve::cli {

/// Flat key=value configuration with dotted section keys. All rates accept
/// a `%` or `bp` suffix; vols are quoted in bp per year; everything is
/// converted to absolute decimals here and nowhere else.
struct run_config {
    std::string curve_file;

    double t_x = 0.0, t_s = 0.0, t_e = 0.0;
    double frequency = 1.0;
    double notional = 1.0;
    copula_pricer::option_side side = copula_pricer::option_side::receiver;
    std::optional<double> strike;      // absolute decimal
    bool strike_is_atm = false;

    std::optional<double> r_s0, r_e0;  // absolute decimals; both or neither
    double vol_s_annual = 0.0;         // absolute decimal per year
    double vol_e_annual = 0.0;
    double rho = 0.0;

    models::model_kind kind = models::model_kind::deterministic;
    double sigma_e = 0.0, sigma_s = 0.0;

    std::string method = "quadrature"; // quadrature | mc
    int order = 64;
    long paths = 1'000'000;
    std::uint64_t seed = 0;
    int workers = 1;
    models::grid_spec grid;

    std::string strikes_spec;          // lo:hi:step or atm±X:step
    std::vector<double> period_vols_annual; // calibrate override, absolute decimals
};

/// Parses a decimal rate with optional `%` (divide by 100) or `bp`
/// (divide by 10000) suffix.
double parse_rate(const std::string& text);

/// Parses a vol quoted in bp/year (optionally suffixed `bp`, or quoted in
/// percent with `%`) to an absolute decimal per year.
double parse_vol(const std::string& text);

run_config parse_config_file(const std::string& path);

/// Expands a strike specification into an inclusive grid. `atm` in the text
/// is replaced by the supplied value; accepts `lo:hi:step`, `atm±X:step`
/// and the ASCII form `atm+-X:step`.
std::vector<double> expand_strikes(const std::string& spec, double atm);

struct command_overrides {
    std::optional<std::string> model;
    std::optional<std::string> method;
    std::optional<long> paths;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> strikes;
};

int run_price(const run_config& config, const command_overrides& overrides,
              std::ostream& out);
int run_skew(const run_config& config, const command_overrides& overrides,
             std::ostream& out);
int run_calibrate(const run_config& config, const command_overrides& overrides,
                  std::ostream& out);
int run_marginal_dump(const run_config& config, const command_overrides& overrides,
                      std::ostream& out);

/// Formats a double with 12 significant digits (golden-file stable).
std::string format_number(double value);

} // namespace midcurve::cli
