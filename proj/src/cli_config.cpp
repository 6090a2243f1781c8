#include "midcurve/cli_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "midcurve/curve_engine.hpp"
#include "midcurve/errors.hpp"
#include "midcurve/implied_metrics.hpp"
#include "midcurve/tsr_calibration.hpp"

namespace midcurve::cli {

namespace {

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

double parse_plain_number(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(text, &pos);
        if (pos != text.size())
            throw invalid_input("trailing characters in " + what + ": '" + text + "'");
        if (!std::isfinite(value))
            throw invalid_input(what + " is not finite: '" + text + "'");
        return value;
    } catch (const std::invalid_argument&) {
        throw invalid_input("cannot parse " + what + ": '" + text + "'");
    } catch (const std::out_of_range&) {
        throw invalid_input(what + " out of range: '" + text + "'");
    }
}

long parse_integer(const std::string& text, const std::string& what) {
    const double value = parse_plain_number(text, what);
    const long rounded = std::lround(value);
    if (std::abs(value - static_cast<double>(rounded)) > 1e-9)
        throw invalid_input(what + " must be an integer: '" + text + "'");
    return rounded;
}

} // namespace

double parse_rate(const std::string& text) {
    const std::string value = trim(text);
    if (value.empty()) throw invalid_input("empty rate");
    if (value.back() == '%')
        return parse_plain_number(trim(value.substr(0, value.size() - 1)), "rate") / 100.0;
    if (value.size() > 2 && value.compare(value.size() - 2, 2, "bp") == 0)
        return parse_plain_number(trim(value.substr(0, value.size() - 2)), "rate") / 10000.0;
    return parse_plain_number(value, "rate");
}

double parse_vol(const std::string& text) {
    const std::string value = trim(text);
    if (value.empty()) throw invalid_input("empty vol");
    if (value.back() == '%')
        return parse_plain_number(trim(value.substr(0, value.size() - 1)), "vol") / 100.0;
    if (value.size() > 2 && value.compare(value.size() - 2, 2, "bp") == 0)
        return parse_plain_number(trim(value.substr(0, value.size() - 2)), "vol") / 10000.0;
    return parse_plain_number(value, "vol") / 10000.0; // bare numbers are bp/year
}

run_config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open config file: " + path);

    static const std::set<std::string> known_keys = {
        "curve.file",
        "trade.t_x", "trade.t_s", "trade.t_e", "trade.frequency",
        "trade.notional", "trade.side", "trade.strike",
        "market.r_s0", "market.r_e0", "market.vol_s", "market.vol_e", "market.rho",
        "model.kind", "model.sigma_e", "model.sigma_s",
        "engine.method", "engine.order", "engine.paths", "engine.seed",
        "engine.workers", "engine.grid_nodes", "engine.grid_span",
        "strikes", "calibrate.period_vols",
    };

    std::map<std::string, std::string> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw data_error(path + ":" + std::to_string(line_no) +
                             ": expected key=value, got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (known_keys.find(key) == known_keys.end())
            throw invalid_input(path + ":" + std::to_string(line_no) +
                                ": unknown config key '" + key + "'");
        if (values.count(key))
            throw invalid_input(path + ":" + std::to_string(line_no) +
                                ": duplicate config key '" + key + "'");
        values[key] = value;
    }

    auto require = [&](const std::string& key) -> const std::string& {
        auto it = values.find(key);
        if (it == values.end())
            throw invalid_input("missing required config key '" + key + "' in " + path);
        return it->second;
    };
    auto maybe = [&](const std::string& key) -> std::optional<std::string> {
        auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        return it->second;
    };

    run_config config;
    config.curve_file = require("curve.file");
    config.t_x = parse_plain_number(require("trade.t_x"), "trade.t_x");
    config.t_s = parse_plain_number(require("trade.t_s"), "trade.t_s");
    config.t_e = parse_plain_number(require("trade.t_e"), "trade.t_e");
    if (auto v = maybe("trade.frequency"))
        config.frequency = parse_plain_number(*v, "trade.frequency");
    if (auto v = maybe("trade.notional"))
        config.notional = parse_plain_number(*v, "trade.notional");
    if (auto v = maybe("trade.side")) config.side = copula_pricer::side_from_string(*v);
    if (auto v = maybe("trade.strike")) {
        if (trim(*v) == "atm")
            config.strike_is_atm = true;
        else
            config.strike = parse_rate(*v);
    }

    const bool has_rs = values.count("market.r_s0") > 0;
    const bool has_re = values.count("market.r_e0") > 0;
    if (has_rs != has_re)
        throw invalid_input("market.r_s0 and market.r_e0 must be given together "
                            "or both omitted (derived from the curve)");
    if (has_rs) {
        config.r_s0 = parse_rate(values["market.r_s0"]);
        config.r_e0 = parse_rate(values["market.r_e0"]);
    }
    config.vol_s_annual = parse_vol(require("market.vol_s"));
    config.vol_e_annual = parse_vol(require("market.vol_e"));
    config.rho = parse_plain_number(require("market.rho"), "market.rho");

    if (auto v = maybe("model.kind")) config.kind = models::model_kind_from_string(*v);
    if (auto v = maybe("model.sigma_e"))
        config.sigma_e = parse_plain_number(*v, "model.sigma_e");
    if (auto v = maybe("model.sigma_s"))
        config.sigma_s = parse_plain_number(*v, "model.sigma_s");

    if (auto v = maybe("engine.method")) config.method = trim(*v);
    if (config.method != "quadrature" && config.method != "mc")
        throw invalid_input("engine.method must be 'quadrature' or 'mc', got '" +
                            config.method + "'");
    if (auto v = maybe("engine.order"))
        config.order = static_cast<int>(parse_integer(*v, "engine.order"));
    if (auto v = maybe("engine.paths")) config.paths = parse_integer(*v, "engine.paths");
    if (auto v = maybe("engine.seed")) {
        const long seed = parse_integer(*v, "engine.seed");
        if (seed < 0) throw invalid_input("engine.seed must be non-negative");
        config.seed = static_cast<std::uint64_t>(seed);
    }
    if (auto v = maybe("engine.workers"))
        config.workers = static_cast<int>(parse_integer(*v, "engine.workers"));
    if (auto v = maybe("engine.grid_nodes"))
        config.grid.nodes = static_cast<int>(parse_integer(*v, "engine.grid_nodes"));
    if (auto v = maybe("engine.grid_span"))
        config.grid.span_stdevs = parse_plain_number(*v, "engine.grid_span");

    if (auto v = maybe("strikes")) config.strikes_spec = *v;
    if (auto v = maybe("calibrate.period_vols")) {
        std::stringstream parts(*v);
        std::string item;
        while (std::getline(parts, item, ',')) {
            const std::string entry = trim(item);
            if (entry.empty())
                throw invalid_input("empty entry in calibrate.period_vols");
            config.period_vols_annual.push_back(parse_vol(entry));
        }
        if (config.period_vols_annual.empty())
            throw invalid_input("calibrate.period_vols is empty");
    }
    return config;
}

std::vector<double> expand_strikes(const std::string& spec, double atm) {
    const std::string text = trim(spec);
    if (text.empty()) throw invalid_input("empty strike specification");

    double lo = 0.0, hi = 0.0, step = 0.0;
    const std::string pm_utf8 = "\xc2\xb1";
    std::size_t pm_pos = text.find(pm_utf8);
    std::size_t pm_len = pm_utf8.size();
    if (pm_pos == std::string::npos) {
        pm_pos = text.find("+-");
        pm_len = 2;
    }
    if (pm_pos != std::string::npos && trim(text.substr(0, pm_pos)) == "atm") {
        const std::string rest = text.substr(pm_pos + pm_len);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw invalid_input("strike spec 'atm±X:step' is missing the step: '" +
                                text + "'");
        const double width = parse_rate(rest.substr(0, colon));
        if (width < 0.0)
            throw invalid_input("strike spec half-width must be non-negative");
        step = parse_rate(rest.substr(colon + 1));
        lo = atm - width;
        hi = atm + width;
    } else {
        std::vector<std::string> parts;
        std::stringstream stream(text);
        std::string item;
        while (std::getline(stream, item, ':')) parts.push_back(trim(item));
        if (parts.size() != 3)
            throw invalid_input("strike spec must be 'lo:hi:step' or 'atm±X:step', got '" +
                                text + "'");
        lo = parts[0] == "atm" ? atm : parse_rate(parts[0]);
        hi = parts[1] == "atm" ? atm : parse_rate(parts[1]);
        step = parse_rate(parts[2]);
    }

    if (step <= 0.0) throw invalid_input("strike step must be positive");
    if (lo > hi) throw invalid_input("strike range is empty: lo > hi");

    std::vector<double> strikes;
    const double tol = 1e-9 * step;
    for (long k = 0;; ++k) {
        const double value = lo + static_cast<double>(k) * step;
        if (value > hi + tol) break;
        strikes.push_back(value);
    }
    return strikes;
}

std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

namespace {

struct assembled_market {
    curve_engine::discount_curve curve;
    curve_engine::annuity_triple triple;
    models::market_inputs mkt;
    models::annuity_model model;
    double atm = 0.0;
};

models::model_kind resolve_kind(const run_config& config,
                                const command_overrides& overrides) {
    if (overrides.model) return models::model_kind_from_string(*overrides.model);
    return config.kind;
}

assembled_market assemble(const run_config& config, const command_overrides& overrides) {
    auto curve = curve_engine::discount_curve::from_csv(config.curve_file);
    const auto triple = curve_engine::make_annuity_triple(
        curve, config.t_x, config.t_s, config.t_e, config.frequency);

    double r_s0, r_e0;
    if (config.r_s0) {
        r_s0 = *config.r_s0;
        r_e0 = *config.r_e0;
    } else {
        r_s0 = curve_engine::forward_swap_rate(
            curve, curve_engine::make_schedule(config.t_x, config.t_x, config.t_s,
                                               config.frequency));
        r_e0 = curve_engine::forward_swap_rate(
            curve, curve_engine::make_schedule(config.t_x, config.t_x, config.t_e,
                                               config.frequency));
    }

    const double sqrt_tx = std::sqrt(config.t_x);
    models::market_inputs mkt{triple, r_s0, r_e0, config.vol_s_annual * sqrt_tx,
                              config.vol_e_annual * sqrt_tx, config.rho};

    const auto kind = resolve_kind(config, overrides);
    const bool deterministic = kind == models::model_kind::deterministic;
    models::annuity_model model(kind, deterministic ? 0.0 : config.sigma_e,
                                deterministic ? 0.0 : config.sigma_s);

    const double atm =
        (triple.a_e0 * r_e0 - triple.a_s0 * r_s0) / triple.a_u0;
    return {std::move(curve), triple, mkt, model, atm};
}

copula_pricer::copula_spec make_copula_spec(const run_config& config,
                                            const command_overrides& overrides) {
    copula_pricer::copula_spec spec;
    spec.rho_copula = config.rho;
    spec.order = config.order;
    spec.paths = overrides.paths ? *overrides.paths : config.paths;
    spec.seed = overrides.seed ? *overrides.seed : config.seed;
    spec.workers = config.workers;
    return spec;
}

std::string resolve_method(const run_config& config, const command_overrides& overrides) {
    const std::string method = overrides.method ? *overrides.method : config.method;
    if (method != "quadrature" && method != "mc")
        throw invalid_input("method must be 'quadrature' or 'mc', got '" + method + "'");
    return method;
}

struct tilted_pair {
    models::marginal marginal_s;
    models::marginal marginal_e;
    double clipped_s = 0.0;
    double clipped_e = 0.0;
};

tilted_pair build_tilted_marginals(const assembled_market& market,
                                   const models::grid_spec& grid) {
    const auto coeffs = models::coefficients(market.model, market.mkt);
    const auto natural_s = models::flat_normal_marginal(
        market.mkt.r_s0, market.mkt.stdev_s, models::measure_tag::short_annuity, grid);
    const auto natural_e = models::flat_normal_marginal(
        market.mkt.r_e0, market.mkt.stdev_e, models::measure_tag::long_annuity, grid);
    auto tilt_s = models::tilt_marginal(market.model, coeffs, market.mkt, natural_s,
                                        models::leg::short_leg);
    auto tilt_e = models::tilt_marginal(market.model, coeffs, market.mkt, natural_e,
                                        models::leg::long_leg);
    return {std::move(tilt_s.tilted), std::move(tilt_e.tilted), tilt_s.clipped_mass,
            tilt_e.clipped_mass};
}

std::vector<double> resolve_strike_grid(const run_config& config,
                                        const command_overrides& overrides, double atm) {
    const std::string spec = overrides.strikes ? *overrides.strikes : config.strikes_spec;
    if (spec.empty())
        throw invalid_input("no strikes given: set 'strikes' in the config or "
                            "pass --strikes");
    return expand_strikes(spec, atm);
}

void emit_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out << ',';
        out << cells[i];
    }
    out << '\n';
}

} // namespace

int run_price(const run_config& config, const command_overrides& overrides,
              std::ostream& out) {
    const auto market = assemble(config, overrides);
    const auto method = resolve_method(config, overrides);
    const auto copula = make_copula_spec(config, overrides);
    const auto tilted = build_tilted_marginals(market, config.grid);

    std::vector<double> strikes;
    if (overrides.strikes || !config.strikes_spec.empty()) {
        strikes = resolve_strike_grid(config, overrides, market.atm);
    } else if (config.strike_is_atm) {
        strikes.push_back(market.atm);
    } else if (config.strike) {
        strikes.push_back(*config.strike);
    } else {
        throw invalid_input("no strike given: set trade.strike (a rate or 'atm') "
                            "or a strike grid");
    }

    copula_pricer::midcurve_trade trade{config.t_x, config.t_s, config.t_e,
                                        0.0,        config.notional, config.side};
    const std::string model_name = models::to_string(market.model.kind);

    emit_row(out, {"strike", "side", "model", "method", "price", "stderr"});
    for (const double strike : strikes) {
        trade.strike = strike;
        const auto result =
            method == "mc"
                ? copula_pricer::price_mc(trade, market.mkt, market.model, copula,
                                          tilted.marginal_s, tilted.marginal_e)
                : copula_pricer::price_quadrature(trade, market.mkt, market.model,
                                                  copula, tilted.marginal_s,
                                                  tilted.marginal_e);
        emit_row(out, {format_number(strike), copula_pricer::to_string(config.side),
                       model_name, method, format_number(result.price),
                       format_number(result.std_error)});
    }
    return 0;
}

int run_skew(const run_config& config, const command_overrides& overrides,
             std::ostream& out) {
    const auto method = resolve_method(config, overrides);
    if (method != "quadrature")
        throw invalid_input("skew requires quadrature pricing; "
                            "the correlation inversion has no Monte Carlo form");

    const auto market = assemble(config, overrides);
    const auto strikes = resolve_strike_grid(config, overrides, market.atm);
    if (strikes.size() < 2)
        throw invalid_input("skew needs a strike grid with at least two strikes; "
                            "the grid expands to " + std::to_string(strikes.size()));

    const auto copula = make_copula_spec(config, overrides);
    copula_pricer::midcurve_trade trade{config.t_x, config.t_s,       config.t_e, 0.0,
                                        config.notional, config.side};
    const auto points = implied_metrics::correlation_skew_curve(
        trade, market.mkt, market.model, strikes, copula, config.grid);

    emit_row(out, {"strike", "price", "implied_normal_vol", "implied_corr", "flag"});
    for (const auto& point : points) {
        emit_row(out, {format_number(point.strike), format_number(point.price),
                       format_number(point.implied_normal_vol),
                       format_number(point.implied_correlation),
                       point.boundary ? "boundary" : ""});
    }
    return 0;
}

int run_calibrate(const run_config& config, const command_overrides& overrides,
                  std::ostream& out) {
    (void)overrides;
    const auto curve = curve_engine::discount_curve::from_csv(config.curve_file);

    const long periods =
        std::lround((config.t_e - config.t_x) * config.frequency);
    if (periods < 1) throw invalid_input("calibration strip has no periods");

    const double sqrt_tx = std::sqrt(config.t_x);
    std::vector<double> period_stdevs;
    if (!config.period_vols_annual.empty()) {
        if (static_cast<long>(config.period_vols_annual.size()) != periods)
            throw invalid_input(
                "calibrate.period_vols has " +
                std::to_string(config.period_vols_annual.size()) + " entries but the "
                "strip has " + std::to_string(periods) + " periods");
        for (const double vol : config.period_vols_annual)
            period_stdevs.push_back(vol * sqrt_tx);
    } else {
        // Default: interpolate the two quoted vols linearly in payment time,
        // flat before t_s.
        const double tau = 1.0 / config.frequency;
        for (long i = 1; i <= periods; ++i) {
            const double t_pay = config.t_x + static_cast<double>(i) * tau;
            double vol;
            if (t_pay <= config.t_s || config.t_e == config.t_s) {
                vol = config.vol_s_annual;
            } else {
                const double w = (t_pay - config.t_s) / (config.t_e - config.t_s);
                vol = (1.0 - w) * config.vol_s_annual + w * config.vol_e_annual;
            }
            period_stdevs.push_back(vol * sqrt_tx);
        }
    }

    const auto result = tsr_calibration::estimate_sigmas(
        curve, config.t_x, config.t_s, config.t_e, config.frequency, period_stdevs,
        {}, {}, config.vol_s_annual * sqrt_tx, config.vol_e_annual * sqrt_tx,
        config.rho);

    emit_row(out, {"sigma_e", "sigma_s", "cov_e", "cov_s"});
    emit_row(out, {format_number(result.sigma_e), format_number(result.sigma_s),
                   format_number(result.covariances.cov_e),
                   format_number(result.covariances.cov_s)});
    return 0;
}

int run_marginal_dump(const run_config& config, const command_overrides& overrides,
                      std::ostream& out) {
    const auto market = assemble(config, overrides);
    const auto coeffs = models::coefficients(market.model, market.mkt);

    struct leg_dump {
        const char* label;
        models::leg which;
        double fwd;
        double stdev;
        models::measure_tag tag;
    };
    const leg_dump legs[] = {
        {"short", models::leg::short_leg, market.mkt.r_s0, market.mkt.stdev_s,
         models::measure_tag::short_annuity},
        {"long", models::leg::long_leg, market.mkt.r_e0, market.mkt.stdev_e,
         models::measure_tag::long_annuity},
    };

    for (const auto& leg : legs) {
        const auto natural =
            models::flat_normal_marginal(leg.fwd, leg.stdev, leg.tag, config.grid);
        const auto tilt = models::tilt_marginal(market.model, coeffs, market.mkt,
                                                natural, leg.which);
        if (tilt.clipped_mass > 0.0)
            std::fprintf(stderr, "diagnostic: leg=%s clipped_mass=%s\n", leg.label,
                         format_number(tilt.clipped_mass).c_str());
        out << "# leg=" << leg.label << '\n';
        emit_row(out, {"x", "pdf_natural", "pdf_tilted", "cdf_tilted"});
        const auto& grid = natural.grid();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            emit_row(out, {format_number(grid[i]), format_number(natural.density()[i]),
                           format_number(tilt.tilted.density()[i]),
                           format_number(tilt.tilted.cdf()[i])});
        }
    }
    return 0;
}

} // namespace midcurve::cli
