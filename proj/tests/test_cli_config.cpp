#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "midcurve/cli_config.hpp"
#include "midcurve/errors.hpp"

using namespace midcurve;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/midcurve_cli_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

const char* curve_csv = "t,df\n"
                        "0,1\n"
                        "1,0.9743644707739376\n"
                        "2,0.9493861219065756\n"
                        "3,0.9323141155671132\n";

std::string base_config(const std::string& curve_path) {
    return "curve.file=" + curve_path + "\n" +
           "trade.t_x=1\n"
           "trade.t_s=2\n"
           "trade.t_e=3\n"
           "trade.frequency=1\n"
           "trade.side=receiver\n"
           "trade.strike=atm\n"
           "market.vol_s=60\n"
           "market.vol_e=64.18\n"
           "market.rho=0.8\n"
           "model.kind=loglinear\n"
           "model.sigma_e=2.0\n"
           "model.sigma_s=-1.0\n"
           "engine.method=quadrature\n"
           "engine.order=64\n";
}

} // namespace

TEST_CASE("rates and vols parse their unit suffixes") {
    CHECK(cli::parse_rate("2.631%") == doctest::Approx(0.02631).epsilon(1e-15));
    CHECK(cli::parse_rate("150bp") == doctest::Approx(0.015).epsilon(1e-15));
    CHECK(cli::parse_rate("0.018") == doctest::Approx(0.018).epsilon(1e-15));
    CHECK(cli::parse_rate("-25bp") == doctest::Approx(-0.0025).epsilon(1e-15));
    CHECK_THROWS_AS((void)cli::parse_rate("abc"), invalid_input);
    CHECK_THROWS_AS((void)cli::parse_rate("1.2.3%"), invalid_input);
    CHECK_THROWS_AS((void)cli::parse_rate(""), invalid_input);

    CHECK(cli::parse_vol("60") == doctest::Approx(0.0060).epsilon(1e-15));
    CHECK(cli::parse_vol("64.18") == doctest::Approx(0.006418).epsilon(1e-15));
    CHECK(cli::parse_vol("60bp") == doctest::Approx(0.0060).epsilon(1e-15));
    CHECK(cli::parse_vol("0.6%") == doctest::Approx(0.0060).epsilon(1e-15));
}

TEST_CASE("strike specs expand to inclusive grids") {
    const double atm = 0.0183;
    const auto wide = cli::expand_strikes("atm\xc2\xb1"
                                          "150bp:25bp",
                                          atm);
    REQUIRE(wide.size() == 13);
    CHECK(wide.front() == doctest::Approx(atm - 0.015).epsilon(1e-12));
    CHECK(wide.back() == doctest::Approx(atm + 0.015).epsilon(1e-12));

    const auto ascii = cli::expand_strikes("atm+-100bp:50bp", atm);
    REQUIRE(ascii.size() == 5);
    CHECK(ascii[2] == doctest::Approx(atm).epsilon(1e-12));

    const auto range = cli::expand_strikes("1%:2%:0.5%", atm);
    REQUIRE(range.size() == 3);
    CHECK(range[1] == doctest::Approx(0.015).epsilon(1e-12));

    // A step larger than the range leaves a single strike.
    CHECK(cli::expand_strikes("1%:1.4%:1%", atm).size() == 1);
    CHECK(cli::expand_strikes("atm+-0bp:25bp", atm).size() == 1);

    CHECK_THROWS_AS((void)cli::expand_strikes("1%:2%", atm), invalid_input);
    CHECK_THROWS_AS((void)cli::expand_strikes("2%:1%:0.5%", atm), invalid_input);
    CHECK_THROWS_AS((void)cli::expand_strikes("1%:2%:0bp", atm), invalid_input);
    CHECK_THROWS_AS((void)cli::expand_strikes("", atm), invalid_input);
}

TEST_CASE("numbers format with 12 significant digits") {
    CHECK(cli::format_number(1.0) == "1");
    CHECK(cli::format_number(0.0123456789012345) == "0.0123456789012");
    CHECK(cli::format_number(-2.5e-05) == "-2.5e-05");
    CHECK(cli::format_number(0.01831143179579327) == "0.0183114317958");
    CHECK(cli::format_number(2.0104781723997083) == "2.0104781724");
}

TEST_CASE("config files parse with validation at the boundary") {
    const auto curve_path = write_temp("curve.csv", curve_csv);
    const auto path = write_temp("ok.cfg", base_config(curve_path));
    const auto config = cli::parse_config_file(path);
    CHECK(config.curve_file == curve_path);
    CHECK(config.t_x == 1.0);
    CHECK(config.strike_is_atm);
    CHECK(config.vol_s_annual == doctest::Approx(0.0060).epsilon(1e-15));
    CHECK(config.vol_e_annual == doctest::Approx(0.006418).epsilon(1e-15));
    CHECK(config.rho == 0.8);
    CHECK(config.kind == models::model_kind::loglinear);
    CHECK(config.order == 64);
    CHECK(!config.r_s0.has_value());

    CHECK_THROWS_AS((void)cli::parse_config_file("/tmp/midcurve_cli_missing.cfg"),
                    data_error);
    const auto unknown = write_temp("unknown.cfg",
                                    base_config(curve_path) + "model.shape=3\n");
    CHECK_THROWS_AS((void)cli::parse_config_file(unknown), invalid_input);
    const auto duplicate = write_temp("dup.cfg",
                                      base_config(curve_path) + "market.rho=0.5\n");
    CHECK_THROWS_AS((void)cli::parse_config_file(duplicate), invalid_input);
    const auto lonely_rate = write_temp("lonely.cfg",
                                        base_config(curve_path) +
                                            "market.r_s0=2.631%\n");
    CHECK_THROWS_AS((void)cli::parse_config_file(lonely_rate), invalid_input);
    const auto with_strikes = write_temp(
        "strikes.cfg", base_config(curve_path) + "strikes=atm+-1%:50bp\n");
    CHECK_NOTHROW((void)cli::parse_config_file(with_strikes));
}

TEST_CASE("price command emits one csv row per strike") {
    const auto curve_path = write_temp("curve.csv", curve_csv);
    const auto path = write_temp("price.cfg", base_config(curve_path));
    const auto config = cli::parse_config_file(path);
    std::ostringstream out;
    CHECK(cli::run_price(config, {}, out) == 0);
    std::istringstream lines(out.str());
    std::string header, row, extra;
    REQUIRE(std::getline(lines, header));
    CHECK(header == "strike,side,model,method,price,stderr");
    REQUIRE(std::getline(lines, row));
    CHECK(row.find("receiver,loglinear,quadrature,") != std::string::npos);
    CHECK(!std::getline(lines, extra));
}

TEST_CASE("skew command needs at least two strikes and quadrature pricing") {
    const auto curve_path = write_temp("curve.csv", curve_csv);
    const auto path = write_temp("skew.cfg", base_config(curve_path));
    const auto config = cli::parse_config_file(path);
    std::ostringstream out;
    CHECK_THROWS_AS((void)cli::run_skew(config, {}, out), invalid_input); // no grid

    cli::command_overrides single;
    single.strikes = "atm+-0bp:25bp";
    CHECK_THROWS_AS((void)cli::run_skew(config, single, out), invalid_input);

    cli::command_overrides mc;
    mc.strikes = "atm+-50bp:50bp";
    mc.method = "mc";
    CHECK_THROWS_AS((void)cli::run_skew(config, mc, out), invalid_input);

    cli::command_overrides ok;
    ok.strikes = "atm+-50bp:50bp";
    std::ostringstream good;
    CHECK(cli::run_skew(config, ok, good) == 0);
    std::istringstream lines(good.str());
    std::string header;
    REQUIRE(std::getline(lines, header));
    CHECK(header == "strike,price,implied_normal_vol,implied_corr,flag");
    int rows = 0;
    for (std::string row; std::getline(lines, row);) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("calibrate command reports the slope estimates") {
    const auto curve_path = write_temp("curve.csv", curve_csv);
    const auto path = write_temp("calib.cfg", base_config(curve_path));
    const auto config = cli::parse_config_file(path);
    std::ostringstream out;
    CHECK(cli::run_calibrate(config, {}, out) == 0);
    std::istringstream lines(out.str());
    std::string header, row;
    REQUIRE(std::getline(lines, header));
    CHECK(header == "sigma_e,sigma_s,cov_e,cov_s");
    REQUIRE(std::getline(lines, row));
    const double sigma_e = std::stod(row.substr(0, row.find(',')));
    CHECK(sigma_e == doctest::Approx(2.0104775268904).epsilon(1e-9));
}

TEST_CASE("marginal dump emits stacked per-leg tables on one grid") {
    const auto curve_path = write_temp("curve.csv", curve_csv);
    const auto path = write_temp("dump.cfg", base_config(curve_path));
    const auto config = cli::parse_config_file(path);
    std::ostringstream out;
    CHECK(cli::run_marginal_dump(config, {}, out) == 0);
    std::istringstream lines(out.str());
    std::string line;
    int short_headers = 0, long_headers = 0, column_headers = 0, rows = 0;
    while (std::getline(lines, line)) {
        if (line == "# leg=short") ++short_headers;
        else if (line == "# leg=long") ++long_headers;
        else if (line == "x,pdf_natural,pdf_tilted,cdf_tilted") ++column_headers;
        else ++rows;
    }
    CHECK(short_headers == 1);
    CHECK(long_headers == 1);
    CHECK(column_headers == 2);
    CHECK(rows == 2 * 801);
}
