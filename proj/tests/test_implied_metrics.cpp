#include <cmath>

#include "doctest.h"
#include "midcurve/errors.hpp"
#include "midcurve/implied_metrics.hpp"
#include "test_fixtures.hpp"

using namespace midcurve;
using copula_pricer::option_side;

namespace {

const models::annuity_model kind_det{models::model_kind::deterministic, 0.0, 0.0};
const models::annuity_model kind_lin{models::model_kind::linear, 2.0, -1.0};
const models::annuity_model kind_ll{models::model_kind::loglinear, 2.0, -1.0};

copula_pricer::copula_spec benchmark_copula(double rho = 0.8) {
    copula_pricer::copula_spec spec;
    spec.rho_copula = rho;
    spec.order = 64;
    return spec;
}

} // namespace

TEST_CASE("normal option price reference values and symmetries") {
    const double fwd = 0.02, stdev = 0.006;
    CHECK(implied_metrics::bachelier_price(fwd, fwd, stdev, 1.0, 1.0,
                                           option_side::receiver) ==
          doctest::Approx(0.0023936536824085961).epsilon(1e-14));
    CHECK(implied_metrics::bachelier_price(fwd, fwd + stdev, stdev, 1.0, 1.0,
                                           option_side::receiver) ==
          doctest::Approx(0.0064998928235261178).epsilon(1e-14));
    // Translation invariance in (fwd, strike) and receiver/payer parity.
    CHECK(implied_metrics::bachelier_price(fwd + 0.01, fwd + stdev + 0.01, stdev, 1.0,
                                           1.0, option_side::receiver) ==
          doctest::Approx(0.0064998928235261178).epsilon(1e-13));
    const double k = fwd + 0.004;
    const double rec =
        implied_metrics::bachelier_price(fwd, k, stdev, 1.9, 2.0, option_side::receiver);
    const double pay =
        implied_metrics::bachelier_price(fwd, k, stdev, 1.9, 2.0, option_side::payer);
    CHECK(rec - pay == doctest::Approx(1.9 * 2.0 * (k - fwd)).epsilon(1e-13));
    CHECK(implied_metrics::bachelier_price(fwd, fwd, 0.012, 1.0, 1.0,
                                           option_side::receiver) >
          implied_metrics::bachelier_price(fwd, fwd, 0.006, 1.0, 1.0,
                                           option_side::receiver));
    CHECK_THROWS_AS((void)implied_metrics::bachelier_price(fwd, fwd, -0.1, 1.0, 1.0,
                                                           option_side::receiver),
                    invalid_input);
}

TEST_CASE("implied normal vol inverts prices across moneyness and side") {
    const double fwd = 0.0183;
    // Moneyness in stdev units: beyond |d| ~ 8 the time value of the in-the-
    // money side falls under the double resolution of the intrinsic value and
    // no solver can recover the vol.
    for (double stdev : {0.001, 0.006, 0.02})
        for (double moneyness : {-4.0, -1.0, 0.0, 1.5, 4.0})
            for (auto side : {option_side::receiver, option_side::payer}) {
                const double k = fwd + moneyness * stdev;
                const double price =
                    implied_metrics::bachelier_price(fwd, k, stdev, 0.93, 2.0, side);
                const double got = implied_metrics::implied_normal_vol(price, fwd, k,
                                                                       0.93, 2.0, side);
                CHECK(got == doctest::Approx(stdev).epsilon(1e-9));
            }
    // At or below intrinsic value no vol can reproduce the price.
    CHECK_THROWS_AS((void)implied_metrics::implied_normal_vol(
                        0.0049, fwd, fwd + 0.005, 1.0, 1.0, option_side::receiver),
                    inversion_error);
    CHECK_THROWS_AS((void)implied_metrics::implied_normal_vol(
                        0.0, fwd, fwd, 1.0, 1.0, option_side::receiver),
                    inversion_error);
}

TEST_CASE("implied correlation inverts deterministic prices exactly") {
    const auto b = testing::make_benchmark_market();
    const auto tilted = testing::make_tilted(kind_det, b.mkt);
    auto trade = b.trade;
    for (double rho : {-0.9, 0.0, 0.8})
        for (double offset : {-0.005, 0.0, 0.01}) {
            trade.strike = b.atm + offset;
            const double price = copula_pricer::price_quadrature(
                                     trade, b.mkt, kind_det, benchmark_copula(rho),
                                     tilted.short_leg, tilted.long_leg)
                                     .price;
            const auto result =
                implied_metrics::implied_correlation(price, trade, b.mkt, 64);
            CHECK(!result.boundary);
            CHECK(std::abs(result.rho - rho) < 1e-8);
        }
}

TEST_CASE("implied correlation flags targets outside the attainable band") {
    const auto b = testing::make_benchmark_market();
    auto trade = b.trade;
    trade.strike = b.atm;
    const auto tilted = testing::make_tilted(kind_det, b.mkt);
    const double widest = copula_pricer::price_quadrature(
                              trade, b.mkt, kind_det, benchmark_copula(-0.999999),
                              tilted.short_leg, tilted.long_leg)
                              .price;
    const auto above =
        implied_metrics::implied_correlation(1.5 * widest, trade, b.mkt, 64);
    CHECK(above.boundary);
    CHECK(above.rho == -1.0);
    const double narrowest = copula_pricer::price_quadrature(
                                 trade, b.mkt, kind_det, benchmark_copula(0.999999),
                                 tilted.short_leg, tilted.long_leg)
                                 .price;
    const auto below =
        implied_metrics::implied_correlation(0.5 * narrowest, trade, b.mkt, 64);
    CHECK(below.boundary);
    CHECK(below.rho == 1.0);
}

TEST_CASE("deterministic model leaves the correlation curve flat at the input") {
    const auto b = testing::make_benchmark_market();
    const std::vector<double> strikes{b.atm - 0.01, b.atm - 0.0025, b.atm,
                                      b.atm + 0.0025, b.atm + 0.01};
    const auto points = implied_metrics::correlation_skew_curve(
        b.trade, b.mkt, kind_det, strikes, benchmark_copula());
    for (const auto& point : points) {
        CHECK(!point.boundary);
        CHECK(std::abs(point.implied_correlation - 0.8) < 1e-6);
        CHECK(point.implied_normal_vol > 0.0);
    }
}

TEST_CASE("log-linear slopes tilt the correlation curve downward in strike") {
    const auto b = testing::make_benchmark_market();
    const std::vector<double> strikes{b.atm - 0.01, b.atm, b.atm + 0.01};
    const auto points = implied_metrics::correlation_skew_curve(
        b.trade, b.mkt, kind_ll, strikes, benchmark_copula());
    REQUIRE(points.size() == 3);
    CHECK(points[0].implied_correlation ==
          doctest::Approx(0.80730657).epsilon(1e-5));
    CHECK(points[1].implied_correlation ==
          doctest::Approx(0.80368544).epsilon(1e-5));
    CHECK(points[2].implied_correlation ==
          doctest::Approx(0.80087223).epsilon(1e-5));
    CHECK(points[0].implied_correlation > points[1].implied_correlation);
    CHECK(points[1].implied_correlation > points[2].implied_correlation);
    CHECK(points[1].price == doctest::Approx(3.2844332737e-03).epsilon(1e-6));
    // The implied vol near ATM sits near the spread vol of 88.6bp/year.
    CHECK(points[1].implied_normal_vol ==
          doctest::Approx(0.00885964622758158).epsilon(5e-3));

    const auto linear = implied_metrics::correlation_skew_curve(
        b.trade, b.mkt, kind_lin, strikes, benchmark_copula());
    for (std::size_t i = 0; i < strikes.size(); ++i)
        CHECK(std::abs(linear[i].implied_correlation -
                       points[i].implied_correlation) < 0.001);
}
