#pragma once

#include <vector>

#include "midcurve/copula_pricer.hpp"
#include "midcurve/models.hpp"

namespace midcurve::implied_metrics {

/// One point of the correlation-skew curve. `implied_normal_vol` is
/// annualized (decimal per sqrt-year); `boundary` marks strikes whose price
/// left the range attainable by the reference model on rho in [-1, 1].
struct skew_point {
    double strike = 0.0;
    double price = 0.0;
    double implied_normal_vol = 0.0;
    double implied_correlation = 0.0;
    bool boundary = false;
};

/// Normal-model option price: receiver pays (K - F)^+ at expiry, priced as
/// annuity * notional * [(K - fwd) Phi(d) + stdev_t phi(d)], d = (K - fwd)/stdev_t.
/// `stdev_t` is the terminal standard deviation at expiry. Payers by parity.
double bachelier_price(double fwd, double strike, double stdev_t, double annuity,
                       double notional, copula_pricer::option_side side);

/// Terminal standard deviation such that bachelier_price reproduces `price`,
/// to 1e-12 relative, by safeguarded Newton. Annualize by dividing sqrt(t_x).
double implied_normal_vol(double price, double fwd, double strike, double annuity,
                          double notional, copula_pricer::option_side side);

struct implied_corr_result {
    double rho = 0.0;
    bool boundary = false;
};

/// The copula correlation at which the reference model (deterministic
/// annuity ratios, flat normal marginals at the quoted forwards and vols,
/// same quadrature order) reprices `target_price`. Receiver prices decrease
/// strictly in rho, so the root is unique; targets outside the attainable
/// price range return the nearer bound with `boundary` set.
implied_corr_result implied_correlation(double target_price,
                                        const copula_pricer::midcurve_trade& trade,
                                        const models::market_inputs& mkt, int order,
                                        const models::grid_spec& grid = {});

/// Prices `model` at each strike, then inverts price -> implied normal vol
/// and price -> implied correlation against the deterministic reference.
std::vector<skew_point>
correlation_skew_curve(const copula_pricer::midcurve_trade& trade_template,
                       const models::market_inputs& mkt,
                       const models::annuity_model& model,
                       const std::vector<double>& strikes,
                       const copula_pricer::copula_spec& copula,
                       const models::grid_spec& grid = {});

} // namespace midcurve::implied_metrics
