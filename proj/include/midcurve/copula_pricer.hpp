#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "midcurve/models.hpp"

namespace midcurve::copula_pricer {

enum class option_side { receiver, payer };
enum class pricing_method { quadrature, monte_carlo };

option_side side_from_string(const std::string& name);
std::string to_string(option_side side);

/// Option on the forward swap (t_s -> t_e) exercising at t_x into the swap,
/// struck at `strike` on `notional`.
struct midcurve_trade {
    double t_x = 0.0;
    double t_s = 0.0;
    double t_e = 0.0;
    double strike = 0.0;
    double notional = 1.0;
    option_side side = option_side::receiver;
};

struct pricing_result {
    double price = 0.0;
    double std_error = 0.0;
    pricing_method method = pricing_method::quadrature;
    std::map<std::string, double> diagnostics;
};

/// Joint-law construction parameters: the copula correlation plus the
/// quadrature/Monte Carlo controls.
struct copula_spec {
    double rho_copula = 0.0;
    int order = 64;
    long paths = 1'000'000;
    std::uint64_t seed = 0;
    int workers = 1;
};

/// Maps a pair of (already correlated) normal coordinates through the two
/// marginal quantile functions: x = F_s^{-1}(Phi(u)), y = F_e^{-1}(Phi(v)).
std::pair<double, double> joint_transform(const models::marginal& marginal_s,
                                          const models::marginal& marginal_e,
                                          double u, double v);

/// Tensor Gauss-Hermite evaluation of the receiver payoff
/// [K - w1(y,x) y + w2(y,x) x]^+ under the Gaussian copula joining the two
/// underlying-annuity-measure marginals; payers are priced by parity.
pricing_result price_quadrature(const midcurve_trade& trade,
                                const models::market_inputs& mkt,
                                const models::annuity_model& model,
                                const copula_spec& copula,
                                const models::marginal& marginal_s,
                                const models::marginal& marginal_e);

/// Monte Carlo evaluation of the same integral by inverse-CDF sampling from
/// a counter-based generator. The estimate is a pure function of
/// (seed, paths) and is bit-identical for any worker count.
pricing_result price_mc(const midcurve_trade& trade,
                        const models::market_inputs& mkt,
                        const models::annuity_model& model,
                        const copula_spec& copula,
                        const models::marginal& marginal_s,
                        const models::marginal& marginal_e);

/// Expectation of the weighted rate difference w1 y - w2 x (the midcurve
/// rate) under the joint pricing law, by the same quadrature.
double underlying_forward(const models::market_inputs& mkt,
                          const models::annuity_model& model,
                          const copula_spec& copula,
                          const models::marginal& marginal_s,
                          const models::marginal& marginal_e);

} // namespace midcurve::copula_pricer
