#include "midcurve/implied_metrics.hpp"

#include <cmath>

#include "midcurve/errors.hpp"
#include "midcurve/math.hpp"

namespace midcurve::implied_metrics {

using copula_pricer::copula_spec;
using copula_pricer::midcurve_trade;
using copula_pricer::option_side;

double bachelier_price(double fwd, double strike, double stdev_t, double annuity,
                       double notional, option_side side) {
    if (stdev_t <= 0.0)
        throw invalid_input("bachelier_price: terminal stdev must be positive");
    if (annuity <= 0.0 || notional <= 0.0)
        throw invalid_input("bachelier_price: annuity and notional must be positive");
    const double d = (strike - fwd) / stdev_t;
    double value = (strike - fwd) * math::norm_cdf(d) + stdev_t * math::norm_pdf(d);
    if (side == option_side::payer)
        value -= strike - fwd;
    return annuity * notional * value;
}

double implied_normal_vol(double price, double fwd, double strike, double annuity,
                          double notional, option_side side) {
    if (annuity <= 0.0 || notional <= 0.0)
        throw invalid_input("implied_normal_vol: annuity and notional must be positive");
    double p = price / (annuity * notional);
    if (side == option_side::payer)
        p += strike - fwd; // receiver-payer parity
    const double intrinsic = std::max(strike - fwd, 0.0);
    const double guard = 1e-14 * std::max(1.0, std::abs(strike - fwd));
    if (p <= intrinsic + guard)
        throw inversion_error("implied_normal_vol: price at or below intrinsic value");
    auto objective = [&](double stdev) {
        double d = (strike - fwd) / stdev;
        return (strike - fwd) * math::norm_cdf(d) + stdev * math::norm_pdf(d) - p;
    };
    double lo = 1e-14;
    double hi = 2.0 * (p + std::abs(strike - fwd)) + 1e-12;
    while (objective(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e6)
            throw inversion_error("implied_normal_vol: price above attainable range");
    }
    // Newton from an ATM-style seed, falling back to bisection when a step
    // leaves the bracket.
    double stdev = std::clamp(p * 2.5066282746310002, lo, hi);
    for (int it = 0; it < 100; ++it) {
        double f = objective(stdev);
        if (std::abs(f) <= 1e-12 * p)
            return stdev;
        if (f > 0.0)
            hi = stdev;
        else
            lo = stdev;
        double d = (strike - fwd) / stdev;
        double vega = math::norm_pdf(d);
        double next = vega > 1e-300 ? stdev - f / vega : 0.0;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - stdev) <= 1e-16 * stdev)
            return next;
        stdev = next;
    }
    throw inversion_error("implied_normal_vol: no convergence");
}

namespace {

implied_corr_result solve_correlation(double target, const midcurve_trade& trade,
                                      const models::market_inputs& mkt, int order,
                                      const models::marginal& ref_s,
                                      const models::marginal& ref_e) {
    const models::annuity_model reference; // deterministic
    const double bound = 1.0 - 1e-9;
    auto price_at = [&](double rho) {
        copula_spec spec;
        spec.rho_copula = rho;
        spec.order = order;
        return copula_pricer::price_quadrature(trade, mkt, reference, spec, ref_s, ref_e)
            .price;
    };
    const double scale = std::max(std::abs(target), 1e-300);
    auto objective = [&](double rho) { return price_at(rho) - target; };
    double f_lo = objective(-bound);
    if (f_lo < 0.0)
        return {-1.0, true}; // target above the widest-spread price
    double f_hi = objective(bound);
    if (f_hi > 0.0)
        return {1.0, true}; // target below the narrowest-spread price
    if (f_lo == 0.0)
        return {-bound, false};
    if (f_hi == 0.0)
        return {bound, false};
    double rho = math::brent([&](double r) { return objective(r); }, -bound, bound,
                             1e-13, 1e-10 * scale);
    return {rho, false};
}

} // namespace

implied_corr_result implied_correlation(double target_price, const midcurve_trade& trade,
                                        const models::market_inputs& mkt, int order,
                                        const models::grid_spec& grid) {
    const models::annuity_model reference;
    const auto ref_coeffs = models::coefficients(reference, mkt);
    auto natural_s = models::flat_normal_marginal(mkt.r_s0, mkt.stdev_s,
                                                  models::measure_tag::short_annuity, grid);
    auto natural_e = models::flat_normal_marginal(mkt.r_e0, mkt.stdev_e,
                                                  models::measure_tag::long_annuity, grid);
    auto ref_s = models::tilt_marginal(reference, ref_coeffs, mkt, natural_s,
                                       models::leg::short_leg);
    auto ref_e = models::tilt_marginal(reference, ref_coeffs, mkt, natural_e,
                                       models::leg::long_leg);
    return solve_correlation(target_price, trade, mkt, order, ref_s.tilted, ref_e.tilted);
}

std::vector<skew_point>
correlation_skew_curve(const midcurve_trade& trade_template,
                       const models::market_inputs& mkt,
                       const models::annuity_model& model,
                       const std::vector<double>& strikes,
                       const copula_spec& copula, const models::grid_spec& grid) {
    if (strikes.empty())
        throw invalid_input("correlation_skew_curve: empty strike grid");
    const auto coeffs = models::coefficients(model, mkt);
    auto natural_s = models::flat_normal_marginal(mkt.r_s0, mkt.stdev_s,
                                                  models::measure_tag::short_annuity, grid);
    auto natural_e = models::flat_normal_marginal(mkt.r_e0, mkt.stdev_e,
                                                  models::measure_tag::long_annuity, grid);
    auto model_s = models::tilt_marginal(model, coeffs, mkt, natural_s,
                                         models::leg::short_leg);
    auto model_e = models::tilt_marginal(model, coeffs, mkt, natural_e,
                                         models::leg::long_leg);
    const models::annuity_model reference;
    const auto ref_coeffs = models::coefficients(reference, mkt);
    auto ref_s = models::tilt_marginal(reference, ref_coeffs, mkt, natural_s,
                                       models::leg::short_leg);
    auto ref_e = models::tilt_marginal(reference, ref_coeffs, mkt, natural_e,
                                       models::leg::long_leg);
    const double fwd_det = (mkt.annuities.a_e0 * mkt.r_e0 - mkt.annuities.a_s0 * mkt.r_s0) /
                           mkt.annuities.a_u0;
    const double sqrt_t = std::sqrt(trade_template.t_x);
    std::vector<skew_point> curve;
    curve.reserve(strikes.size());
    for (double strike : strikes) {
        midcurve_trade trade = trade_template;
        trade.strike = strike;
        skew_point point;
        point.strike = strike;
        point.price = copula_pricer::price_quadrature(trade, mkt, model, copula,
                                                      model_s.tilted, model_e.tilted)
                          .price;
        point.implied_normal_vol =
            implied_normal_vol(point.price, fwd_det, strike, mkt.annuities.a_u0,
                              trade.notional, trade.side) / sqrt_t;
        auto corr = solve_correlation(point.price, trade, mkt, copula.order,
                                      ref_s.tilted, ref_e.tilted);
        point.implied_correlation = corr.rho;
        point.boundary = corr.boundary;
        curve.push_back(point);
    }
    return curve;
}

} // namespace midcurve::implied_metrics
