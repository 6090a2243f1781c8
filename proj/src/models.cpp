#include "midcurve/models.hpp"

#include <algorithm>
#include <cmath>

#include "midcurve/errors.hpp"
#include "midcurve/math.hpp"

namespace midcurve::models {

model_kind model_kind_from_string(const std::string& name) {
    if (name == "deterministic") return model_kind::deterministic;
    if (name == "linear") return model_kind::linear;
    if (name == "loglinear") return model_kind::loglinear;
    throw invalid_input("unknown model kind: " + name +
                        " (expected deterministic|linear|loglinear)");
}

std::string to_string(model_kind kind) {
    switch (kind) {
    case model_kind::deterministic: return "deterministic";
    case model_kind::linear: return "linear";
    case model_kind::loglinear: return "loglinear";
    }
    return "unknown";
}

annuity_model::annuity_model(model_kind k, double se, double ss)
    : kind(k), sigma_e(se), sigma_s(ss) {
    if (kind == model_kind::deterministic && (sigma_e != 0.0 || sigma_s != 0.0))
        throw invalid_input("deterministic model requires sigma_e = sigma_s = 0");
}

namespace {

void validate_market(const market_inputs& mkt) {
    if (mkt.annuities.a_s0 <= 0.0 || mkt.annuities.a_e0 <= 0.0 || mkt.annuities.a_u0 <= 0.0)
        throw invalid_input("market_inputs: annuities must be positive");
    if (mkt.stdev_s <= 0.0 || mkt.stdev_e <= 0.0)
        throw invalid_input("market_inputs: terminal standard deviations must be positive");
    if (mkt.rho < -1.0 || mkt.rho > 1.0)
        throw invalid_input("market_inputs: correlation must lie in [-1,1]");
}

} // namespace

model_coefficients coefficients(const annuity_model& model, const market_inputs& mkt) {
    validate_market(mkt);
    const auto& a = mkt.annuities;
    model_coefficients c;
    c.mu_s = (a.a_u0 / a.a_e0) * model.sigma_s;
    c.mu_e = (a.a_u0 / a.a_e0) * model.sigma_e;
    c.nu_s = (a.a_u0 / a.a_s0) * model.sigma_s;
    c.nu_e = (a.a_u0 / a.a_s0) * model.sigma_e;
    c.hat_r_s = mkt.r_s0 - (c.nu_s * mkt.stdev_s + c.nu_e * mkt.rho * mkt.stdev_e) * mkt.stdev_s;
    c.hat_r_e = mkt.r_e0 - (c.mu_e * mkt.stdev_e + c.mu_s * mkt.rho * mkt.stdev_s) * mkt.stdev_e;
    c.tilde_r_s = c.hat_r_s + (c.mu_s * mkt.stdev_s + c.mu_e * mkt.rho * mkt.stdev_e) * mkt.stdev_s;
    c.tilde_r_e = c.hat_r_e + (c.nu_e * mkt.stdev_e + c.nu_s * mkt.rho * mkt.stdev_s) * mkt.stdev_e;
    c.q_mu = c.mu_e * c.mu_e * mkt.stdev_e * mkt.stdev_e +
             2.0 * mkt.rho * c.mu_e * c.mu_s * mkt.stdev_e * mkt.stdev_s +
             c.mu_s * c.mu_s * mkt.stdev_s * mkt.stdev_s;
    c.q_nu = c.nu_e * c.nu_e * mkt.stdev_e * mkt.stdev_e +
             2.0 * mkt.rho * c.nu_e * c.nu_s * mkt.stdev_e * mkt.stdev_s +
             c.nu_s * c.nu_s * mkt.stdev_s * mkt.stdev_s;
    c.alpha_s = (a.a_u0 / a.a_s0) * std::exp(-0.5 * c.q_nu);
    c.alpha_e = (a.a_u0 / a.a_e0) * std::exp(-0.5 * c.q_mu);
    return c;
}

std::pair<double, double> weights(const annuity_model& model,
                                  const model_coefficients& coeffs,
                                  const market_inputs& mkt, double x, double y) {
    const auto& a = mkt.annuities;
    const double w1_0 = a.a_e0 / a.a_u0;
    const double w2_0 = a.a_s0 / a.a_u0;
    switch (model.kind) {
    case model_kind::deterministic:
        return {w1_0, w2_0};
    case model_kind::linear: {
        double dy = y - coeffs.hat_r_e;
        double dx = x - coeffs.hat_r_s;
        return {w1_0 * (1.0 + coeffs.mu_e * dy + coeffs.mu_s * dx),
                w2_0 * (1.0 + coeffs.nu_e * dy + coeffs.nu_s * dx)};
    }
    case model_kind::loglinear: {
        double dy = y - coeffs.hat_r_e;
        double dx = x - coeffs.hat_r_s;
        return {w1_0 * std::exp(-0.5 * coeffs.q_mu + coeffs.mu_e * dy + coeffs.mu_s * dx),
                w2_0 * std::exp(-0.5 * coeffs.q_nu + coeffs.nu_e * dy + coeffs.nu_s * dx)};
    }
    }
    throw contract_violation("weights: unreachable model kind");
}

marginal::marginal(std::vector<double> grid, std::vector<double> density, measure_tag tag)
    : grid_(std::move(grid)), density_(std::move(density)), tag_(tag) {
    if (grid_.size() < 2 || grid_.size() != density_.size())
        throw invalid_input("marginal: need matching grid/density of size >= 2");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (i > 0 && grid_[i] <= grid_[i - 1])
            throw invalid_input("marginal: grid must be strictly increasing");
        if (density_[i] < 0.0)
            throw invalid_input("marginal: density must be non-negative");
    }
    raw_mass_ = math::trapezoid(grid_, density_);
    if (raw_mass_ < 1.0 - 1e-6 || raw_mass_ > 1.0 + 1e-6)
        throw invalid_input("marginal: density mass " + std::to_string(raw_mass_) +
                            " outside 1 +/- 1e-6; grid too narrow or density malformed");
    for (auto& d : density_)
        d /= raw_mass_;
    cdf_.resize(grid_.size());
    cdf_[0] = 0.0;
    double acc = 0.0, mean_acc = 0.0;
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        double h = grid_[i] - grid_[i - 1];
        acc += 0.5 * h * (density_[i] + density_[i - 1]);
        mean_acc += 0.5 * h * (grid_[i] * density_[i] + grid_[i - 1] * density_[i - 1]);
        cdf_[i] = acc;
    }
    cdf_.back() = 1.0;
    mean_ = mean_acc;
}

marginal marginal::retagged(measure_tag tag) const {
    marginal copy = *this;
    copy.tag_ = tag;
    return copy;
}

double marginal::quantile(double p) const {
    if (p <= cdf_.front())
        return grid_.front();
    if (p >= cdf_.back())
        return grid_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), p);
    std::size_t hi = static_cast<std::size_t>(it - cdf_.begin());
    std::size_t lo = hi - 1;
    // Within a cell the density is linear, the CDF quadratic:
    // dp = f0*t + (f1-f0)/(2h) * t^2 for offset t in [0,h].
    double h = grid_[hi] - grid_[lo];
    double f0 = density_[lo], f1 = density_[hi];
    double dp = p - cdf_[lo];
    double slope2 = (f1 - f0) / h;
    double disc = f0 * f0 + 2.0 * slope2 * dp;
    double denom = f0 + std::sqrt(std::max(disc, 0.0));
    double t;
    if (denom > 0.0)
        t = 2.0 * dp / denom;
    else
        t = (cdf_[hi] > cdf_[lo]) ? h * dp / (cdf_[hi] - cdf_[lo]) : 0.0;
    return grid_[lo] + std::clamp(t, 0.0, h);
}

double marginal::cdf_at(double x) const {
    if (x <= grid_.front())
        return 0.0;
    if (x >= grid_.back())
        return 1.0;
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
    std::size_t lo = hi - 1;
    double h = grid_[hi] - grid_[lo];
    double t = x - grid_[lo];
    double f0 = density_[lo], f1 = density_[hi];
    return cdf_[lo] + f0 * t + 0.5 * (f1 - f0) / h * t * t;
}

marginal flat_normal_marginal(double fwd, double stdev, measure_tag tag,
                              const grid_spec& spec) {
    if (stdev <= 0.0)
        throw invalid_input("flat_normal_marginal: stdev must be positive");
    if (spec.nodes < 5)
        throw invalid_input("flat_normal_marginal: need at least 5 grid nodes");
    if (spec.span_stdevs < 8.0)
        throw invalid_input("flat_normal_marginal: grid must span >= 8 stdevs");
    std::vector<double> grid(static_cast<std::size_t>(spec.nodes));
    std::vector<double> dens(grid.size());
    double lo = fwd - spec.span_stdevs * stdev;
    double step = 2.0 * spec.span_stdevs * stdev / (spec.nodes - 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = lo + step * static_cast<double>(i);
        dens[i] = math::norm_pdf((grid[i] - fwd) / stdev) / stdev;
    }
    return marginal(std::move(grid), std::move(dens), tag);
}

marginal marginal_from_smile(const std::vector<double>& strikes,
                             const std::vector<double>& normal_vols, double fwd,
                             double t_x, measure_tag tag) {
    if (strikes.size() < 5)
        throw invalid_input("marginal_from_smile: need at least 5 strikes");
    if (strikes.size() != normal_vols.size())
        throw invalid_input("marginal_from_smile: strikes/vols length mismatch");
    if (t_x <= 0.0)
        throw invalid_input("marginal_from_smile: expiry must be positive");
    const double sqrt_t = std::sqrt(t_x);
    // Out-of-the-money time values: differencing prices that carry the
    // intrinsic value would drown the tail densities in rounding noise.
    std::vector<double> time_value(strikes.size());
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        if (normal_vols[i] <= 0.0)
            throw invalid_input("marginal_from_smile: vols must be positive");
        if (i > 0 && strikes[i] <= strikes[i - 1])
            throw invalid_input("marginal_from_smile: strikes must be strictly increasing");
        double stdev = normal_vols[i] * sqrt_t;
        double d = (strikes[i] - fwd) / stdev;
        time_value[i] = d <= 0.0
                            ? (strikes[i] - fwd) * math::norm_cdf(d) + stdev * math::norm_pdf(d)
                            : (fwd - strikes[i]) * math::norm_cdf(-d) + stdev * math::norm_pdf(d);
    }
    std::vector<double> grid(strikes.begin() + 1, strikes.end() - 1);
    std::vector<double> dens(grid.size());
    for (std::size_t i = 1; i + 1 < strikes.size(); ++i) {
        // Each stencil differences one payoff side; receiver and payer prices
        // share the second derivative, so picking the side that is out of the
        // money at the centre keeps every term small.
        const bool receiver_side = strikes[i] <= fwd;
        auto side_price = [&](std::size_t j) {
            const double intrinsic = receiver_side ? std::max(strikes[j] - fwd, 0.0)
                                                   : std::max(fwd - strikes[j], 0.0);
            return time_value[j] + intrinsic;
        };
        double h_lo = strikes[i] - strikes[i - 1];
        double h_hi = strikes[i + 1] - strikes[i];
        double second = 2.0 *
                        (h_lo * side_price(i + 1) - (h_lo + h_hi) * side_price(i) +
                         h_hi * side_price(i - 1)) /
                        (h_lo * h_hi * (h_lo + h_hi));
        if (second < -1e-6)
            throw data_error("marginal_from_smile: negative density (butterfly arbitrage) at strike " +
                             std::to_string(strikes[i]));
        dens[i - 1] = std::max(second, 0.0);
    }
    return marginal(std::move(grid), std::move(dens), tag);
}

tilt_result tilt_marginal(const annuity_model& model, const model_coefficients& coeffs,
                          const market_inputs& mkt, const marginal& input, leg which) {
    const bool short_leg = which == leg::short_leg;
    const measure_tag expected = short_leg ? measure_tag::short_annuity
                                           : measure_tag::long_annuity;
    if (input.tag() != expected)
        throw contract_violation("tilt_marginal: input marginal is not in its natural "
                                 "vanilla-annuity measure");
    if (model.kind == model_kind::deterministic) {
        tilt_result out{input.retagged(measure_tag::underlying_annuity), 0.0};
        return out;
    }
    // Tilt slope toward the underlying-annuity measure; centred at the
    // natural forward of the tilted leg.
    double slope, centre;
    if (short_leg) {
        slope = coeffs.nu_s + coeffs.nu_e * mkt.rho * mkt.stdev_e / mkt.stdev_s;
        centre = mkt.r_s0;
    } else {
        slope = coeffs.mu_e + coeffs.mu_s * mkt.rho * mkt.stdev_s / mkt.stdev_e;
        centre = mkt.r_e0;
    }
    const auto& grid = input.grid();
    const auto& dens = input.density();
    std::vector<double> tilted(dens.size());
    double clipped = 0.0;
    if (model.kind == model_kind::linear) {
        std::vector<double> removed(dens.size(), 0.0);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double factor = 1.0 - slope * (grid[i] - centre);
            if (factor < 0.0) {
                removed[i] = dens[i] * (-factor);
                factor = 0.0;
            }
            tilted[i] = dens[i] * factor;
        }
        clipped = math::trapezoid(grid, removed);
        double mass = math::trapezoid(grid, tilted);
        if (mass <= 0.0)
            throw numerical_error("tilt_marginal: linear tilt removed all density mass");
        // Flooring breaks normalisation; restore unit mass explicitly.
        for (auto& d : tilted)
            d /= mass;
    } else {
        double normaliser = short_leg
            ? std::exp(-0.5 * std::pow(mkt.rho * coeffs.nu_e * mkt.stdev_e +
                                       coeffs.nu_s * mkt.stdev_s, 2))
            : std::exp(-0.5 * std::pow(mkt.rho * coeffs.mu_s * mkt.stdev_s +
                                       coeffs.mu_e * mkt.stdev_e, 2));
        for (std::size_t i = 0; i < grid.size(); ++i)
            tilted[i] = dens[i] * normaliser * std::exp(-slope * (grid[i] - centre));
    }
    tilt_result out{marginal(std::vector<double>(grid), std::move(tilted),
                             measure_tag::underlying_annuity),
                    clipped};
    return out;
}

} // namespace midcurve::models
