#pragma once

#include <string>
#include <utility>
#include <vector>

#include "midcurve/curve_engine.hpp"

namespace midcurve::models {

/// Market state feeding every pricing formula: the annuity triple, the two
/// forward swap rates, their terminal standard deviations at expiry
/// (absolute, decimal) and the rate correlation.
struct market_inputs {
    curve_engine::annuity_triple annuities;
    double r_s0 = 0.0;
    double r_e0 = 0.0;
    double stdev_s = 0.0;
    double stdev_e = 0.0;
    double rho = 0.0;
};

enum class model_kind { deterministic, linear, loglinear };

model_kind model_kind_from_string(const std::string& name);
std::string to_string(model_kind kind);

/// Annuity-ratio model: constant ratios, ratios linear in the rates, or
/// ratios exponential in the rates, parameterised by (sigma_e, sigma_s).
struct annuity_model {
    model_kind kind = model_kind::deterministic;
    double sigma_e = 0.0;
    double sigma_s = 0.0;

    annuity_model() = default;
    annuity_model(model_kind k, double se, double ss);
};

/// Derived per-model constants: the (mu, nu) loadings, the adjusted forwards
/// hat_r (means under the underlying-annuity measure) and tilde_r (means of
/// the opposite leg under each vanilla-annuity measure), the exponential
/// normalisers alpha (log-linear only) and the quadratic forms q.
struct model_coefficients {
    double mu_s = 0.0, mu_e = 0.0;
    double nu_s = 0.0, nu_e = 0.0;
    double hat_r_s = 0.0, hat_r_e = 0.0;
    double tilde_r_s = 0.0, tilde_r_e = 0.0;
    double alpha_s = 0.0, alpha_e = 0.0;
    double q_mu = 0.0, q_nu = 0.0;
};

model_coefficients coefficients(const annuity_model& model, const market_inputs& mkt);

/// Annuity-ratio weights (w1, w2) = (A_e/A_u, A_s/A_u) as functions of the
/// long rate y and the short rate x. w1 - w2 = 1 identically for the
/// deterministic and linear kinds.
std::pair<double, double> weights(const annuity_model& model,
                                  const model_coefficients& coeffs,
                                  const market_inputs& mkt, double x, double y);

enum class measure_tag { short_annuity, long_annuity, underlying_annuity };
enum class leg { short_leg, long_leg };

/// Gridded one-dimensional distribution: density and CDF sampled on a
/// strictly increasing rate grid, tagged with the measure it lives under.
/// The CDF is piecewise quadratic (trapezoid of the linear density
/// interpolant), and the quantile is its exact inverse.
class marginal {
public:
    marginal(std::vector<double> grid, std::vector<double> density, measure_tag tag);

    double quantile(double p) const;
    double cdf_at(double x) const;
    double mean() const { return mean_; }
    /// Trapezoid mass of the density as supplied, before normalisation.
    double raw_mass() const { return raw_mass_; }
    measure_tag tag() const { return tag_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& density() const { return density_; }
    const std::vector<double>& cdf() const { return cdf_; }
    marginal retagged(measure_tag tag) const;

private:
    std::vector<double> grid_;
    std::vector<double> density_;
    std::vector<double> cdf_;
    measure_tag tag_;
    double mean_ = 0.0;
    double raw_mass_ = 0.0;
};

/// Grid geometry for sampled marginals: node count and half-width in
/// standard deviations around the forward.
struct grid_spec {
    int nodes = 801;
    double span_stdevs = 8.0;
};

/// Normal density with the given mean and standard deviation sampled on the
/// grid; the flat-smile baseline of the quoting convention.
marginal flat_normal_marginal(double fwd, double stdev, measure_tag tag,
                              const grid_spec& spec = {});

/// Risk-neutral density from a strip of receiver prices quoted as normal
/// vols by strike: second finite difference of the price in strike,
/// renormalised. Rejects negative densities (butterfly arbitrage).
marginal marginal_from_smile(const std::vector<double>& strikes,
                             const std::vector<double>& normal_vols, double fwd,
                             double t_x, measure_tag tag);

/// Result of the measure change from a vanilla-annuity measure to the
/// underlying-annuity measure: the reweighted marginal plus the density mass
/// removed by flooring a negative linear tilt (zero unless kind == linear
/// and the grid reaches the tilt's zero crossing).
struct tilt_result {
    marginal tilted;
    double clipped_mass = 0.0;
};

tilt_result tilt_marginal(const annuity_model& model, const model_coefficients& coeffs,
                          const market_inputs& mkt, const marginal& input, leg which);

} // namespace midcurve::models
