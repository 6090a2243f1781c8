#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "midcurve/curve_engine.hpp"

namespace midcurve::tsr_calibration {

/// Single-driver representation of the co-initial annuity strip: each period
/// factor 1 + tau_i R_i(t_x) is modelled as (1 + tau_i R_i) e^{mu_i + nu_i Z}
/// for one standard normal driver Z (the standardized long or short rate).
struct driver_mapping {
    std::vector<double> taus;
    std::vector<double> forwards; // co-initial par rates to each payment date
    std::vector<double> loadings;
    std::vector<double> drifts;
    std::string driver_label;
};

/// Covariances of the annuity ratios with their rates, each under the
/// vanilla-annuity measure of its own leg.
struct covariance_estimates {
    double cov_e = 0.0; // cov(A_u/A_e, long rate)
    double cov_s = 0.0; // cov(A_u/A_s, short rate)
};

struct calibration_result {
    double sigma_e = 0.0;
    double sigma_s = 0.0;
    covariance_estimates covariances;
};

/// Per-period loadings nu_i = tau_i rho_i Sigma_i / (1 + tau_i R_i).
std::vector<double> loadings(const std::vector<double>& taus,
                             const std::vector<double>& forwards,
                             const std::vector<double>& correlations,
                             const std::vector<double>& stdevs);

/// Drifts mu_j solved sequentially so that the expected annuity of the first
/// j periods reproduces the curve annuity target A_j for every j. Each step
/// has the closed-form solution mu_j = ln(S_j / A_j) with S_j the partial
/// sum carrying the previously solved drifts.
std::vector<double> drift_recursion(const std::vector<double>& annuity_targets,
                                    const std::vector<double>& taus,
                                    const std::vector<double>& forwards,
                                    const std::vector<double>& loadings);

/// Annuity of the first `periods` payment dates at driver value z.
double annuity_of_driver(const driver_mapping& mapping, std::size_t periods, double z);

/// First derivative of the same annuity in the driver at z = 0.
double annuity_derivative_at_zero(const driver_mapping& mapping, std::size_t periods);

/// Annuities of the short and long legs at driver value z.
std::pair<double, double> annuities_of_driver(const driver_mapping& mapping,
                                              std::size_t periods_short,
                                              std::size_t periods_long, double z);

/// Estimates (sigma_e, sigma_s) for the midcurve geometry (t_x, t_s, t_e):
/// builds one driver mapping per rate, linearizes the annuity ratios at the
/// driver mean, turns the slopes into the ratio/rate covariances, and solves
/// the 2x2 system linking those covariances to (sigma_e, sigma_s).
/// Empty correlation vectors default to the flat value `rho` with the
/// driver's own period at correlation 1.
calibration_result estimate_sigmas(const curve_engine::discount_curve& curve,
                                   double t_x, double t_s, double t_e, double frequency,
                                   const std::vector<double>& period_stdevs,
                                   const std::vector<double>& corr_with_long,
                                   const std::vector<double>& corr_with_short,
                                   double stdev_s, double stdev_e, double rho);

} // namespace midcurve::tsr_calibration
