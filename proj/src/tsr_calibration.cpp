#include "midcurve/tsr_calibration.hpp"

#include <cmath>

#include "midcurve/errors.hpp"

namespace midcurve::tsr_calibration {

std::vector<double> loadings(const std::vector<double>& taus,
                             const std::vector<double>& forwards,
                             const std::vector<double>& correlations,
                             const std::vector<double>& stdevs) {
    const std::size_t n = taus.size();
    if (forwards.size() != n || correlations.size() != n || stdevs.size() != n || n == 0)
        throw invalid_input("loadings: per-period vectors must be non-empty and equal-length");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (1.0 + taus[i] * forwards[i] <= 0.0)
            throw invalid_input("loadings: degenerate period factor 1 + tau R <= 0 at period " +
                                std::to_string(i + 1));
        if (correlations[i] < -1.0 || correlations[i] > 1.0)
            throw invalid_input("loadings: correlation outside [-1,1] at period " +
                                std::to_string(i + 1));
        out[i] = taus[i] * correlations[i] * stdevs[i] / (1.0 + taus[i] * forwards[i]);
    }
    return out;
}

std::vector<double> drift_recursion(const std::vector<double>& annuity_targets,
                                    const std::vector<double>& taus,
                                    const std::vector<double>& forwards,
                                    const std::vector<double>& loadings) {
    const std::size_t n = taus.size();
    if (annuity_targets.size() != n || forwards.size() != n || loadings.size() != n || n == 0)
        throw invalid_input("drift_recursion: per-period vectors must be equal-length");
    std::vector<double> mu(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0 && annuity_targets[j] <= annuity_targets[j - 1])
            throw calibration_error("drift_recursion: annuity targets must increase at period " +
                                    std::to_string(j + 1));
        // Every term of the j-th expected annuity carries e^{-mu_j}; S is
        // the sum with mu_j left out.
        double s = 0.0;
        for (std::size_t i = 0; i <= j; ++i) {
            double mu_sum = 0.0, nu_sum = 0.0, factor = 1.0;
            for (std::size_t k = i; k <= j; ++k) {
                if (k < j)
                    mu_sum += mu[k];
                nu_sum += loadings[k];
                factor *= 1.0 + taus[k] * forwards[k];
            }
            s += taus[i] * std::exp(-mu_sum + 0.5 * nu_sum * nu_sum) / factor;
        }
        if (!(s > 0.0) || annuity_targets[j] <= 0.0)
            throw calibration_error("drift_recursion: non-positive annuity at period " +
                                    std::to_string(j + 1));
        mu[j] = std::log(s / annuity_targets[j]);
        if (std::abs(mu[j]) > 1.0)
            throw calibration_error("drift_recursion: drift outside [-1,1] at period " +
                                    std::to_string(j + 1));
    }
    // Defensive re-check of the defining identity.
    for (std::size_t j = 0; j < n; ++j) {
        double a = 0.0;
        for (std::size_t i = 0; i <= j; ++i) {
            double mu_sum = 0.0, nu_sum = 0.0, factor = 1.0;
            for (std::size_t k = i; k <= j; ++k) {
                mu_sum += mu[k];
                nu_sum += loadings[k];
                factor *= 1.0 + taus[k] * forwards[k];
            }
            a += taus[i] * std::exp(-mu_sum + 0.5 * nu_sum * nu_sum) / factor;
        }
        if (std::abs(a - annuity_targets[j]) > 1e-12 * std::max(1.0, annuity_targets[j]))
            throw calibration_error("drift_recursion: identity residual above 1e-12 at period " +
                                    std::to_string(j + 1));
    }
    return mu;
}

double annuity_of_driver(const driver_mapping& mapping, std::size_t periods, double z) {
    if (periods == 0 || periods > mapping.taus.size())
        throw invalid_input("annuity_of_driver: period count out of range");
    double a = 0.0;
    for (std::size_t i = 0; i < periods; ++i) {
        double expo = 0.0, factor = 1.0;
        for (std::size_t k = i; k < periods; ++k) {
            expo -= mapping.drifts[k] + mapping.loadings[k] * z;
            factor *= 1.0 + mapping.taus[k] * mapping.forwards[k];
        }
        a += mapping.taus[i] * std::exp(expo) / factor;
    }
    return a;
}

double annuity_derivative_at_zero(const driver_mapping& mapping, std::size_t periods) {
    if (periods == 0 || periods > mapping.taus.size())
        throw invalid_input("annuity_derivative_at_zero: period count out of range");
    double da = 0.0;
    for (std::size_t i = 0; i < periods; ++i) {
        double mu_sum = 0.0, nu_sum = 0.0, factor = 1.0;
        for (std::size_t k = i; k < periods; ++k) {
            mu_sum += mapping.drifts[k];
            nu_sum += mapping.loadings[k];
            factor *= 1.0 + mapping.taus[k] * mapping.forwards[k];
        }
        da += mapping.taus[i] * std::exp(-mu_sum) / factor * (-nu_sum);
    }
    return da;
}

std::pair<double, double> annuities_of_driver(const driver_mapping& mapping,
                                              std::size_t periods_short,
                                              std::size_t periods_long, double z) {
    return {annuity_of_driver(mapping, periods_short, z),
            annuity_of_driver(mapping, periods_long, z)};
}

namespace {

struct strip {
    std::vector<double> taus, forwards, targets;
    std::size_t idx_short = 0; // period count covering (t_x, t_s]
};

strip build_strip(const curve_engine::discount_curve& curve, double t_x, double t_s,
                  double t_e, double frequency) {
    auto schedule = curve_engine::make_schedule(t_x, t_x, t_e, frequency);
    strip s;
    s.taus = schedule.accruals;
    const double df_x = curve.df(t_x);
    double acc = 0.0;
    for (std::size_t i = 0; i < schedule.pay_times.size(); ++i) {
        double t = schedule.pay_times[i];
        acc += s.taus[i] * curve.df(t) / df_x;
        s.targets.push_back(acc);
        s.forwards.push_back((1.0 - curve.df(t) / df_x) / acc);
        if (std::abs(t - t_s) < 1e-9)
            s.idx_short = i + 1;
    }
    if (s.idx_short == 0)
        throw invalid_input("estimate_sigmas: t_s is not on the payment schedule");
    if (s.idx_short == s.targets.size())
        throw invalid_input("estimate_sigmas: t_s must precede t_e on the schedule");
    return s;
}

std::vector<double> default_correlations(std::size_t n, std::size_t self_idx, double rho) {
    std::vector<double> c(n, rho);
    c[self_idx - 1] = 1.0;
    return c;
}

} // namespace

calibration_result estimate_sigmas(const curve_engine::discount_curve& curve,
                                   double t_x, double t_s, double t_e, double frequency,
                                   const std::vector<double>& period_stdevs,
                                   const std::vector<double>& corr_with_long,
                                   const std::vector<double>& corr_with_short,
                                   double stdev_s, double stdev_e, double rho) {
    strip s = build_strip(curve, t_x, t_s, t_e, frequency);
    const std::size_t n = s.taus.size();
    const std::size_t m = s.idx_short;
    if (period_stdevs.size() != n)
        throw invalid_input("estimate_sigmas: need one per-period stdev per payment date (" +
                            std::to_string(n) + ")");
    auto corr_e = corr_with_long.empty() ? default_correlations(n, n, rho) : corr_with_long;
    auto corr_s = corr_with_short.empty() ? default_correlations(n, m, rho) : corr_with_short;
    if (corr_e.size() != n || corr_s.size() != n)
        throw invalid_input("estimate_sigmas: correlation vectors must match the period count");

    driver_mapping driver_long{s.taus, s.forwards,
                               loadings(s.taus, s.forwards, corr_e, period_stdevs),
                               {}, "long"};
    driver_long.drifts = drift_recursion(s.targets, s.taus, s.forwards, driver_long.loadings);
    driver_mapping driver_short{s.taus, s.forwards,
                                loadings(s.taus, s.forwards, corr_s, period_stdevs),
                                {}, "short"};
    driver_short.drifts = drift_recursion(s.targets, s.taus, s.forwards, driver_short.loadings);

    // Ratio slopes at the driver mean: d/dz of A_u/A_e = 1 - A_s/A_e along
    // the long driver, and of A_u/A_s = A_e/A_s - 1 along the short driver.
    // The quotient rule takes each driver's own annuities at z = 0; these sit
    // a convexity term 0.5 (sum nu)^2 below the curve targets E[A_j(Z)].
    const auto [a_s_long, a_e_long] = annuities_of_driver(driver_long, m, n, 0.0);
    const double da_s_long = annuity_derivative_at_zero(driver_long, m);
    const double da_e_long = annuity_derivative_at_zero(driver_long, n);
    const double slope_long =
        (a_s_long * da_e_long - da_s_long * a_e_long) / (a_e_long * a_e_long);
    const auto [a_s_short, a_e_short] = annuities_of_driver(driver_short, m, n, 0.0);
    const double da_s_short = annuity_derivative_at_zero(driver_short, m);
    const double da_e_short = annuity_derivative_at_zero(driver_short, n);
    const double slope_short =
        (da_e_short * a_s_short - a_e_short * da_s_short) / (a_s_short * a_s_short);

    calibration_result result;
    result.covariances.cov_e = slope_long * stdev_e;
    result.covariances.cov_s = slope_short * stdev_s;
    if (result.covariances.cov_e == 0.0 && result.covariances.cov_s == 0.0)
        return result; // zero-vol inputs calibrate to sigma_e = sigma_s = 0

    const double a_s0 = s.targets[m - 1];
    const double a_e0 = s.targets[n - 1];
    const double ratio_e = (a_e0 - a_s0) / a_e0;
    const double ratio_s = (a_e0 - a_s0) / a_s0;
    const double b_e = -result.covariances.cov_e / (ratio_e * ratio_e);
    const double b_s = -result.covariances.cov_s / (ratio_s * ratio_s);
    // [ stdev_e^2          rho stdev_e stdev_s ] [sigma_e]   [b_e]
    // [ rho stdev_e stdev_s        stdev_s^2   ] [sigma_s] = [b_s]
    const double det = stdev_e * stdev_e * stdev_s * stdev_s * (1.0 - rho * rho);
    const double norm = stdev_e * stdev_e * stdev_s * stdev_s;
    if (std::abs(det) <= 1e-12 * std::max(norm, 1e-300))
        throw calibration_error("estimate_sigmas: covariance system is singular "
                                "(|rho| ~ 1 or zero vols)");
    result.sigma_e = (b_e * stdev_s * stdev_s - b_s * rho * stdev_e * stdev_s) / det;
    result.sigma_s = (b_s * stdev_e * stdev_e - b_e * rho * stdev_e * stdev_s) / det;
    return result;
}

} // namespace midcurve::tsr_calibration
