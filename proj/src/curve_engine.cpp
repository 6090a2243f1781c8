#include "midcurve/curve_engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "midcurve/errors.hpp"

namespace midcurve::curve_engine {

discount_curve::discount_curve(std::vector<double> times, std::vector<double> dfs)
    : times_(std::move(times)), dfs_(std::move(dfs)) {
    if (times_.empty() || times_.size() != dfs_.size())
        throw invalid_input("discount_curve: need matching non-empty time/df vectors");
    if (times_.front() < 0.0)
        throw invalid_input("discount_curve: pillar times must be >= 0");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (i > 0 && times_[i] <= times_[i - 1])
            throw invalid_input("discount_curve: pillar times must be strictly increasing");
        if (dfs_[i] <= 0.0)
            throw invalid_input("discount_curve: discount factors must be positive");
    }
    if (times_.front() > 0.0) {
        times_.insert(times_.begin(), 0.0);
        dfs_.insert(dfs_.begin(), 1.0);
    } else if (std::abs(dfs_.front() - 1.0) > 1e-12) {
        throw invalid_input("discount_curve: D(0) must equal 1");
    }
    log_dfs_.resize(dfs_.size());
    std::transform(dfs_.begin(), dfs_.end(), log_dfs_.begin(),
                   [](double d) { return std::log(d); });
}

discount_curve discount_curve::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw data_error("curve file not found or unreadable: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw data_error("curve file is empty: " + path);
    auto strip = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(),
                               [](unsigned char c) { return std::isspace(c); }),
                s.end());
        return s;
    };
    if (strip(line) != "t,df")
        throw data_error("curve file must start with header `t,df`: " + path);
    std::vector<double> times, dfs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = strip(line);
        if (s.empty() || s.front() == '#')
            continue;
        auto comma = s.find(',');
        if (comma == std::string::npos)
            throw data_error("curve file line " + std::to_string(line_no) +
                             ": expected `time,discount_factor`");
        try {
            times.push_back(std::stod(s.substr(0, comma)));
            dfs.push_back(std::stod(s.substr(comma + 1)));
        } catch (const std::exception&) {
            throw data_error("curve file line " + std::to_string(line_no) +
                             ": non-numeric field");
        }
    }
    return discount_curve(std::move(times), std::move(dfs));
}

double discount_curve::df(double t) const {
    if (t < 0.0)
        throw invalid_input("discount_curve::df: negative time");
    if (t >= times_.back()) {
        // Flat-forward extrapolation off the last pillar segment.
        if (times_.size() == 1)
            return dfs_.back();
        std::size_t n = times_.size();
        double fwd = (log_dfs_[n - 2] - log_dfs_[n - 1]) / (times_[n - 1] - times_[n - 2]);
        return std::exp(log_dfs_[n - 1] - fwd * (t - times_[n - 1]));
    }
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    if (hi == 0)
        return dfs_.front();
    std::size_t lo = hi - 1;
    double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return std::exp(log_dfs_[lo] + w * (log_dfs_[hi] - log_dfs_[lo]));
}

swap_schedule make_schedule(double t_x, double t_s, double t_e, double frequency) {
    if (!(0.0 < t_x && t_x <= t_s && t_s < t_e))
        throw invalid_input("make_schedule: need 0 < t_x <= t_s < t_e");
    if (frequency <= 0.0)
        throw invalid_input("make_schedule: frequency must be positive");
    double tau = 1.0 / frequency;
    double n_real = (t_e - t_s) * frequency;
    long n = std::lround(n_real);
    if (n < 1 || std::abs(n_real - static_cast<double>(n)) > 1e-9)
        throw invalid_input("make_schedule: frequency does not divide the swap tenor");
    swap_schedule s;
    s.t_x = t_x;
    s.t_s = t_s;
    s.t_e = t_e;
    s.pay_times.reserve(static_cast<std::size_t>(n));
    s.accruals.assign(static_cast<std::size_t>(n), tau);
    for (long i = 1; i <= n; ++i)
        s.pay_times.push_back(i == n ? t_e : t_s + tau * static_cast<double>(i));
    return s;
}

double annuity(const discount_curve& curve, const std::vector<double>& pay_times,
               const std::vector<double>& accruals) {
    if (pay_times.empty())
        throw invalid_input("annuity: empty payment schedule");
    if (pay_times.size() != accruals.size())
        throw invalid_input("annuity: payment times and accruals differ in length");
    double a = 0.0;
    for (std::size_t i = 0; i < pay_times.size(); ++i) {
        if (accruals[i] <= 0.0)
            throw invalid_input("annuity: accruals must be positive");
        if (i > 0 && pay_times[i] <= pay_times[i - 1])
            throw invalid_input("annuity: payment times must be strictly increasing");
        a += accruals[i] * curve.df(pay_times[i]);
    }
    return a;
}

double forward_swap_rate(const discount_curve& curve, const swap_schedule& schedule) {
    double a = annuity(curve, schedule.pay_times, schedule.accruals);
    if (a <= 0.0)
        throw numerical_error("forward_swap_rate: non-positive annuity");
    return (curve.df(schedule.t_s) - curve.df(schedule.t_e)) / a;
}

annuity_triple make_annuity_triple(const discount_curve& curve, double t_x,
                                   double t_s, double t_e, double frequency) {
    if (!(0.0 < t_x && t_x <= t_s && t_s < t_e))
        throw invalid_input("make_annuity_triple: need 0 < t_x <= t_s < t_e");
    swap_schedule long_leg = make_schedule(t_x, t_x, t_e, frequency);
    // t_s must be a payment date of the long leg so the legs nest.
    bool aligned = false;
    for (double t : long_leg.pay_times)
        if (std::abs(t - t_s) < 1e-9) aligned = true;
    if (!aligned)
        throw invalid_input("make_annuity_triple: t_s is not on the long-leg schedule");
    annuity_triple triple;
    double a_s = 0.0, a_u = 0.0;
    for (std::size_t i = 0; i < long_leg.pay_times.size(); ++i) {
        double contribution = long_leg.accruals[i] * curve.df(long_leg.pay_times[i]);
        if (long_leg.pay_times[i] <= t_s + 1e-9)
            a_s += contribution;
        else
            a_u += contribution;
    }
    triple.a_s0 = a_s;
    triple.a_e0 = a_s + a_u;
    // Defining the underlying annuity as the difference keeps the triangle
    // a_u0 = a_e0 - a_s0 exact in floating point (off the direct partial sum
    // by at most one ulp).
    triple.a_u0 = triple.a_e0 - triple.a_s0;
    if (triple.a_s0 <= 0.0 || triple.a_u0 <= 0.0)
        throw invalid_input("make_annuity_triple: degenerate legs");
    return triple;
}

} // namespace midcurve::curve_engine
