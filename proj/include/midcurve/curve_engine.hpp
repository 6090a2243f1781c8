#pragma once

#include <string>
#include <vector>

namespace midcurve::curve_engine {

/// Discount curve on pillar (time, df) pairs with log-linear interpolation in
/// the discount factors and flat-forward extrapolation beyond the last pillar.
/// An anchor D(0) = 1 is implied when the first pillar lies after t = 0.
class discount_curve {
public:
    discount_curve(std::vector<double> times, std::vector<double> dfs);

    /// Reads a curve from a text file with header `t,df` and one
    /// `time,discount_factor` pair per line.
    static discount_curve from_csv(const std::string& path);

    double df(double t) const;
    double last_time() const { return times_.back(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& dfs() const { return dfs_; }

private:
    std::vector<double> times_;
    std::vector<double> dfs_;
    std::vector<double> log_dfs_;
};

/// Fixed-leg geometry of one forward-starting swap observed at `t_x`:
/// the swap runs from `t_s` to `t_e` with the given payment times/accruals.
struct swap_schedule {
    double t_x = 0.0;
    double t_s = 0.0;
    double t_e = 0.0;
    std::vector<double> pay_times;
    std::vector<double> accruals;
};

/// Builds the fixed leg of the (t_s -> t_e) swap with `frequency` payments
/// per year, observed at t_x. Payment times cover (t_s, t_e].
swap_schedule make_schedule(double t_x, double t_s, double t_e, double frequency);

/// Time-zero annuities of the short (t_x->t_s), long (t_x->t_e) and
/// underlying (t_s->t_e) swaps. a_u0 = a_e0 - a_s0 by construction.
struct annuity_triple {
    double a_s0 = 0.0;
    double a_e0 = 0.0;
    double a_u0 = 0.0;
};

/// Sum of tau_i * D(0, T_i) over the payment schedule.
double annuity(const discount_curve& curve, const std::vector<double>& pay_times,
               const std::vector<double>& accruals);

/// Par rate of the scheduled swap: (D(t_s) - D(t_e)) / annuity.
double forward_swap_rate(const discount_curve& curve, const swap_schedule& schedule);

/// Assembles the midcurve annuity triple; the underlying annuity is the sum
/// over the (t_s, t_e] payment subset of the long leg, so the triangle
/// a_u0 = a_e0 - a_s0 is exact.
annuity_triple make_annuity_triple(const discount_curve& curve, double t_x,
                                   double t_s, double t_e, double frequency);

} // namespace midcurve::curve_engine
