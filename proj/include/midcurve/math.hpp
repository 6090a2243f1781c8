#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace midcurve::math {

inline double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

/// Inverse standard normal CDF, accurate to ~1e-15 over (0,1).
double norm_cdf_inv(double p);

/// Quadrature rule against the standard normal weight: sum_i w_i f(z_i)
/// approximates E[f(Z)], Z ~ N(0,1). Weights sum to 1.
struct gauss_hermite_rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

gauss_hermite_rule gauss_hermite(int order);

/// Composite trapezoid integral of y over the (possibly non-uniform) grid x.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

/// Bracketed Brent root finder. Requires f(a) and f(b) of opposite sign.
/// Stops when the bracket width falls below xtol or |f| below ftol.
double brent(const std::function<double(double)>& f, double a, double b,
             double xtol, double ftol, int max_iter = 200);

/// One Philox4x32-10 block on an explicit 128-bit counter and 64-bit key.
std::array<std::uint32_t, 4> philox4x32_block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key);

/// Philox4x32-10 counter-based generator block: 128 bits of state keyed by a
/// 64-bit seed, indexable by a 64-bit counter. Pure function of (seed, ctr).
std::array<std::uint32_t, 4> philox4x32(std::uint64_t counter, std::uint64_t seed);

/// Two independent U(0,1) variates from one Philox block, each built from
/// the top 53 bits of a 64-bit lane; values lie strictly inside (0,1).
std::pair<double, double> philox_uniform_pair(std::uint64_t counter, std::uint64_t seed);

/// Two independent N(0,1) variates via inverse-CDF of the uniform pair.
std::pair<double, double> philox_normal_pair(std::uint64_t counter, std::uint64_t seed);

} // namespace midcurve::math
