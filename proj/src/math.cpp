#include "midcurve/math.hpp"

#include "midcurve/errors.hpp"

namespace midcurve::math {

namespace {

// Acklam's rational approximation, then one Halley step against erfc.
double acklam(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

} // namespace

double norm_cdf_inv(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw invalid_input("norm_cdf_inv: probability must lie strictly in (0,1)");
    double x = acklam(p);
    // Halley refinement: full double precision from the ~1e-9 seed.
    double e = norm_cdf(x) - p;
    double u = e / norm_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

gauss_hermite_rule gauss_hermite(int order) {
    if (order < 1)
        throw invalid_input("gauss_hermite: order must be positive");
    const int n = order;
    const double pim4 = 0.7511255444649424829; // pi^{-1/4}
    std::vector<double> t(n), w(n);
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        // Initial guesses for roots of the physicists' Hermite polynomial.
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(n, 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * t[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * t[1];
        else
            z = 2.0 * z - t[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z)))
                break;
        }
        t[i] = z;
        t[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    // Map from weight exp(-t^2) to the standard normal: z = sqrt(2) t,
    // weight scale 1/sqrt(pi); nodes emitted in increasing order.
    gauss_hermite_rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double sqrt2 = 1.4142135623730950488;
    const double inv_sqrt_pi = 0.5641895835477562869;
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = -sqrt2 * t[i];
        rule.weights[i] = w[i] * inv_sqrt_pi;
    }
    return rule;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw invalid_input("trapezoid: need two equal-length vectors of size >= 2");
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

double brent(const std::function<double(double)>& f, double a, double b,
             double xtol, double ftol, int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw numerical_error("brent: root not bracketed");
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= ftol)
            return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r, s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw numerical_error("brent: no convergence within iteration budget");
}

namespace {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32_block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key) {
    const std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    const std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    std::uint32_t c0 = counter[0], c1 = counter[1], c2 = counter[2], c3 = counter[3];
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(m0, c0, hi0, lo0);
        mulhilo(m1, c2, hi1, lo1);
        std::uint32_t n0 = hi1 ^ c1 ^ k0;
        std::uint32_t n1 = lo1;
        std::uint32_t n2 = hi0 ^ c3 ^ k1;
        std::uint32_t n3 = lo0;
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;
        k0 += w0;
        k1 += w1;
    }
    return {c0, c1, c2, c3};
}

std::array<std::uint32_t, 4> philox4x32(std::uint64_t counter, std::uint64_t seed) {
    return philox4x32_block({static_cast<std::uint32_t>(counter),
                             static_cast<std::uint32_t>(counter >> 32), 0u, 0u},
                            {static_cast<std::uint32_t>(seed),
                             static_cast<std::uint32_t>(seed >> 32)});
}

std::pair<double, double> philox_uniform_pair(std::uint64_t counter, std::uint64_t seed) {
    auto block = philox4x32(counter, seed);
    std::uint64_t x = (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
    std::uint64_t y = (static_cast<std::uint64_t>(block[3]) << 32) | block[2];
    const double scale = 1.1102230246251565404e-16; // 2^-53
    double u = (static_cast<double>(x >> 11) + 0.5) * scale;
    double v = (static_cast<double>(y >> 11) + 0.5) * scale;
    return {u, v};
}

std::pair<double, double> philox_normal_pair(std::uint64_t counter, std::uint64_t seed) {
    auto [u, v] = philox_uniform_pair(counter, seed);
    return {norm_cdf_inv(u), norm_cdf_inv(v)};
}

} // namespace midcurve::math
