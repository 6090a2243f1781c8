#include "midcurve/copula_pricer.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "midcurve/errors.hpp"
#include "midcurve/math.hpp"

namespace midcurve::copula_pricer {

option_side side_from_string(const std::string& name) {
    if (name == "receiver") return option_side::receiver;
    if (name == "payer") return option_side::payer;
    throw invalid_input("unknown option side: " + name + " (expected receiver|payer)");
}

std::string to_string(option_side side) {
    return side == option_side::receiver ? "receiver" : "payer";
}

namespace {

void validate_trade(const midcurve_trade& trade) {
    if (trade.notional <= 0.0)
        throw invalid_input("midcurve_trade: notional must be positive");
    if (!(0.0 < trade.t_x && trade.t_x <= trade.t_s && trade.t_s < trade.t_e))
        throw invalid_input("midcurve_trade: need 0 < t_x <= t_s < t_e");
}

void validate_copula(const copula_spec& copula, bool monte_carlo) {
    if (!(copula.rho_copula > -1.0 && copula.rho_copula < 1.0))
        throw invalid_input("copula_spec: rho_copula must lie strictly in (-1,1)");
    if (copula.order < 16)
        throw invalid_input("copula_spec: quadrature order must be >= 16");
    if (monte_carlo && copula.paths < 10'000)
        throw invalid_input("copula_spec: Monte Carlo requires at least 1e4 paths");
    if (copula.workers < 1)
        throw invalid_input("copula_spec: workers must be >= 1");
}

void validate_measures(const models::marginal& marginal_s,
                       const models::marginal& marginal_e) {
    if (marginal_s.tag() != models::measure_tag::underlying_annuity ||
        marginal_e.tag() != models::measure_tag::underlying_annuity)
        throw contract_violation("pricer: marginals must be measure-changed to the "
                                 "underlying-annuity measure before pricing");
}

struct quadrature_sums {
    double receiver = 0.0; // E[(K - w1 y + w2 x)^+]
    double forward = 0.0;  // E[w1 y - w2 x]
};

quadrature_sums integrate(double strike, const models::market_inputs& mkt,
                          const models::annuity_model& model,
                          const copula_spec& copula,
                          const models::marginal& marginal_s,
                          const models::marginal& marginal_e) {
    const auto coeffs = models::coefficients(model, mkt);
    const auto rule = math::gauss_hermite(copula.order);
    const double rho = copula.rho_copula;
    const double rho_bar = std::sqrt(1.0 - rho * rho);
    const int n = copula.order;
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] =
            marginal_s.quantile(math::norm_cdf(rule.nodes[static_cast<std::size_t>(i)]));
    quadrature_sums sums;
    for (int i = 0; i < n; ++i) {
        const double u = rule.nodes[static_cast<std::size_t>(i)];
        const double wu = rule.weights[static_cast<std::size_t>(i)];
        const double x = xs[static_cast<std::size_t>(i)];
        double rec_i = 0.0, fwd_i = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = rho * u + rho_bar * rule.nodes[static_cast<std::size_t>(j)];
            const double y = marginal_e.quantile(math::norm_cdf(v));
            const auto [w1, w2] = models::weights(model, coeffs, mkt, x, y);
            const double rate = w1 * y - w2 * x;
            const double wv = rule.weights[static_cast<std::size_t>(j)];
            rec_i += wv * std::max(strike - rate, 0.0);
            fwd_i += wv * rate;
        }
        sums.receiver += wu * rec_i;
        sums.forward += wu * fwd_i;
    }
    return sums;
}

} // namespace

std::pair<double, double> joint_transform(const models::marginal& marginal_s,
                                          const models::marginal& marginal_e,
                                          double u, double v) {
    if (!std::isfinite(u) || !std::isfinite(v))
        throw invalid_input("joint_transform: coordinates must be finite");
    return {marginal_s.quantile(math::norm_cdf(u)), marginal_e.quantile(math::norm_cdf(v))};
}

pricing_result price_quadrature(const midcurve_trade& trade,
                                const models::market_inputs& mkt,
                                const models::annuity_model& model,
                                const copula_spec& copula,
                                const models::marginal& marginal_s,
                                const models::marginal& marginal_e) {
    validate_trade(trade);
    validate_copula(copula, false);
    validate_measures(marginal_s, marginal_e);
    const auto sums = integrate(trade.strike, mkt, model, copula, marginal_s, marginal_e);
    const double scale = mkt.annuities.a_u0 * trade.notional;
    double price = scale * sums.receiver;
    if (trade.side == option_side::payer)
        price -= scale * (trade.strike - sums.forward);
    pricing_result result;
    result.price = price;
    result.std_error = 0.0;
    result.method = pricing_method::quadrature;
    result.diagnostics["order"] = copula.order;
    result.diagnostics["nodes"] = static_cast<double>(copula.order) * copula.order;
    return result;
}

pricing_result price_mc(const midcurve_trade& trade,
                        const models::market_inputs& mkt,
                        const models::annuity_model& model,
                        const copula_spec& copula,
                        const models::marginal& marginal_s,
                        const models::marginal& marginal_e) {
    validate_trade(trade);
    validate_copula(copula, true);
    validate_measures(marginal_s, marginal_e);
    const auto coeffs = models::coefficients(model, mkt);
    const double rho = copula.rho_copula;
    const double rho_bar = std::sqrt(1.0 - rho * rho);
    const bool payer = trade.side == option_side::payer;
    const long paths = copula.paths;
    constexpr long chunk_size = 4096;
    const long n_chunks = (paths + chunk_size - 1) / chunk_size;

    // Fixed-size chunks accumulated independently and combined in chunk
    // order keep the result bit-identical for any worker count.
    std::vector<double> chunk_sum(static_cast<std::size_t>(n_chunks), 0.0);
    std::vector<double> chunk_sumsq(static_cast<std::size_t>(n_chunks), 0.0);
    auto run_chunk = [&](long c) {
        const long begin = c * chunk_size;
        const long end = std::min(paths, begin + chunk_size);
        double s = 0.0, s2 = 0.0;
        for (long p = begin; p < end; ++p) {
            const auto [z1, z2] = math::philox_normal_pair(
                static_cast<std::uint64_t>(p), copula.seed);
            const double v = rho * z1 + rho_bar * z2;
            const double x = marginal_s.quantile(math::norm_cdf(z1));
            const double y = marginal_e.quantile(math::norm_cdf(v));
            const auto [w1, w2] = models::weights(model, coeffs, mkt, x, y);
            const double bracket = trade.strike - (w1 * y - w2 * x);
            const double payoff = payer ? std::max(-bracket, 0.0) : std::max(bracket, 0.0);
            s += payoff;
            s2 += payoff * payoff;
        }
        chunk_sum[static_cast<std::size_t>(c)] = s;
        chunk_sumsq[static_cast<std::size_t>(c)] = s2;
    };
    const int workers = static_cast<int>(std::min<long>(copula.workers, n_chunks));
    if (workers <= 1) {
        for (long c = 0; c < n_chunks; ++c)
            run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (long c = w; c < n_chunks; c += workers)
                    run_chunk(c);
            });
        for (auto& t : pool)
            t.join();
    }
    double sum = 0.0, sumsq = 0.0;
    for (long c = 0; c < n_chunks; ++c) {
        sum += chunk_sum[static_cast<std::size_t>(c)];
        sumsq += chunk_sumsq[static_cast<std::size_t>(c)];
    }
    const double n = static_cast<double>(paths);
    const double mean = sum / n;
    const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    const double scale = mkt.annuities.a_u0 * trade.notional;
    pricing_result result;
    result.price = scale * mean;
    result.std_error = scale * std::sqrt(var / n);
    result.method = pricing_method::monte_carlo;
    result.diagnostics["paths"] = n;
    result.diagnostics["chunks"] = static_cast<double>(n_chunks);
    result.diagnostics["workers"] = static_cast<double>(workers);
    return result;
}

double underlying_forward(const models::market_inputs& mkt,
                          const models::annuity_model& model,
                          const copula_spec& copula,
                          const models::marginal& marginal_s,
                          const models::marginal& marginal_e) {
    validate_copula(copula, false);
    validate_measures(marginal_s, marginal_e);
    return integrate(0.0, mkt, model, copula, marginal_s, marginal_e).forward;
}

} // namespace midcurve::copula_pricer
