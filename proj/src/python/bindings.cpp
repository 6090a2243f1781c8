#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "midcurve/cli_config.hpp"
#include "midcurve/copula_pricer.hpp"
#include "midcurve/curve_engine.hpp"
#include "midcurve/errors.hpp"
#include "midcurve/implied_metrics.hpp"
#include "midcurve/models.hpp"
#include "midcurve/tsr_calibration.hpp"

namespace py = pybind11;
using namespace midcurve;

PYBIND11_MODULE(_midcurve, m) {
    m.doc() = "Physically settled midcurve swaption pricing under "
              "terminal-swap-rate annuity models";

    py::register_exception<invalid_input>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<numerical_error>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<contract_violation>(m, "ContractViolation",
                                               PyExc_RuntimeError);

    // curve_engine
    py::class_<curve_engine::discount_curve>(m, "DiscountCurve")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("times"),
             py::arg("dfs"))
        .def_static("from_csv", &curve_engine::discount_curve::from_csv, py::arg("path"))
        .def("df", &curve_engine::discount_curve::df, py::arg("t"));

    py::class_<curve_engine::swap_schedule>(m, "SwapSchedule")
        .def_readonly("t_x", &curve_engine::swap_schedule::t_x)
        .def_readonly("t_s", &curve_engine::swap_schedule::t_s)
        .def_readonly("t_e", &curve_engine::swap_schedule::t_e)
        .def_readonly("pay_times", &curve_engine::swap_schedule::pay_times)
        .def_readonly("accruals", &curve_engine::swap_schedule::accruals);
    m.def("make_schedule", &curve_engine::make_schedule, py::arg("t_x"), py::arg("t_s"),
          py::arg("t_e"), py::arg("frequency"));
    m.def("annuity", &curve_engine::annuity, py::arg("curve"), py::arg("pay_times"),
          py::arg("accruals"));
    m.def("forward_swap_rate", &curve_engine::forward_swap_rate, py::arg("curve"),
          py::arg("schedule"));

    py::class_<curve_engine::annuity_triple>(m, "AnnuityTriple")
        .def_readonly("a_s0", &curve_engine::annuity_triple::a_s0)
        .def_readonly("a_u0", &curve_engine::annuity_triple::a_u0)
        .def_readonly("a_e0", &curve_engine::annuity_triple::a_e0);
    m.def("make_annuity_triple", &curve_engine::make_annuity_triple, py::arg("curve"),
          py::arg("t_x"), py::arg("t_s"), py::arg("t_e"), py::arg("frequency"));

    // models
    py::class_<models::market_inputs>(m, "MarketInputs")
        .def(py::init([](const curve_engine::annuity_triple& annuities, double r_s0,
                         double r_e0, double stdev_s, double stdev_e, double rho) {
                 return models::market_inputs{annuities, r_s0, r_e0, stdev_s, stdev_e,
                                              rho};
             }),
             py::arg("annuities"), py::arg("r_s0"), py::arg("r_e0"), py::arg("stdev_s"),
             py::arg("stdev_e"), py::arg("rho"))
        .def_readonly("annuities", &models::market_inputs::annuities)
        .def_readonly("r_s0", &models::market_inputs::r_s0)
        .def_readonly("r_e0", &models::market_inputs::r_e0)
        .def_readonly("stdev_s", &models::market_inputs::stdev_s)
        .def_readonly("stdev_e", &models::market_inputs::stdev_e)
        .def_readonly("rho", &models::market_inputs::rho);

    py::enum_<models::model_kind>(m, "ModelKind")
        .value("deterministic", models::model_kind::deterministic)
        .value("linear", models::model_kind::linear)
        .value("loglinear", models::model_kind::loglinear);

    py::class_<models::annuity_model>(m, "AnnuityModel")
        .def(py::init<models::model_kind, double, double>(), py::arg("kind"),
             py::arg("sigma_e") = 0.0, py::arg("sigma_s") = 0.0)
        .def_readonly("kind", &models::annuity_model::kind)
        .def_readonly("sigma_e", &models::annuity_model::sigma_e)
        .def_readonly("sigma_s", &models::annuity_model::sigma_s);

    py::class_<models::model_coefficients>(m, "ModelCoefficients")
        .def_readonly("mu_s", &models::model_coefficients::mu_s)
        .def_readonly("mu_e", &models::model_coefficients::mu_e)
        .def_readonly("nu_s", &models::model_coefficients::nu_s)
        .def_readonly("nu_e", &models::model_coefficients::nu_e)
        .def_readonly("hat_r_s", &models::model_coefficients::hat_r_s)
        .def_readonly("hat_r_e", &models::model_coefficients::hat_r_e)
        .def_readonly("tilde_r_s", &models::model_coefficients::tilde_r_s)
        .def_readonly("tilde_r_e", &models::model_coefficients::tilde_r_e)
        .def_readonly("alpha_s", &models::model_coefficients::alpha_s)
        .def_readonly("alpha_e", &models::model_coefficients::alpha_e);
    m.def("coefficients", &models::coefficients, py::arg("model"), py::arg("mkt"));
    m.def("weights", &models::weights, py::arg("model"), py::arg("coeffs"),
          py::arg("mkt"), py::arg("x"), py::arg("y"));

    py::enum_<models::measure_tag>(m, "MeasureTag")
        .value("short_annuity", models::measure_tag::short_annuity)
        .value("long_annuity", models::measure_tag::long_annuity)
        .value("underlying_annuity", models::measure_tag::underlying_annuity);
    py::enum_<models::leg>(m, "Leg")
        .value("short_leg", models::leg::short_leg)
        .value("long_leg", models::leg::long_leg);

    py::class_<models::grid_spec>(m, "GridSpec")
        .def(py::init([](int nodes, double span_stdevs) {
                 return models::grid_spec{nodes, span_stdevs};
             }),
             py::arg("nodes") = 801, py::arg("span_stdevs") = 8.0)
        .def_readwrite("nodes", &models::grid_spec::nodes)
        .def_readwrite("span_stdevs", &models::grid_spec::span_stdevs);

    py::class_<models::marginal>(m, "Marginal")
        .def(py::init<std::vector<double>, std::vector<double>, models::measure_tag>(),
             py::arg("grid"), py::arg("density"), py::arg("tag"))
        .def("quantile", &models::marginal::quantile, py::arg("p"))
        .def("cdf_at", &models::marginal::cdf_at, py::arg("x"))
        .def("mean", &models::marginal::mean)
        .def("raw_mass", &models::marginal::raw_mass)
        .def("tag", &models::marginal::tag)
        .def("grid", &models::marginal::grid)
        .def("density", &models::marginal::density)
        .def("cdf", &models::marginal::cdf);
    m.def("flat_normal_marginal", &models::flat_normal_marginal, py::arg("fwd"),
          py::arg("stdev"), py::arg("tag"), py::arg("spec") = models::grid_spec{});
    m.def("marginal_from_smile", &models::marginal_from_smile, py::arg("strikes"),
          py::arg("normal_vols"), py::arg("fwd"), py::arg("t_x"), py::arg("tag"));

    py::class_<models::tilt_result>(m, "TiltResult")
        .def_readonly("tilted", &models::tilt_result::tilted)
        .def_readonly("clipped_mass", &models::tilt_result::clipped_mass);
    m.def("tilt_marginal", &models::tilt_marginal, py::arg("model"), py::arg("coeffs"),
          py::arg("mkt"), py::arg("input"), py::arg("which"));

    // copula_pricer
    py::enum_<copula_pricer::option_side>(m, "OptionSide")
        .value("receiver", copula_pricer::option_side::receiver)
        .value("payer", copula_pricer::option_side::payer);

    py::class_<copula_pricer::midcurve_trade>(m, "MidcurveTrade")
        .def(py::init([](double t_x, double t_s, double t_e, double strike,
                         double notional, copula_pricer::option_side side) {
                 return copula_pricer::midcurve_trade{t_x, t_s, t_e,
                                                      strike, notional, side};
             }),
             py::arg("t_x"), py::arg("t_s"), py::arg("t_e"), py::arg("strike"),
             py::arg("notional") = 1.0,
             py::arg("side") = copula_pricer::option_side::receiver)
        .def_readwrite("t_x", &copula_pricer::midcurve_trade::t_x)
        .def_readwrite("t_s", &copula_pricer::midcurve_trade::t_s)
        .def_readwrite("t_e", &copula_pricer::midcurve_trade::t_e)
        .def_readwrite("strike", &copula_pricer::midcurve_trade::strike)
        .def_readwrite("notional", &copula_pricer::midcurve_trade::notional)
        .def_readwrite("side", &copula_pricer::midcurve_trade::side);

    py::class_<copula_pricer::copula_spec>(m, "CopulaSpec")
        .def(py::init([](double rho_copula, int order, long paths, std::uint64_t seed,
                         int workers) {
                 return copula_pricer::copula_spec{rho_copula, order, paths, seed,
                                                   workers};
             }),
             py::arg("rho_copula"), py::arg("order") = 64,
             py::arg("paths") = 1'000'000L, py::arg("seed") = 0,
             py::arg("workers") = 1)
        .def_readwrite("rho_copula", &copula_pricer::copula_spec::rho_copula)
        .def_readwrite("order", &copula_pricer::copula_spec::order)
        .def_readwrite("paths", &copula_pricer::copula_spec::paths)
        .def_readwrite("seed", &copula_pricer::copula_spec::seed)
        .def_readwrite("workers", &copula_pricer::copula_spec::workers);

    py::class_<copula_pricer::pricing_result>(m, "PricingResult")
        .def_readonly("price", &copula_pricer::pricing_result::price)
        .def_readonly("std_error", &copula_pricer::pricing_result::std_error)
        .def_readonly("diagnostics", &copula_pricer::pricing_result::diagnostics);

    m.def("price_quadrature", &copula_pricer::price_quadrature, py::arg("trade"),
          py::arg("mkt"), py::arg("model"), py::arg("copula"), py::arg("marginal_s"),
          py::arg("marginal_e"));
    m.def("price_mc", &copula_pricer::price_mc, py::arg("trade"), py::arg("mkt"),
          py::arg("model"), py::arg("copula"), py::arg("marginal_s"),
          py::arg("marginal_e"), py::call_guard<py::gil_scoped_release>());
    m.def("underlying_forward", &copula_pricer::underlying_forward, py::arg("mkt"),
          py::arg("model"), py::arg("copula"), py::arg("marginal_s"),
          py::arg("marginal_e"));
    m.def("joint_transform", &copula_pricer::joint_transform, py::arg("marginal_s"),
          py::arg("marginal_e"), py::arg("u"), py::arg("v"));

    // implied_metrics
    py::class_<implied_metrics::skew_point>(m, "SkewPoint")
        .def_readonly("strike", &implied_metrics::skew_point::strike)
        .def_readonly("price", &implied_metrics::skew_point::price)
        .def_readonly("implied_normal_vol",
                      &implied_metrics::skew_point::implied_normal_vol)
        .def_readonly("implied_correlation",
                      &implied_metrics::skew_point::implied_correlation)
        .def_readonly("boundary", &implied_metrics::skew_point::boundary);

    py::class_<implied_metrics::implied_corr_result>(m, "ImpliedCorrResult")
        .def_readonly("rho", &implied_metrics::implied_corr_result::rho)
        .def_readonly("boundary", &implied_metrics::implied_corr_result::boundary);

    m.def("bachelier_price", &implied_metrics::bachelier_price, py::arg("fwd"),
          py::arg("strike"), py::arg("stdev_t"), py::arg("annuity"), py::arg("notional"),
          py::arg("side"));
    m.def("implied_normal_vol", &implied_metrics::implied_normal_vol, py::arg("price"),
          py::arg("fwd"), py::arg("strike"), py::arg("annuity"), py::arg("notional"),
          py::arg("side"));
    m.def("implied_correlation", &implied_metrics::implied_correlation,
          py::arg("target_price"), py::arg("trade"), py::arg("mkt"), py::arg("order"),
          py::arg("grid") = models::grid_spec{});
    m.def("correlation_skew_curve", &implied_metrics::correlation_skew_curve,
          py::arg("trade_template"), py::arg("mkt"), py::arg("model"),
          py::arg("strikes"), py::arg("copula"), py::arg("grid") = models::grid_spec{});

    // tsr_calibration
    py::class_<tsr_calibration::covariance_estimates>(m, "CovarianceEstimates")
        .def_readonly("cov_e", &tsr_calibration::covariance_estimates::cov_e)
        .def_readonly("cov_s", &tsr_calibration::covariance_estimates::cov_s);
    py::class_<tsr_calibration::calibration_result>(m, "CalibrationResult")
        .def_readonly("sigma_e", &tsr_calibration::calibration_result::sigma_e)
        .def_readonly("sigma_s", &tsr_calibration::calibration_result::sigma_s)
        .def_readonly("covariances",
                      &tsr_calibration::calibration_result::covariances);
    m.def("estimate_sigmas", &tsr_calibration::estimate_sigmas, py::arg("curve"),
          py::arg("t_x"), py::arg("t_s"), py::arg("t_e"), py::arg("frequency"),
          py::arg("period_stdevs"), py::arg("corr_with_long"),
          py::arg("corr_with_short"), py::arg("stdev_s"), py::arg("stdev_e"),
          py::arg("rho"));
}
