"""Physically settled midcurve swaption pricing under terminal-swap-rate
annuity models. Thin wrapper re-exporting the compiled core."""

from ._midcurve import (  # noqa: F401
    AnnuityModel,
    AnnuityTriple,
    CalibrationResult,
    ContractViolation,
    CopulaSpec,
    CovarianceEstimates,
    DiscountCurve,
    GridSpec,
    ImpliedCorrResult,
    InvalidInput,
    Leg,
    Marginal,
    MarketInputs,
    MeasureTag,
    MidcurveTrade,
    ModelCoefficients,
    ModelKind,
    NumericalError,
    OptionSide,
    PricingResult,
    SkewPoint,
    SwapSchedule,
    TiltResult,
    annuity,
    bachelier_price,
    coefficients,
    correlation_skew_curve,
    estimate_sigmas,
    flat_normal_marginal,
    forward_swap_rate,
    implied_correlation,
    implied_normal_vol,
    joint_transform,
    make_annuity_triple,
    make_schedule,
    marginal_from_smile,
    price_mc,
    price_quadrature,
    tilt_marginal,
    underlying_forward,
    weights,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "1.0.0"
