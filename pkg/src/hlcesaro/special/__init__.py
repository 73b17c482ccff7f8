"""Gamma and Bessel functions of complex argument/order, in log-scaled form."""
from .gamma import LogScaled, gamma_ratio, log_gamma
from .bessel import (
    BesselMethod,
    BesselValue,
    bessel_j,
    bessel_j_asymptotic,
    bessel_j_quadrature,
    bessel_j_series,
)

__all__ = [
    "LogScaled",
    "log_gamma",
    "gamma_ratio",
    "BesselMethod",
    "BesselValue",
    "bessel_j",
    "bessel_j_series",
    "bessel_j_quadrature",
    "bessel_j_asymptotic",
]
