"""Bessel functions ``J_nu(u)`` of complex order and positive real argument.

All routines return a :class:`BesselValue` holding ``J`` as
``exp(log_scale) * mantissa``, so values of size ``exp(pi |Im nu| / 2)`` and
``u**-nu`` are carried without overflow.

Three independent evaluations are provided:

* :func:`bessel_j_series` -- the ascending series.  Runs in binary64 when
  the terms do not cancel, and otherwise repeats the sum in ``mpmath``
  arithmetic at a working precision chosen from the observed cancellation.
* :func:`bessel_j_quadrature` -- the Poisson integral, see
  :mod:`hlcesaro.special.poisson`.
* :func:`bessel_j_asymptotic` -- the Hankel expansion for large ``u``.  With
  ``terms=1`` this is the leading ``sqrt(2/(pi u)) cos(u - nu pi/2 - pi/4)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, InvalidArgument, MethodFailure
from .gamma import LogScaled, log_gamma
from .poisson import poisson_integral, poisson_integral_many

U_SMALL = 12.0
ASYMPTOTIC_TOL = 1e-10
# the explicit asymptotic method refuses u < ASYMPTOTIC_MIN_RATIO * |nu|^2
ASYMPTOTIC_MIN_RATIO = 0.5
SERIES_MAX_TERMS = 10_000
_EPS = np.finfo(float).eps
_LOG_2_OVER_SQRT_PI = math.log(2.0) - 0.5 * math.log(math.pi)


class BesselMethod(enum.Enum):
    AUTO = "auto"
    SERIES = "series"
    QUADRATURE = "quadrature"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class BesselValue:
    """``J_nu(u) = exp(log_scale) * mantissa``.

    ``error_estimate`` is the estimated absolute error of ``mantissa``; the
    relative error of the value is ``error_estimate / abs(mantissa)``.
    """

    log_scale: complex
    mantissa: complex
    method: BesselMethod
    error_estimate: float
    detail: str = ""

    @property
    def relative_error(self) -> float:
        m = abs(self.mantissa)
        return self.error_estimate / m if m > 0 else math.inf

    def log_scaled(self) -> LogScaled:
        return LogScaled.from_log(self.log_scale) * LogScaled.from_complex(self.mantissa)

    def to_complex(self) -> complex:
        return self.log_scaled().to_complex()


def _check(nu, u):
    nu = complex(nu)
    u = float(u)
    if not (math.isfinite(u) and u >= 0):
        raise InvalidArgument(f"u must be a finite non-negative real, got {u}")
    if not (math.isfinite(nu.real) and math.isfinite(nu.imag)):
        raise InvalidArgument(f"order must be finite, got {nu}")
    return nu, u


def _at_zero(nu, method):
    if nu == 0:
        return BesselValue(0j, 1 + 0j, method, 0.0, "u=0")
    if nu.real > 0:
        return BesselValue(0j, 0j, method, 0.0, "u=0")
    raise DomainError(f"J_nu(0) is not finite for nu={nu}")


# ------------------------------------------------------------------ series

def _series_binary64(nu, u):
    x = -0.25 * u * u
    term = 1 + 0j
    total = 1 + 0j
    comp = 0j
    biggest = 1.0
    quiet = 0
    for m in range(1, SERIES_MAX_TERMS):
        term *= x / (m * (nu + m))
        y = total + term
        # Neumaier compensation, applied to real and imaginary parts alike
        if abs(total) >= abs(term):
            comp += (total - y) + term
        else:
            comp += (term - y) + total
        total = y
        a = abs(term)
        biggest = max(biggest, a)
        quiet = quiet + 1 if a < 1e-17 * abs(total + comp) else 0
        if quiet >= 3:
            return total + comp, biggest, m
    raise MethodFailure(f"ascending series did not converge within {SERIES_MAX_TERMS} terms")


def _series_mp(nu, u, dps):
    import mpmath

    with mpmath.workdps(dps):
        x = -mpmath.mpf(u) ** 2 / 4
        v = mpmath.mpc(nu)
        term = mpmath.mpc(1)
        total = mpmath.mpc(1)
        tiny = mpmath.mpf(10) ** (-dps - 2)
        quiet = 0
        for m in range(1, 50 * SERIES_MAX_TERMS):
            term *= x / (m * (v + m))
            total += term
            quiet = quiet + 1 if abs(term) < tiny * abs(total) else 0
            if quiet >= 3:
                return complex(total)
    raise MethodFailure("extended-precision series did not converge")


def _series_log_prefactor(nu, u):
    return nu * math.log(0.5 * u) - log_gamma(nu + 1)


def bessel_j_series(nu, u, extended=True) -> BesselValue:
    """Ascending series ``(u/2)^nu / Gamma(nu+1) * sum (-u^2/4)^m / (m! (nu+1)_m)``.

    The sum stops after three consecutive terms below ``1e-17`` of the
    partial sum.  When cancellation between terms would cost more than three
    digits, the sum is redone with ``mpmath`` at a precision covering the
    observed cancellation (``extended=False`` raises :class:`MethodFailure`
    instead).
    """
    nu, u = _check(nu, u)
    if nu.imag == 0 and nu.real < 0 and nu.real == round(nu.real):
        raise DomainError("the series form needs nu + 1 away from the poles of Gamma")
    if u == 0:
        return _at_zero(nu, BesselMethod.SERIES)
    pref = _series_log_prefactor(nu, u)
    total, biggest, nterms = _series_binary64(nu, u)
    lost = biggest / max(abs(total), 1e-300)
    err = _EPS * biggest * math.sqrt(nterms)
    if lost <= 1e3:
        return BesselValue(pref, total, BesselMethod.SERIES, err, "binary64")
    if not extended:
        raise MethodFailure(f"series cancellation {lost:.1e} exceeds binary64 range")
    log10_big = math.log10(biggest)
    dps = int(25 + log10_big + max(0.0, -math.log10(max(abs(total), 1e-300))))
    for _ in range(4):
        value = _series_mp(nu, u, dps)
        lost = log10_big - math.log10(max(abs(value), 1e-300))
        if dps - lost >= 20:
            return BesselValue(pref, value, BesselMethod.SERIES, 1e-17 * abs(value),
                               f"mp{dps}")
        dps = int(dps + lost + 10)
    raise MethodFailure("series precision escalation did not settle")


# -------------------------------------------------------------- quadrature

def _poisson_log_prefactor(nu, u):
    return _LOG_2_OVER_SQRT_PI + nu * math.log(0.5 * u) - log_gamma(nu + 0.5)


def bessel_j_quadrature(nu, u, strategy="auto") -> BesselValue:
    """Poisson integral representation, valid for ``Re nu > -1/2``."""
    nu, u = _check(nu, u)
    if not nu.real > -0.5:
        raise DomainError(f"the integral representation needs Re nu > -1/2, got {nu}")
    if u == 0:
        return _at_zero(nu, BesselMethod.QUADRATURE)
    ls, mant, err, used = poisson_integral(nu, u, strategy)
    return BesselValue(_poisson_log_prefactor(nu, u) + ls, mant,
                       BesselMethod.QUADRATURE, err, used)


# -------------------------------------------------------------- asymptotic

def _hankel_pq(nu, u, extra, tol):
    """Sums P, Q of the Hankel expansion.

    ``extra`` is the number of terms after the leading one, or ``None`` to
    continue while terms decrease and exceed ``tol`` of the running sum.
    Returns ``(P, Q, omitted, biggest)`` where ``omitted`` is the size of the
    first term not included.
    """
    nu, u = np.broadcast_arrays(np.asarray(nu, complex), np.asarray(u, float))
    mu = 4.0 * nu * nu
    p = np.ones(nu.shape, complex)
    q = np.zeros(nu.shape, complex)
    term = np.ones(nu.shape, complex)
    biggest = np.ones(nu.shape)
    omitted = np.zeros(nu.shape)
    active = np.ones(nu.shape, bool)
    adaptive = extra is None
    limit = 80 if adaptive else extra
    for j in range(1, limit + 2):
        nxt = term * (mu - (2 * j - 1) ** 2) / (8.0 * j * u)
        a = np.abs(nxt)
        if j == limit + 1:
            omitted = np.where(active, a, omitted)
            break
        if adaptive:
            diverging = active & (a >= np.abs(term))
            omitted = np.where(diverging, a, omitted)
            active &= ~diverging
        sign = (-1) ** ((j - 1) // 2) if j % 2 else (-1) ** (j // 2)
        if j % 2:
            q = np.where(active, q + sign * nxt, q)
        else:
            p = np.where(active, p + sign * nxt, p)
        term = np.where(active, nxt, term)
        biggest = np.where(active, np.maximum(biggest, a), biggest)
        if adaptive:
            done = active & (a <= tol * (np.abs(p) + np.abs(q)))
            omitted = np.where(done, a, omitted)
            active &= ~done
            if not active.any():
                break
    return p, q, omitted, biggest


def _hankel_combine(nu, u, p, q):
    """``log_scale`` and mantissa of ``sqrt(2/(pi u)) (P cos chi - Q sin chi)``."""
    chi = u - (0.5 * nu + 0.25) * np.pi
    upper = np.imag(nu) >= 0
    sgn = np.where(upper, 1.0, -1.0)
    # factor out the exponential that dominates for Im nu != 0
    e = np.exp(-2j * sgn * chi)
    mant = p * (1 + e) + sgn * 1j * q * (1 - e)
    log_scale = 0.5 * np.log(2.0 / (np.pi * u)) - np.log(2.0) + 1j * sgn * chi
    return log_scale, mant


def bessel_j_asymptotic(nu, u, terms=None) -> BesselValue:
    """Hankel expansion of ``J_nu(u)`` for ``u`` large compared with ``|nu|^2``.

    Parameters
    ----------
    terms : int or None
        Number of terms kept in ``P`` and ``Q`` together.  ``1`` gives the
        leading term alone.  ``None`` sums until the terms stop decreasing or
        fall below ``1e-17`` of the sum.

    The error estimate is the first omitted term plus rounding on the
    largest term, both relative to the envelope ``|P| + |Q|``.
    """
    nu, u = _check(nu, u)
    if u < max(1.0, ASYMPTOTIC_MIN_RATIO * abs(nu) ** 2):
        raise DomainError(f"the asymptotic form needs u >= max(1, |nu|^2 / 2); got nu={nu}, u={u}")
    if terms is not None and terms < 1:
        raise InvalidArgument("terms must be at least 1")
    p, q, omitted, biggest = _hankel_pq(nu, u, None if terms is None else terms - 1, 1e-17)
    p, q, omitted, biggest = complex(p), complex(q), float(omitted), float(biggest)
    log_scale, mant = _hankel_combine(nu, u, p, q)
    # |1 + e|, |1 - e| <= 2; the phase u - nu pi/2 carries rounding of size eps u
    err = 2.0 * (omitted + 8 * _EPS * biggest) + 4 * _EPS * (u + abs(nu)) * abs(mant)
    return BesselValue(complex(log_scale), complex(mant), BesselMethod.ASYMPTOTIC, err,
                       f"hankel{'' if terms is None else terms}")


def _asymptotic_envelope_error(nu, u):
    p, q, omitted, biggest = _hankel_pq(nu, u, None, 1e-17)
    return (omitted + 8 * _EPS * biggest) / (np.abs(p) + np.abs(q))


# -------------------------------------------------------------- dispatcher

def _series_log_peak(nu, u):
    """log of the largest ascending-series term, relative to the first."""
    x = 0.25 * u * u
    m_hi = int(min(SERIES_MAX_TERMS, 2 + u))
    m = np.arange(1, m_hi + 1)
    log_ratio = math.log(x) - np.log(m) - np.log(np.abs(nu + m))
    return max(0.0, float(np.max(np.cumsum(log_ratio))))


def bessel_j(nu, u, method=BesselMethod.AUTO) -> BesselValue:
    """Evaluate ``J_nu(u)`` with a named method or the automatic choice.

    ``AUTO`` tries, in order: the series for ``u <= U_SMALL * max(1, |nu|)``
    when its terms do not cancel; the Hankel expansion when its estimated
    error is below ``ASYMPTOTIC_TOL``; otherwise the Poisson integral.
    """
    method = BesselMethod(method)
    nu, u = _check(nu, u)
    if method is BesselMethod.SERIES:
        return bessel_j_series(nu, u)
    if method is BesselMethod.QUADRATURE:
        return bessel_j_quadrature(nu, u)
    if method is BesselMethod.ASYMPTOTIC:
        return bessel_j_asymptotic(nu, u)
    if u == 0:
        return _at_zero(nu, BesselMethod.SERIES)
    if u <= U_SMALL * max(1.0, abs(nu)) and _series_log_peak(nu, u) < 7.0:
        try:
            return bessel_j_series(nu, u, extended=False)
        except (MethodFailure, DomainError):
            pass
    if float(_asymptotic_envelope_error(nu, u)) < ASYMPTOTIC_TOL:
        try:
            return bessel_j_asymptotic(nu, u)
        except DomainError:
            pass
    if nu.real > -0.5:
        return bessel_j_quadrature(nu, u)
    return bessel_j_series(nu, u)


def bessel_j_many(nu, u):
    """Vectorised Auto evaluation over broadcast ``nu`` and ``u`` (``u > 0``).

    Uses the Hankel expansion where its envelope error is below
    ``ASYMPTOTIC_TOL`` and the Poisson integral elsewhere, which requires
    ``Re nu > -1/2``.  Returns ``(log_scale, mantissa, abs_err, used_asymptotic)``.
    """
    nu, u = np.broadcast_arrays(np.asarray(nu, complex), np.asarray(u, float))
    if np.any(u <= 0) or np.any(nu.real <= -0.5):
        raise DomainError("bessel_j_many needs u > 0 and Re nu > -1/2")
    p, q, omitted, biggest = _hankel_pq(nu, u, None, 1e-17)
    env = np.abs(p) + np.abs(q)
    asym = (omitted + 8 * _EPS * biggest) / env < ASYMPTOTIC_TOL
    log_scale = np.empty(nu.shape, complex)
    mant = np.empty(nu.shape, complex)
    err = np.empty(nu.shape)
    if asym.any():
        ls, m = _hankel_combine(nu[asym], u[asym], p[asym], q[asym])
        log_scale[asym], mant[asym] = ls, m
        err[asym] = 2.0 * (omitted[asym] + 8 * _EPS * biggest[asym]) \
            + 4 * _EPS * (u[asym] + np.abs(nu[asym])) * np.abs(m)
    rest = ~asym
    if rest.any():
        ls, m, e = poisson_integral_many(nu[rest], u[rest])
        pref = _LOG_2_OVER_SQRT_PI + nu[rest] * np.log(0.5 * u[rest]) - log_gamma(nu[rest] + 0.5)
        log_scale[rest] = pref + ls
        mant[rest], err[rest] = m, e
    return log_scale, mant, err, asym
