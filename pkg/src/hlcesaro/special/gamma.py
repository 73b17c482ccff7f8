"""Log-gamma for complex arguments and a log-magnitude/phase number type.

``log_gamma`` uses upward recurrence to ``Re s >= 15`` followed by the
Stirling series with ten Bernoulli corrections, which keeps the truncation
error below 1e-24 there.  The recurrence follows the principal logarithm of
each factor, so the result is the usual analytic continuation of
``log Gamma`` (the one scipy calls ``loggamma``) whenever ``Re s > 0``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..errors import OutOfRange, PoleError

_SHIFT_TO = 15.0
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
# B_{2j} / (2j (2j - 1)), j = 1..10
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)


def _log_gamma_array(s):
    s = np.asarray(s, dtype=complex)
    re = s.real
    bad = (s.imag == 0) & (re <= 0) & (re == np.round(re))
    if np.any(bad):
        raise PoleError(f"log_gamma has a pole at {s[bad].ravel()[0]}")
    shift = np.where(re < _SHIFT_TO, np.ceil(_SHIFT_TO - re), 0.0).astype(np.int64)
    acc = np.zeros_like(s)
    z = s.copy()
    nmax = int(shift.max()) if shift.size else 0
    for _ in range(nmax):
        active = shift > 0
        acc = np.where(active, acc + np.log(np.where(active, z, 1.0)), acc)
        z = np.where(active, z + 1.0, z)
        shift = shift - active
    inv = 1.0 / z
    inv2 = inv * inv
    series = np.zeros_like(z)
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    series = series * inv
    lz = np.log(z)
    return (z - 0.5) * lz - z + _HALF_LOG_2PI + series - acc


def log_gamma(s):
    """Logarithm of the gamma function.

    Parameters
    ----------
    s : complex or array_like
        Argument; must not be a non-positive integer.

    Returns
    -------
    complex or ndarray
        ``log Gamma(s)`` with ``exp(log_gamma(s)) == Gamma(s)``.  The imaginary
        part is the continuous continuation from the positive real axis, not
        reduced modulo ``2 pi``.
    """
    if np.ndim(s) == 0:
        return complex(_log_gamma_array(np.array([s]))[0])
    return _log_gamma_array(s)


def _wrap(phase):
    p = math.remainder(phase, 2.0 * math.pi)
    return math.pi if p == -math.pi else p


@dataclass(frozen=True)
class LogScaled:
    """A complex number stored as ``exp(log_magnitude) * exp(1j * phase)``.

    Products and quotients never overflow; only :meth:`to_complex` and
    :meth:`to_float` can, and they raise :class:`OutOfRange` instead of
    returning ``inf``.
    """

    log_magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "phase", _wrap(float(self.phase)))

    @classmethod
    def from_log(cls, w) -> "LogScaled":
        w = complex(w)
        return cls(w.real, w.imag)

    @classmethod
    def from_complex(cls, z) -> "LogScaled":
        z = complex(z)
        if z == 0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(z)), cmath.phase(z))

    @property
    def is_zero(self) -> bool:
        return self.log_magnitude == -math.inf

    def log(self) -> complex:
        return complex(self.log_magnitude, self.phase)

    def __mul__(self, other):
        if not isinstance(other, LogScaled):
            other = LogScaled.from_complex(other)
        return LogScaled(self.log_magnitude + other.log_magnitude, self.phase + other.phase)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, LogScaled):
            other = LogScaled.from_complex(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogScaled")
        return LogScaled(self.log_magnitude - other.log_magnitude, self.phase - other.phase)

    def __neg__(self):
        return LogScaled(self.log_magnitude, self.phase + math.pi)

    def __pow__(self, p):
        if not isinstance(p, (int, float)):
            raise TypeError("LogScaled powers are limited to real exponents")
        return LogScaled(self.log_magnitude * p, self.phase * p)

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        if self.log_magnitude > 709.78:
            raise OutOfRange(f"magnitude exp({self.log_magnitude:.6g}) overflows binary64")
        return cmath.rect(math.exp(self.log_magnitude), self.phase)

    def to_float(self) -> float:
        """Real part of the value; overflow raises :class:`OutOfRange`."""
        return self.to_complex().real

    def __abs__(self) -> float:
        if self.log_magnitude > 709.78:
            raise OutOfRange(f"magnitude exp({self.log_magnitude:.6g}) overflows binary64")
        return math.exp(self.log_magnitude)


def gamma_ratio(num, den) -> LogScaled:
    """``Gamma(num) / Gamma(den)`` as a :class:`LogScaled`; poles raise."""
    return LogScaled.from_log(log_gamma(num) - log_gamma(den))
