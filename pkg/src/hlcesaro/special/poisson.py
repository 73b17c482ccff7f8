"""The Poisson integral ``I(nu, u) = int_0^1 (1 - t^2)^(nu - 1/2) cos(u t) dt``.

For ``Re nu > -1/2`` it gives

    J_nu(u) = 2 (u/2)^nu / (sqrt(pi) Gamma(nu + 1/2)) * I(nu, u).

Along the real axis the integrand carries two oscillations: ``cos(u t)``,
and ``(1 - t^2)^(i Im nu)``, which winds infinitely often near ``t = 1``.
Both are expensive when ``u`` or ``|Im nu|`` is large, and when
``Im nu`` is small and ``u`` large the result is much smaller than the
integrand.  Three contours are used:

``real``
    The real segment, with a logarithmic substitution ``1 - t = d e^-v``
    that turns the endpoint winding into a plain damped oscillation.  Cost
    grows like ``u + |Im nu|``; it is the reference and the fallback.
``legs``
    Vertical legs from ``t = -1`` and ``t = +1`` to ``i infinity``, the
    classical Hankel deformation.  Well conditioned for real order; the
    right leg carries a factor ``exp(pi |Im nu| / 2)`` so it is restricted
    to ``|Im nu| <= LEGS_MAX_IMAG``.
``descent``
    The steepest-descent path through the interior saddle of
    ``(nu - 1/2) log(1 - t^2) + i u t``, traced by Newton continuation and
    integrated with the trapezoid rule in the path parameter.  Cost is
    independent of ``u`` and ``nu``.  Contributions not on the path are of
    order ``exp(-pi |Im nu| / 2)``, so it is used for
    ``|Im nu| >= DESCENT_MIN_IMAG`` and its result is rejected (and the real
    contour used instead) when any internal check fails.

Every routine returns ``(log_scale, mantissa, abs_err)`` with
``I = exp(log_scale) * mantissa`` and ``abs_err`` the estimated absolute error
of the mantissa.  Negative ``Im nu`` is mapped to positive by conjugation.
"""
from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError, MethodFailure
from .gamma import log_gamma

LEGS_MAX_IMAG = 4.0
DESCENT_MIN_IMAG = 25.0
# a strategy whose own error estimate exceeds this fraction of the value fails
RELIABLE_ERR = 1e-2

_EPS = np.finfo(float).eps
_GL = {n: np.polynomial.legendre.leggauss(n) for n in (12, 16)}


# ---------------------------------------------------------------- real axis

def _gl_panels(edges, n):
    x, w = _GL[n]
    a = edges[:-1, None]
    b = edges[1:, None]
    half = 0.5 * (b - a)
    return (a + half * (x + 1.0)).ravel(), (half * w).ravel()


def _invert_increasing(fn, targets, lo, hi, iters=64):
    lo = np.full_like(targets, lo)
    hi = np.full_like(targets, hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = fn(mid) < targets
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def _real_axis(nu, u):
    c = nu - 0.5
    alpha, gamma = c.real, c.imag
    delta = 0.25
    t_split = 1.0 - delta

    def phase(t):
        return u * t - gamma * np.log1p(-t * t)

    span = float(phase(np.array(t_split)))
    n_body = int(math.ceil(span / math.pi)) + 1
    targets = np.linspace(0.0, span, n_body + 1)
    edges = _invert_increasing(phase, targets[1:-1], 0.0, t_split)
    edges = np.concatenate(([0.0], edges, [t_split]))

    scale = max(1.0, 2.0 ** alpha)
    tol_abs = 1e-18 * scale
    bound = delta ** (alpha + 1.0) * scale
    v_max = max(1.0, math.log(bound / ((alpha + 1.0) * tol_abs)) / (alpha + 1.0))
    rate = gamma + u * delta
    n_end = int(math.ceil(v_max * max(rate / math.pi, 1.0))) + 1
    v_edges = np.linspace(0.0, v_max, n_end + 1)

    results = []
    mags = []
    for n in (16, 12):
        t, w = _gl_panels(edges, n)
        body = np.exp(c * np.log1p(-t * t)) * np.cos(u * t)
        v, wv = _gl_panels(v_edges, n)
        s = delta * np.exp(-v)
        end = np.exp(c * (np.log(s) + np.log(2.0 - s))) * np.cos(u * (1.0 - s)) * s
        results.append(complex(np.dot(w, body) + np.dot(wv, end)))
        mags.append(float(np.dot(w, np.abs(body)) + np.dot(wv, np.abs(end))))
    value = results[0]
    err = abs(results[0] - results[1]) + 64 * _EPS * mags[0] + tol_abs
    return 0j, value, err


# ------------------------------------------------------------ Hankel legs

def _legs(nu, u, h=0.1):
    c = nu - 0.5
    alpha = c.real
    if u <= 0:
        raise DomainError("the leg contour needs u > 0")
    w_lo = -42.0 / (alpha + 1.0)
    w_hi = math.log(48.0)

    def integrals(step):
        w = np.arange(w_lo, w_hi + step, step)
        x = np.exp(w)
        base = (c + 1.0) * w - x
        left = np.exp(base + c * np.log(2.0 - 1j * x / u))
        right = np.exp(base + c * np.log(2.0 + 1j * x / u))
        return step * left.sum(), step * right.sum(), step * (np.abs(left).sum() + np.abs(right).sum())

    a_l, a_r, mag = integrals(h)
    b_l, b_r, _ = integrals(2 * h)
    ph = 1j * c * math.pi / 2
    # I = (i/2) u^-(c+1) [e^{-iu + i pi c/2} A_L - e^{iu - i pi c/2} A_R]
    f_l = np.exp(-1j * u + ph)
    f_r = np.exp(1j * u - ph)
    mant = 0.5j * (f_l * a_l - f_r * a_r)
    coarse = 0.5j * (f_l * b_l - f_r * b_r)
    err = abs(mant - coarse) + 64 * _EPS * mag * max(abs(f_l), abs(f_r))
    return -(c + 1.0) * math.log(u), complex(mant), float(err)


# -------------------------------------------------------- steepest descent

def _phi(c, u, t):
    # Im(1 - t) = -Im(1 + t), so the principal log of the product equals the
    # sum of the two principal logs everywhere off the cuts
    return c * np.log((1.0 - t) * (1.0 + t)) + 1j * u * t


def _dphi(c, u, t):
    return -2.0 * c * t / (1.0 - t * t) + 1j * u


def _trace(c, u, t1, phi1, d0, qs, ok):
    """Newton continuation of ``phi(t(q)) = phi1 - q^2`` along ``qs`` (|q| increasing).

    Accumulates the trapezoid sums on the fly.  Returns the fine sum, the sum
    over every second node, the sum of magnitudes and the final point.
    """
    t = t1.copy()
    tp = d0.copy()
    q_prev = 0.0
    fine = np.zeros(t1.shape, complex)
    coarse = np.zeros(t1.shape, complex)
    mag = np.zeros(t1.shape)
    arg_minus = np.angle(1.0 - t)
    arg_plus = np.angle(1.0 + t)
    for j, q in enumerate(qs, start=1):
        pred = t + (q - q_prev) * tp
        t = pred
        for _ in range(4):
            t = t - (_phi(c, u, t) - phi1 + q * q) / _dphi(c, u, t)
        resid = np.abs(_phi(c, u, t) - phi1 + q * q)
        ok &= np.isfinite(resid) & (resid < 1e-9 * (1.0 + np.abs(phi1)))
        ok &= np.abs(t - pred) < 0.5 * abs(q - q_prev) * np.abs(tp) + 1e-12
        ok &= (np.abs(t) < 4.0) & (np.abs(1.0 - t) > 1e-12) & (np.abs(1.0 + t) > 1e-12)
        # the path must not wind across the cuts t >= 1 or t <= -1
        a_m = np.angle(1.0 - t)
        a_p = np.angle(1.0 + t)
        ok &= (np.abs(a_m - arg_minus) < 1.0) & (np.abs(a_p - arg_plus) < 1.0)
        arg_minus, arg_plus = a_m, a_p
        t = np.where(ok, t, t1)
        tp = np.where(ok, -2.0 * q / _dphi(c, u, t), d0)
        w = math.exp(-q * q)
        fine += w * tp
        if j % 2 == 0:
            coarse += w * tp
        mag += w * np.abs(tp)
        q_prev = q
    return fine, coarse, mag, t


def _descent(nu, u, h=0.4, q_max=6.0):
    """Vectorised steepest-descent evaluation; returns (log_scale, mant, err, ok)."""
    nu, u = np.broadcast_arrays(np.asarray(nu, complex), np.asarray(u, float))
    c = nu - 0.5
    root = np.sqrt(c * c - u * u)
    ta = 1j * (c - root) / u
    tb = 1j * (c + root) / u
    t1 = np.where(np.abs(ta) < np.abs(tb), ta, tb)
    ok = (np.abs(t1) < 1.0) & (np.abs(t1.real) < 1.0 - 1e-9) & (c.imag > 0)
    t1 = np.where(ok, t1, 0.5)
    phi1 = _phi(c, u, t1)
    d2 = -c * (1.0 / (1.0 - t1) ** 2 + 1.0 / (1.0 + t1) ** 2)
    d0 = np.sqrt(-2.0 / d2)
    d0 = np.where(d0.real - d0.imag < 0, -d0, d0)

    n = int(math.ceil(q_max / h))
    qs = h * np.arange(1, n + 1)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        f1, c1, m1, end_fwd = _trace(c, u, t1, phi1, d0, qs, ok)
        f2, c2, m2, end_bwd = _trace(c, u, t1, phi1, d0, -qs, ok)
    ok &= end_fwd.imag <= t1.imag + 1e-12
    ok &= end_bwd.imag >= t1.imag - 1e-12

    full = h * (d0 + f1 + f2)
    coarse = 2 * h * (d0 + c1 + c2)
    terms_mag = m1 + m2
    # the trapezoid rule converges exponentially here, so err(h) ~ err(2h)^2;
    # rounding in the phase grows with |phi1|
    mag = np.abs(full)
    rel = np.abs(full - coarse) / np.where(mag > 0, mag, 1.0)
    err = mag * (rel * rel + 8 * _EPS * (1.0 + np.abs(phi1))) \
        + 64 * _EPS * (np.abs(d0) + terms_mag) * h

    # rough size of what the left endpoint contributes off the path
    alpha = c.real
    left = np.exp(-c.imag * math.pi / 2) * 2.0 ** np.maximum(alpha, 0) \
        * np.exp(log_gamma(alpha + 1.0).real) / np.maximum(u, 1e-300) ** (alpha + 1.0)
    left = np.minimum(left, np.exp(-c.imag * math.pi / 2) * 4.0 ** np.maximum(alpha, 0))
    size = np.abs(np.exp(phi1.real)) * np.abs(full) * 0.5
    ok &= left < 1e-14 * size
    ok &= rel * rel < 1e-12

    log_scale = phi1 + math.log(0.5)
    err_total = err + left * np.exp(-phi1.real) * 2.0
    return log_scale, full, err_total, ok


# ----------------------------------------------------------------- public

def _reliable(log_scale, mant, err, used):
    # mantissas are normalised to O(1), so the floor of 1 keeps zeros of J valid
    if not (math.isfinite(err) and err <= RELIABLE_ERR * max(abs(mant), 1.0)):
        raise MethodFailure(f"{used} quadrature error estimate {err:.3g} too large for |value| {abs(mant):.3g}")
    return log_scale, mant, err, used


def poisson_integral(nu, u, strategy="auto"):
    """Evaluate ``I(nu, u)``; see the module docstring for the strategies.

    Returns ``(log_scale, mantissa, abs_err, strategy_used)``.
    """
    nu = complex(nu)
    u = float(u)
    if not nu.real > -0.5:
        raise DomainError(f"Poisson integral needs Re nu > -1/2, got {nu}")
    if u < 0 or not math.isfinite(u):
        raise DomainError(f"u must be finite and non-negative, got {u}")
    if nu.imag < 0:
        ls, m, e, s = poisson_integral(nu.conjugate(), u, strategy)
        return ls.conjugate(), m.conjugate(), e, s
    gamma = nu.imag
    if strategy == "auto":
        if u > 0 and gamma <= LEGS_MAX_IMAG:
            strategy = "legs"
        elif u > 0 and gamma >= DESCENT_MIN_IMAG:
            ls, m, e, ok = _descent(np.array([nu]), np.array([u]))
            if ok[0]:
                return complex(ls[0]), complex(m[0]), float(e[0]), "descent"
            strategy = "real"
        else:
            strategy = "real"
    if strategy == "legs":
        # beyond this the legs cancel to e^{-pi gamma} and the estimate cannot see it
        if gamma > LEGS_MAX_IMAG:
            raise MethodFailure(f"legs contour needs |Im nu| <= {LEGS_MAX_IMAG:g}, got {gamma:g}")
        return _reliable(*_legs(nu, u), "legs")
    if strategy == "descent":
        ls, m, e, ok = _descent(np.array([nu]), np.array([u]))
        if not ok[0]:
            raise MethodFailure(f"steepest-descent contour rejected for nu={nu}, u={u}")
        return complex(ls[0]), complex(m[0]), float(e[0]), "descent"
    if strategy == "real":
        return _reliable(*_real_axis(nu, u), "real")
    raise ValueError(f"unknown strategy {strategy!r}")


def poisson_integral_many(nu, u):
    """Vectorised :func:`poisson_integral` over broadcast ``nu`` and ``u``.

    Elements with ``|Im nu| >= DESCENT_MIN_IMAG`` go through the descent
    contour in one batch; everything else, and every rejected element, is
    evaluated one at a time.
    """
    nu, u = np.broadcast_arrays(np.asarray(nu, complex), np.asarray(u, float))
    shape = nu.shape
    nu = nu.ravel()
    u = u.ravel()
    flip = nu.imag < 0
    nu_pos = np.where(flip, nu.conj(), nu)
    log_scale = np.zeros(nu.shape, complex)
    mant = np.zeros(nu.shape, complex)
    err = np.zeros(nu.shape)
    done = np.zeros(nu.shape, bool)
    batch = (nu_pos.imag >= DESCENT_MIN_IMAG) & (u > 0)
    if batch.any():
        idx = np.flatnonzero(batch)
        ls, m, e, ok = _descent(nu_pos[idx], u[idx])
        good = idx[ok]
        log_scale[good], mant[good], err[good] = ls[ok], m[ok], e[ok]
        done[good] = True
    for i in np.flatnonzero(~done):
        ls, m, e, _ = poisson_integral(nu_pos[i], u[i])
        log_scale[i], mant[i], err[i] = ls, m, e
    log_scale = np.where(flip, log_scale.conj(), log_scale)
    mant = np.where(flip, mant.conj(), mant)
    return log_scale.reshape(shape), mant.reshape(shape), err.reshape(shape)
