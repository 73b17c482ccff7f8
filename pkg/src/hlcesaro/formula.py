"""Right-hand side of the explicit formula for Cesaro-weighted sums of ``r(n)``.

For ``k > 1`` and the divided normalisation,

    sum_{n<=N} r(n) (1 - n/N)^k / Gamma(k+1) = T1 + ... + T6 + O(1)

with

* ``T1 = (sqrt(pi)/2) N^(3/2) / Gamma(k + 5/2)``
* ``T2 = -N / (2 Gamma(k + 2))``
* ``T3 = -(sqrt(pi)/2) sum_rho Gamma(rho) / Gamma(k + 3/2 + rho) N^(1/2 + rho)``
* ``T4 = (1/2) sum_rho Gamma(rho) / Gamma(k + 1 + rho) N^rho``
* ``T5 = N^(3/4 - k/2) / pi^(k+1) sum_l J_(k+3/2)(2 pi l sqrt N) / l^(k+3/2)``
* ``T6 = -N^(1/4 - k/2) / pi^k sum_rho Gamma(rho) N^(rho/2) pi^-rho
  sum_l J_(k+1/2+rho)(2 pi l sqrt N) / l^(k+1/2+rho)``

The scaled normalisation multiplies every term by ``N^k``.  Sums over
``rho`` run over zeros ``1/2 + i gamma`` and their conjugates; each pair is
summed explicitly and the leftover imaginary part is reported as a
diagnostic.

Tail estimates are heuristic sizes built from Stirling's formula, the zero
density ``log(T / 2 pi) / 2 pi`` and measured envelope constants.  They are
meant to show how much a truncation could matter, not to bound it.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigError, DomainError, InvalidArgument
from .sieve import CesaroQuery, MangoldtTable, Normalization, cesaro_lhs, sieve_von_mangoldt
from .special.bessel import bessel_j_many
from .special.gamma import log_gamma
from .zeros import ZeroList

SCHEMA_VERSION = 1
DEFAULT_DOUBLE_SUM_ZEROS = 2000
IMAG_TOL = 1e-8
# measured: per-pair size of the double-sum terms for u > gamma is below
# ENVELOPE_T6 * 2^(k+5/2) sqrt(pi) N u^-(k+3/2); see tests/test_formula.py
ENVELOPE_T6 = 1.5
_CHUNK = 40_000
_LOG_SQRT_PI_2 = 0.5 * math.log(math.pi) - math.log(2.0)


@dataclass(frozen=True)
class TruncationConfig:
    """Truncation of the infinite sums.

    Attributes
    ----------
    zero_count : int
        Zeros used in the two single sums over ``rho``.
    ell_max : int or None
        Number of ``l`` terms in both Bessel sums; ``None`` picks it from the
        term envelope and ``term_floor``.
    double_zero_count : int or None
        Zeros used in the double sum; ``None`` means ``min(zero_count, 2000)``.
    term_floor : float
        Automatic ``ell_max`` stops once the envelope of a term drops below
        ``term_floor * |T1|``.
    ell_cap : int
        Upper limit for the automatic ``ell_max``.
    exploratory : bool
        Allow ``k <= 1``, outside the range where the formula holds.
    """

    zero_count: int = 10_000
    ell_max: int | None = None
    double_zero_count: int | None = None
    term_floor: float = 1e-16
    ell_cap: int = 20_000
    exploratory: bool = False

    def __post_init__(self):
        for name in ("zero_count", "ell_cap"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0:
                raise ConfigError(f"{name} must be a non-negative integer, got {v!r}")
        for name in ("ell_max", "double_zero_count"):
            v = getattr(self, name)
            if v is not None and (isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0):
                raise ConfigError(f"{name} must be a non-negative integer or None, got {v!r}")
        if not (isinstance(self.term_floor, (int, float)) and 0 < self.term_floor < 1):
            raise ConfigError(f"term_floor must lie in (0, 1), got {self.term_floor!r}")

    def double_zeros(self, available: int) -> int:
        z2 = self.double_zero_count
        if z2 is None:
            z2 = min(self.zero_count, DEFAULT_DOUBLE_SUM_ZEROS)
        return min(z2, self.zero_count, available)


@dataclass
class TermValue:
    value: float
    imag_residue: float = 0.0
    tail_estimate: float = 0.0
    zeros_used: int = 0
    ell_max: int = 0
    detail: dict = field(default_factory=dict)

    @property
    def imag_ok(self) -> bool:
        return self.imag_residue <= IMAG_TOL * max(1.0, abs(self.value))


TERM_NAMES = ("t1", "t2", "t3", "t4", "t5", "t6")


@dataclass
class TermBreakdown:
    query: CesaroQuery
    t1: TermValue
    t2: TermValue
    t3: TermValue
    t4: TermValue
    t5: TermValue
    t6: TermValue

    def terms(self) -> dict:
        return {name: getattr(self, name) for name in TERM_NAMES}

    @property
    def total(self) -> float:
        return math.fsum(t.value for t in self.terms().values())

    @property
    def imag_ok(self) -> bool:
        return all(t.imag_ok for t in self.terms().values())


@dataclass
class VerificationReport:
    query: CesaroQuery
    lhs: float
    terms: TermBreakdown
    config: TruncationConfig
    zeros: dict
    lhs_digits: int | None = None
    diagnostics: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.terms.total

    @property
    def residual(self) -> float:
        return float(self.lhs) - self.total

    @property
    def relative_residual(self) -> float:
        return abs(self.residual) / abs(self.terms.t1.value)

    @property
    def ok(self) -> bool:
        return self.terms.imag_ok and math.isfinite(self.residual)

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "query": {
                "N": self.query.n,
                "k": self.query.k,
                "normalization": self.query.normalization.value,
            },
            "lhs": float(self.lhs),
            "lhs_digits": self.lhs_digits,
            "terms": {name: t.value for name, t in self.terms.terms().items()},
            "total": self.total,
            "residual": self.residual,
            "relative_residual": self.relative_residual,
            "imag_residues": {name: t.imag_residue for name, t in self.terms.terms().items()},
            "tail_estimates": {name: (t.tail_estimate if math.isfinite(t.tail_estimate) else None)
                               for name, t in self.terms.terms().items()},
            "truncation": {
                "zero_count": self.terms.t3.zeros_used,
                "double_zero_count": self.terms.t6.zeros_used,
                "ell_max_t5": self.terms.t5.ell_max,
                "ell_max_t6": self.terms.t6.ell_max,
                "config": asdict(self.config),
            },
            "zeros": self.zeros,
            "diagnostics": self.diagnostics,
            "ok": self.ok,
        }
        if timings:
            out["timings"] = self.timings
        return out


def _check_query(query, config):
    if not isinstance(query, CesaroQuery):
        query = CesaroQuery(*query)
    if query.k <= 1 and not config.exploratory:
        raise DomainError(f"the formula needs k > 1 (got k={query.k}); set exploratory to override")
    return query


def _log_norm(query):
    return query.k * math.log(query.n) if query.normalization is Normalization.SCALED else 0.0


def main_terms(query: CesaroQuery) -> tuple[TermValue, TermValue]:
    """The two closed-form terms ``T1`` and ``T2``."""
    if not isinstance(query, CesaroQuery):
        query = CesaroQuery(*query)
    k, log_n = query.k, math.log(query.n)
    if k <= 0.5:
        raise DomainError(f"main terms need k > 1/2, got k={k}")
    norm = _log_norm(query)
    t1 = math.exp(_LOG_SQRT_PI_2 + 1.5 * log_n - math.lgamma(k + 2.5) + norm)
    t2 = -math.exp(log_n - math.log(2.0) - math.lgamma(k + 2.0) + norm)
    return TermValue(t1), TermValue(t2)


def zero_density_tail(t: float, s: float) -> float:
    """``int_t^inf x^-s log(x / 2 pi) / (2 pi) dx`` for ``s > 1``."""
    t = max(t, 2 * math.pi * math.e)
    return t ** (1 - s) * (math.log(t / (2 * math.pi)) / (s - 1) + 1 / (s - 1) ** 2) / (2 * math.pi)


def _pair_sum(terms, terms_conj):
    """Sum conjugate pairs as ``2 Re`` and, separately, term by term.

    Returns ``(value, explicit_value, imag_residue, pair_magnitudes)``.  The
    explicit sum keeps the ``rho`` and ``conj(rho)`` terms apart, so its
    imaginary part measures how well the pairing cancels.
    """
    terms = np.ravel(terms)
    terms_conj = np.ravel(terms_conj)
    paired = 2.0 * terms.real
    both = np.empty(2 * terms.size, complex)
    both[0::2] = terms
    both[1::2] = terms_conj
    value = math.fsum(paired.tolist())
    explicit = math.fsum(both.real.tolist())
    imag = abs(math.fsum(both.imag.tolist()))
    return value, explicit, imag, np.abs(terms + terms_conj)


def _zero_sum(query, zeros, count, shift, power_extra, log_coef, sign):
    """``sign * coef * sum_rho Gamma(rho)/Gamma(shift + rho) N^(power_extra + rho)``."""
    z = zeros.head(count)
    rho = z.rhos()
    log_n = math.log(query.n)
    norm = _log_norm(query)

    def logs(r):
        return log_coef + log_gamma(r) - log_gamma(shift + r) + (power_extra + r) * log_n + norm

    if z.count == 0:
        return TermValue(0.0, 0.0, math.inf, 0, 0, {"explicit_value": 0.0, "largest_pair": 0.0})
    value, explicit, imag, pair_mag = _pair_sum(sign * np.exp(logs(rho)),
                                                sign * np.exp(logs(np.conj(rho))))
    # |Gamma(rho)/Gamma(shift+rho)| ~ gamma^-shift, |N^(power_extra + rho)| = N^(power_extra + beta)
    amp = 2.0 * math.exp(log_coef + (power_extra + zeros.beta) * log_n + norm)
    tail = amp * zero_density_tail(float(z.gammas[-1]), shift)
    return TermValue(value, imag, tail, z.count, 0,
                     {"explicit_value": explicit, "largest_pair": float(pair_mag.max())})


def zero_sum_primary(query: CesaroQuery, zeros: ZeroList, count: int | None = None) -> TermValue:
    """``T3``: ``-(sqrt(pi)/2) sum_rho Gamma(rho)/Gamma(k+3/2+rho) N^(1/2+rho)``."""
    if not isinstance(query, CesaroQuery):
        query = CesaroQuery(*query)
    if query.k <= -0.5:
        raise DomainError(f"the primary zero sum needs k > -1/2, got k={query.k}")
    count = zeros.count if count is None else count
    return _zero_sum(query, zeros, count, query.k + 1.5, 0.5, _LOG_SQRT_PI_2, -1.0)


def zero_sum_secondary(query: CesaroQuery, zeros: ZeroList, count: int | None = None) -> TermValue:
    """``T4``: ``(1/2) sum_rho Gamma(rho)/Gamma(k+1+rho) N^rho``."""
    if not isinstance(query, CesaroQuery):
        query = CesaroQuery(*query)
    if query.k <= 0:
        raise DomainError(f"the secondary zero sum needs k > 0, got k={query.k}")
    count = zeros.count if count is None else count
    return _zero_sum(query, zeros, count, query.k + 1.0, 0.0, -math.log(2.0), 1.0)


def _envelope_t5(query, ell):
    nu = query.k + 1.5
    u = 2 * math.pi * ell * math.sqrt(query.n)
    log_a = (0.75 - query.k / 2) * math.log(query.n) - (query.k + 1) * math.log(math.pi) + _log_norm(query)
    return np.exp(log_a) * np.sqrt(2 / (math.pi * u)) * (1 + abs(4 * nu * nu - 1) / (8 * u)) * ell ** -nu


def _envelope_t6(query, ell):
    k = query.k
    u = 2 * math.pi * ell * math.sqrt(query.n)
    coef = ENVELOPE_T6 * 2 ** (k + 2.5) * math.sqrt(math.pi)
    return coef * math.exp(math.log(query.n) + _log_norm(query)) * u ** -(k + 1.5)


def _auto_ell(envelope, floor, start, cap):
    """Smallest ``L >= start`` with ``envelope(L) < floor`` (envelope is decreasing)."""
    lo = max(1, start)
    if envelope(lo) < floor:
        return lo, False
    hi = lo
    while envelope(hi) >= floor:
        if hi >= cap:
            return cap, True
        hi = min(2 * hi, cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if envelope(mid) < floor:
            hi = mid
        else:
            lo = mid
    return hi, False


def _floor(query, config):
    t1, _ = main_terms(query)
    return config.term_floor * abs(t1.value)


def bessel_ell_sum(query: CesaroQuery, ell_max: int | None = None,
                   config: TruncationConfig | None = None) -> TermValue:
    """``T5``: the Bessel sum of real order ``k + 3/2``."""
    if not isinstance(query, CesaroQuery):
        query = CesaroQuery(*query)
    config = config or TruncationConfig()
    capped = False
    if ell_max is None:
        ell_max, capped = _auto_ell(lambda l: float(_envelope_t5(query, l)),
                                    _floor(query, config), 1, config.ell_cap)
    if ell_max == 0:
        return TermValue(0.0, 0.0, float(_envelope_t5(query, 1)) / query.k, 0, 0)
    k = query.k
    nu = k + 1.5
    ell = np.arange(1, ell_max + 1, dtype=float)
    u = 2 * math.pi * ell * math.sqrt(query.n)
    ls, mant, err, asym = bessel_j_many(nu, u)
    log_a = (0.75 - k / 2) * math.log(query.n) - (k + 1) * math.log(math.pi) + _log_norm(query)
    logs = log_a + ls - nu * np.log(ell)
    vals = np.exp(logs) * mant
    value = math.fsum(vals.real.tolist())
    imag = abs(math.fsum(vals.imag.tolist()))
    # sum_{l > L} l^-(nu + 1/2) <= L^(1/2 - nu) / (nu - 1/2)
    tail = float(_envelope_t5(query, ell_max)) * ell_max / (nu - 0.5)
    detail = {
        "bessel_error": float(np.sum(np.abs(np.exp(logs)) * err)),
        "asymptotic_share": float(asym.mean()),
        "ell_capped": capped,
    }
    return TermValue(value, imag, tail, 0, int(ell_max), detail)


def bessel_double_sum(query: CesaroQuery, zeros: ZeroList,
                      config: TruncationConfig | None = None) -> TermValue:
    """``T6``: the double sum over zeros and ``l`` of complex-order Bessel functions.

    Each ``Gamma(rho) J_nu(u) / l^nu`` factor is combined in log form before
    exponentiating, since ``Gamma(rho)`` and ``J_nu`` separately under- and
    overflow for large ``gamma``.  ``J`` of the conjugate order is the
    conjugate of ``J_nu`` (``u`` is real); the other factors of the conjugate
    term are evaluated independently.
    """
    if not isinstance(query, CesaroQuery):
        query = CesaroQuery(*query)
    config = config or TruncationConfig()
    if query.k <= 1 and not config.exploratory:
        raise DomainError(f"the double Bessel sum needs k > 1, got k={query.k}")
    z2 = config.double_zeros(zeros.count)
    z = zeros.head(z2)
    k = query.k
    log_n = math.log(query.n)
    sqrt_n = math.sqrt(query.n)
    norm = _log_norm(query)
    capped = False
    ell_max = config.ell_max
    if ell_max is None:
        top = float(z.gammas[-1]) if z.count else 0.0
        start = int(math.ceil(top / (2 * math.pi * sqrt_n))) + 1
        ell_max, capped = _auto_ell(lambda l: _envelope_t6(query, l),
                                    _floor(query, config), start, config.ell_cap)
    detail = {"ell_capped": capped}
    if z.count == 0 or ell_max == 0:
        detail["explicit_value"] = 0.0
        return TermValue(0.0, 0.0, math.inf, z.count, int(ell_max), detail)

    rho = z.rhos()
    nu = k + 0.5 + rho
    ell = np.arange(1, ell_max + 1, dtype=float)
    log_ell = np.log(ell)
    u = 2 * math.pi * ell * sqrt_n
    base = (0.25 - k / 2) * log_n - k * math.log(math.pi) + norm

    def prefactor(r):
        return base + log_gamma(r) + (r / 2) * log_n - r * math.log(math.pi)

    pre = prefactor(rho)
    pre_conj = prefactor(np.conj(rho))
    rows = max(1, _CHUNK // ell_max)
    terms = []
    terms_conj = []
    pair_mag = np.empty(z.count)
    bessel_err = 0.0
    asym_count = 0
    for lo in range(0, z.count, rows):
        hi = min(lo + rows, z.count)
        ls, mant, err, asym = bessel_j_many(nu[lo:hi, None], u[None, :])
        logs = pre[lo:hi, None] - nu[lo:hi, None] * log_ell + ls
        logs_c = pre_conj[lo:hi, None] - np.conj(nu[lo:hi, None]) * log_ell + np.conj(ls)
        t = -np.exp(logs) * mant
        tc = -np.exp(logs_c) * np.conj(mant)
        terms.append(t.ravel())
        terms_conj.append(tc.ravel())
        pair_mag[lo:hi] = np.abs(t + tc).sum(axis=1)
        bessel_err += float(np.sum((np.abs(np.exp(logs)) + np.abs(np.exp(logs_c))) * err))
        asym_count += int(asym.sum())
    value, explicit, imag, _ = _pair_sum(np.concatenate(terms), np.concatenate(terms_conj))
    tail = _t6_tail(query, float(z.gammas[-1]), ell_max, z.count)
    detail.update({
        "explicit_value": explicit,
        "bessel_error": bessel_err,
        "asymptotic_share": asym_count / (z.count * ell_max),
        "largest_pair": float(pair_mag.max()),
        "pair_magnitudes_head": [float(x) for x in pair_mag[:10]],
    })
    return TermValue(value, imag, tail, z.count, int(ell_max), detail)


def _t6_tail(query, last_gamma, ell_max, z_used):
    """Heuristic size of the omitted parts of the double sum.

    ``l > L`` for the zeros used, from the envelope; and all ``l`` for zeros
    beyond ``last_gamma``, where a zero of height ``gamma`` contributes about
    ``sqrt(pi) N gamma^-(k+3/2)`` for each of the ``gamma / (2 pi sqrt N)``
    values of ``l`` below the transition, plus an envelope tail.
    """
    k = query.k
    s = k + 1.5
    scale = math.exp(math.log(query.n) + _log_norm(query))
    ell_tail = 0.0
    if ell_max > 0:
        ell_tail = z_used * _envelope_t6(query, ell_max) * ell_max / (k + 0.5)
    per_zero = 2.0 * math.sqrt(math.pi) * scale
    zero_tail = per_zero * (zero_density_tail(last_gamma, s - 1) / (2 * math.pi * math.sqrt(query.n))
                            + zero_density_tail(last_gamma, s) * (1 + 2 ** (k + 2.5) / (k + 0.5)))
    return ell_tail + zero_tail


def evaluate_rhs(query: CesaroQuery, zeros: ZeroList,
                 config: TruncationConfig | None = None, timings: dict | None = None) -> TermBreakdown:
    """All six terms of the right-hand side."""
    config = config or TruncationConfig()
    query = _check_query(query, config)
    if zeros.count < config.zero_count:
        z = zeros
    else:
        z = zeros.head(config.zero_count)
    timings = timings if timings is not None else {}
    clock = time.perf_counter
    t0 = clock()
    t1, t2 = main_terms(query)
    timings["t1_t2"] = clock() - t0
    t0 = clock()
    t3 = zero_sum_primary(query, z)
    timings["t3"] = clock() - t0
    t0 = clock()
    t4 = zero_sum_secondary(query, z)
    timings["t4"] = clock() - t0
    t0 = clock()
    t5 = bessel_ell_sum(query, config.ell_max, config)
    timings["t5"] = clock() - t0
    t0 = clock()
    t6 = bessel_double_sum(query, z, config)
    timings["t6"] = clock() - t0
    return TermBreakdown(query, t1, t2, t3, t4, t5, t6)


def verify(query: CesaroQuery, zeros: ZeroList, config: TruncationConfig | None = None,
           table: MangoldtTable | None = None, digits: int | None = None) -> VerificationReport:
    """Compare the Cesaro sum with the right-hand side.

    ``digits`` switches the left-hand side to ``mpmath`` arithmetic at that
    precision; the right-hand side is always binary64.
    """
    config = config or TruncationConfig()
    query = _check_query(query, config)
    if digits is not None and (not isinstance(digits, int) or digits < 16):
        raise InvalidArgument("digits must be an integer >= 16")
    timings = {}
    t0 = time.perf_counter()
    if table is None or table.limit < query.n:
        table = sieve_von_mangoldt(max(query.n, 2))
    lhs = cesaro_lhs(query, table, digits)
    timings["lhs"] = time.perf_counter() - t0
    if zeros.count < config.zero_count:
        used = zeros
    else:
        used = zeros.head(config.zero_count)
    terms = evaluate_rhs(query, used, config, timings)
    meta = used.metadata()
    meta["requested"] = config.zero_count
    diagnostics = {
        "bessel_error_t5": terms.t5.detail.get("bessel_error", 0.0),
        "bessel_error_t6": terms.t6.detail.get("bessel_error", 0.0),
        "largest_pair_t3": terms.t3.detail.get("largest_pair", 0.0),
        "largest_pair_t6": terms.t6.detail.get("largest_pair", 0.0),
        "ell_capped": bool(terms.t5.detail.get("ell_capped") or terms.t6.detail.get("ell_capped")),
        "imag_ok": terms.imag_ok,
        "too_few_zeros": zeros.count < config.zero_count,
        "exploratory": query.k <= 1,
    }
    lhs_value = float(lhs)
    return VerificationReport(query, lhs_value, terms, config, meta,
                              digits, diagnostics, timings)
