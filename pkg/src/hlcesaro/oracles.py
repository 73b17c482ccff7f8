"""Independent numerical checks of the identities behind the explicit formula.

Everything here is computed by direct summation or quadrature and shares
no code with :mod:`hlcesaro.formula` beyond ``log_gamma`` and the sieve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidArgument, OutOfRange
from .sieve import CesaroQuery, MangoldtTable, Normalization, cesaro_lhs, sieve_von_mangoldt
from .special.gamma import log_gamma
from .zeros import ZeroList

LOG_2PI = math.log(2 * math.pi)
OMEGA_CUTOFF = math.log(1e18)
STILDE_CUTOFF = 40.0
# largest residual / shape over LINNIK_GRID with the first 1000 zeros is 1.10
LINNIK_C = 1.5
LINNIK_GRID_A = (0.002, 0.01, 0.05, 0.1, 0.3, 1.0)
LINNIK_GRID_RATIO = (0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 30.0)
LINNIK_ZEROS = 1000
THETA_TOL = 1e-10
LAPLACE_TOL = 1e-6
LINE_INTEGRAL_TOL = 1e-4
LINE_INTEGRAL_MAX_N = 200
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


@dataclass(frozen=True)
class HalfPlanePoint:
    a: float
    y: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.y)):
            raise InvalidArgument("a and y must be finite")
        if self.a <= 0:
            raise DomainError(f"need a > 0, got a={self.a}")

    @property
    def z(self) -> complex:
        return complex(self.a, self.y)

    @classmethod
    def of(cls, z) -> "HalfPlanePoint":
        if isinstance(z, HalfPlanePoint):
            return z
        z = complex(z)
        return cls(z.real, z.imag)


def _csum(values) -> complex:
    values = np.asarray(values, complex)
    return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))


def omega2_direct(z, terms: int | None = None) -> complex:
    """``sum_{m >= 1} exp(-m^2 z)``, by default up to ``exp(-m^2 a) < 1e-18``."""
    p = HalfPlanePoint.of(z)
    if terms is None:
        terms = max(1, math.ceil(math.sqrt(OMEGA_CUTOFF / p.a)))
    elif terms < 1:
        raise InvalidArgument("terms must be positive")
    m = np.arange(1, terms + 1, dtype=float)
    return _csum(np.exp(-(m * m) * p.z))


@dataclass(frozen=True)
class TruncatedSum:
    value: complex
    tail_estimate: float
    terms: int


def s_tilde_direct(z, table: MangoldtTable) -> TruncatedSum:
    """``sum_m Lambda(m) exp(-m z)`` truncated at ``m = 40 / a``."""
    p = HalfPlanePoint.of(z)
    need = math.ceil(STILDE_CUTOFF / p.a)
    if table.limit < need:
        raise OutOfRange(f"table limit {table.limit} too small; need at least {need}")
    m = np.arange(1, need + 1, dtype=float)
    lam = table.values[1:need + 1]
    value = _csum(lam * np.exp(-m * p.z))
    # sum_{m > M} log(m) e^(-m a) <= log(M + 1) e^(-(M + 1) a) / (1 - e^-a), roughly
    tail = math.log(need + 1) * math.exp(-(need + 1) * p.a) / -math.expm1(-p.a)
    return TruncatedSum(value, tail, need)


def theta_modularity_rhs(z) -> complex:
    """``(1/2)(pi/z)^(1/2) - 1/2 + (pi/z)^(1/2) omega2(pi^2/z)``."""
    z = HalfPlanePoint.of(z).z
    root = (math.pi / z) ** 0.5
    return 0.5 * root - 0.5 + root * omega2_direct(math.pi ** 2 / z)


def check_theta_modularity(z) -> float:
    return abs(omega2_direct(z) - theta_modularity_rhs(z))


def _panel_edges(span: float, a: float, d: float) -> np.ndarray:
    """Edges on ``[0, span]``: at most ``pi / |d|`` wide and at most
    half the distance to the singular point ``u = i a``."""
    cap = math.pi / abs(d) if d else math.pi
    edges = [0.0]
    x = 0.0
    while x < span:
        x = min(span, x + min(cap, 0.5 * max(a, x)))
        edges.append(x)
    return np.array(edges)


def laplace_line_integral(s: complex, a: float = 1.0, span: float = 1e4, d: float = 1.0) -> complex:
    """``(1/2 pi) int_{-span}^{span} exp(i d u) (a + i u)^-s du`` by Gauss-Legendre panels."""
    s = complex(s)
    edges = _panel_edges(span, a, d)
    lo, hi = edges[:-1, None], edges[1:, None]
    u = 0.5 * (hi - lo) * _GL_NODES + 0.5 * (hi + lo)
    w = 0.5 * (hi - lo) * _GL_WEIGHTS
    u = np.concatenate([u.ravel(), -u.ravel()])
    w = np.concatenate([w.ravel(), w.ravel()])
    vals = w * np.exp(1j * d * u - s * np.log(a + 1j * u))
    return _csum(vals) / (2 * math.pi)


def laplace_expected(s: complex, a: float = 1.0, d: float = 1.0) -> complex:
    s = complex(s)
    if d > 0:
        return complex(np.exp((s - 1) * math.log(d) - a * d - log_gamma(s)))
    if d < 0:
        return 0j
    if s == 1:
        return 0.5 + 0j
    if s.real > 1:
        return 0j
    raise DomainError("with d = 0 the integral needs Re s > 1 or s = 1")


def check_laplace_identity(s: complex, a: float = 1.0, integration_span: float = 1e4,
                           d: float = 1.0) -> float:
    """Residual of the truncated line integral against its closed form.

    ``d = 1`` is the classical ``1/Gamma(s)`` formula (up to ``e^-a``);
    ``d < 0`` gives zero and ``d = 0`` gives ``0`` or ``1/2`` (principal
    value, approached as ``span`` grows).
    """
    if complex(s).real <= 0:
        raise DomainError(f"need Re s > 0, got s={s}")
    if a <= 0 or integration_span <= 0:
        raise InvalidArgument("a and integration_span must be positive")
    return abs(laplace_line_integral(s, a, integration_span, d) - laplace_expected(s, a, d))


def log_power(z: complex, w) -> np.ndarray:
    """``log(z^-w)`` on the principal branch, assembled from
    ``|z^-w| = |z|^-Re(w) exp(Im(w) arg z)`` and the matching phase."""
    z = complex(z)
    w = np.asarray(w, complex)
    r = math.log(abs(z))
    theta = math.atan2(z.imag, z.real)
    return (-w.real * r + w.imag * theta) + 1j * (-w.imag * r - w.real * theta)


@dataclass(frozen=True)
class LinnikCheck:
    residual: float
    bound: float
    literal_residual: float
    zeros_used: int

    @property
    def passed(self) -> bool:
        return self.residual <= self.bound


def linnik_shape(z) -> float:
    p = HalfPlanePoint.of(z)
    ratio = abs(p.y) / p.a
    factor = 1.0 + math.log(ratio) ** 2 if ratio > 1 else 1.0
    return abs(p.z) ** 0.5 * factor


def check_linnik_expansion(z, zeros: ZeroList, table: MangoldtTable,
                           count: int | None = None, c: float = LINNIK_C) -> LinnikCheck:
    """Compare ``S~(z)`` with ``1/z - sum_rho Gamma(rho) z^-rho - log(2 pi)``.

    The constant ``-log(2 pi)`` is the value at ``s = 0`` of ``-zeta'/zeta``;
    without it the difference tends to ``log(2 pi)`` as ``z -> 0`` and is not
    ``O(|z|^(1/2))``.  ``literal_residual`` leaves it out.
    """
    p = HalfPlanePoint.of(z)
    if p.a > 1:
        raise DomainError(f"need a <= 1, got a={p.a}")
    used = zeros.head(zeros.count if count is None else count)
    rho = used.rhos()
    total = 0j
    if used.count:
        total = _csum(np.exp(log_gamma(rho) + log_power(p.z, rho))) \
            + _csum(np.exp(log_gamma(np.conj(rho)) + log_power(p.z, np.conj(rho))))
    literal = s_tilde_direct(p, table).value - 1 / p.z + total
    return LinnikCheck(abs(literal + LOG_2PI), c * linnik_shape(p), abs(literal), used.count)


def fit_linnik_constant(points, zeros: ZeroList, table: MangoldtTable, count=None) -> float:
    """Largest ``residual / shape`` over ``points``."""
    return max(check_linnik_expansion(p, zeros, table, count, 1.0).residual / linnik_shape(p)
               for p in points)


def linnik_grid():
    return [HalfPlanePoint(a, r * a) for a in LINNIK_GRID_A for r in LINNIK_GRID_RATIO]


def _periodic_kernel(y: np.ndarray, a: float, k: float, reps: int = 200) -> np.ndarray:
    """``sum_j (a + i(y + 2 pi j))^-(k+1)`` by direct summation over
    ``|j| <= reps`` with an Euler-Maclaurin tail on each side."""
    p = k + 1
    out = np.zeros(y.shape, complex)
    for j in range(-reps, reps + 1):
        out += np.exp(-p * np.log(a + 1j * (y + 2 * math.pi * j)))
    for sign in (1, -1):
        x0 = sign * (reps + 1)
        w = a + 1j * (y + 2 * math.pi * x0)
        f = np.exp(-p * np.log(w))
        df = -p * (2j * math.pi * sign) * np.exp(-(p + 1) * np.log(w))
        integral = np.exp(-k * np.log(w)) / (2j * math.pi * sign * k)
        out += integral + f / 2 - df / 12
    return out


def _fold(coeffs: np.ndarray, exponents: np.ndarray, size: int) -> np.ndarray:
    out = np.zeros(size, complex)
    np.add.at(out, exponents % size, coeffs)
    return out


def line_integral_lhs(query: CesaroQuery, table: MangoldtTable | None = None,
                      points: int | None = None) -> complex:
    """``(1/2 pi i) int_(a) e^(N z) z^-(k+1) S~(z) omega2(z) dz`` with ``a = 1/N``.

    ``S~ omega2 e^(i N y)`` is ``2 pi``-periodic in ``y``, so the line integral
    folds onto one period against the periodised kernel and the trapezoid
    rule on ``points`` nodes converges geometrically.  ``S~`` and ``omega2``
    come from FFTs of their Dirichlet coefficients.
    """
    n, k = query.n, query.k
    a = 1.0 / n
    if points is None:
        points = 1 << max(10, math.ceil(math.log2(64 * n)))
    m_max = math.ceil(STILDE_CUTOFF / a)
    if table is None or table.limit < m_max:
        table = sieve_von_mangoldt(m_max)
    m = np.arange(1, m_max + 1)
    lam = table.values[1:m_max + 1]
    s_coef = _fold(lam * np.exp(-m * a), m, points)
    q = np.arange(1, math.ceil(math.sqrt(OMEGA_CUTOFF / a)) + 1)
    w_coef = _fold(np.exp(-(q * q) * a), q * q, points)
    # f(y_j) = sum_m c_m e^(-i m y_j) with y_j = 2 pi j / points
    s_vals = np.fft.fft(s_coef)
    w_vals = np.fft.fft(w_coef)
    y = 2 * math.pi * np.arange(points) / points
    kern = _periodic_kernel(y, a, k)
    vals = np.exp(1j * n * y) * s_vals * w_vals * kern
    return math.exp(n * a) * _csum(vals) / points


def lhs_line_integral_check(query: CesaroQuery, table: MangoldtTable | None = None) -> float:
    """Relative difference between the line integral and the sieve sum (scaled form)."""
    if not isinstance(query, CesaroQuery):
        query = CesaroQuery(*query)
    if query.n > LINE_INTEGRAL_MAX_N:
        raise OutOfRange(f"line-integral check is limited to N <= {LINE_INTEGRAL_MAX_N}")
    if query.k <= 0.5:
        raise DomainError(f"need k > 1/2, got k={query.k}")
    scaled = CesaroQuery(query.n, query.k, Normalization.SCALED)
    direct = cesaro_lhs(scaled, table if table is not None and table.limit >= query.n else None)
    integral = line_integral_lhs(scaled, table)
    return abs(integral - float(direct)) / abs(float(direct))


@dataclass(frozen=True)
class CheckResult:
    family: str
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.value) and self.value <= self.tolerance


FAMILIES = ("theta-modularity", "laplace", "linnik", "line-integral", "magnitude-laws")


def _theta_checks():
    out = []
    for a in (0.01, 0.05, 0.3, 1.0, 3.0, 10.0):
        for r in (0.0, 1.0, -3.0, 10.0):
            p = HalfPlanePoint(a, r * a)
            out.append(CheckResult("theta-modularity", f"z={p.z:.4g}", check_theta_modularity(p), THETA_TOL))
    return out


def _laplace_checks():
    out = []
    for s in (2, 3, 5):
        out.append(CheckResult("laplace", f"s={s} d=1", check_laplace_identity(s), LAPLACE_TOL))
    out.append(CheckResult("laplace", "s=2+3i d=1", check_laplace_identity(2 + 3j), LAPLACE_TOL))
    out.append(CheckResult("laplace", "s=3 d=2.5", check_laplace_identity(3, d=2.5), LAPLACE_TOL))
    out.append(CheckResult("laplace", "s=3 d=-1", check_laplace_identity(3, d=-1.0), LAPLACE_TOL))
    # principal value: the symmetric truncation misses a / (pi span)
    out.append(CheckResult("laplace", "s=1 d=0", check_laplace_identity(1, d=0.0), 1.1 / (math.pi * 1e4)))
    return out


def _linnik_checks(zeros, table):
    out = []
    for p in linnik_grid():
        chk = check_linnik_expansion(p, zeros, table, LINNIK_ZEROS)
        out.append(CheckResult("linnik", f"a={p.a:g} y={p.y:g}", chk.residual, chk.bound))
    return out


def _line_integral_checks(table):
    return [CheckResult("line-integral", f"N={n} k=2", lhs_line_integral_check(CesaroQuery(n, 2), table),
                        LINE_INTEGRAL_TOL) for n in (20, 50, 100)]


def _magnitude_checks():
    rng = np.random.default_rng(20240501)
    worst = 0.0
    for _ in range(20):
        z = complex(rng.uniform(0.01, 2), rng.uniform(-20, 20))
        w = complex(rng.uniform(0, 3), rng.uniform(-40, 40))
        direct = z ** (-w)
        via_law = np.exp(log_power(z, w))
        worst = max(worst, abs(via_law - direct) / abs(direct))
    re_err = 0.0
    for n in (10, 1000, 10 ** 6):
        for y in (-0.3, 0.0, 1e-4, 2.0):
            z = complex(1 / n, y)
            re_err = max(re_err, abs((1 / z).real - n / (1 + n * n * y * y)) / (n / (1 + n * n * y * y)))
    bound_gap = 0.0
    a = 0.05
    w0 = omega2_direct(a).real
    for y in rng.uniform(-30, 30, 50):
        bound_gap = max(bound_gap, abs(omega2_direct(complex(a, y))) - w0)
    return [
        CheckResult("magnitude-laws", "power law", worst, 1e-12),
        CheckResult("magnitude-laws", "Re 1/z", re_err, 1e-14),
        CheckResult("magnitude-laws", "omega2 bound", max(bound_gap, 0.0), 0.0),
    ]


def run_oracle_suite(zeros: ZeroList | None = None, only=None) -> list[CheckResult]:
    """Run the default grid.  ``only`` restricts to the named families."""
    families = FAMILIES if only is None else tuple(only)
    unknown = set(families) - set(FAMILIES)
    if unknown:
        raise InvalidArgument(f"unknown check families: {sorted(unknown)}")
    table = None
    if "linnik" in families or "line-integral" in families:
        table = sieve_von_mangoldt(math.ceil(STILDE_CUTOFF / min(LINNIK_GRID_A)))
    results = []
    for fam in FAMILIES:
        if fam not in families:
            continue
        if fam == "theta-modularity":
            results += _theta_checks()
        elif fam == "laplace":
            results += _laplace_checks()
        elif fam == "linnik":
            if zeros is None:
                raise InvalidArgument("the linnik checks need a zeros list")
            results += _linnik_checks(zeros, table)
        elif fam == "line-integral":
            results += _line_integral_checks(table)
        else:
            results += _magnitude_checks()
    return results
