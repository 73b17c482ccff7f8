"""Loading and describing tables of zeta zero ordinates.

A zeros file holds one positive decimal ``gamma`` per line in increasing
order.  Blank lines and lines starting with ``#`` are ignored.  Every zero
is taken to lie on the critical line (``beta = 1/2``).
"""
from __future__ import annotations

import hashlib
import math
import os
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, InvalidArgument

ENV_VAR = "HLCESARO_ZEROS"
FIRST_ORDINATE = 14.134725141734693
ANCHOR_TOL = 1e-3
RECOMMENDED_DECIMALS = 9

_DECIMAL = re.compile(r"^[+]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class ZeroList:
    """Ordinates of the first zeros, plus where they came from."""

    gammas: np.ndarray
    tokens: tuple = field(repr=False, default=())
    source_path: str | None = None
    source_digest: str | None = None
    beta: float = 0.5

    @property
    def count(self) -> int:
        return int(self.gammas.size)

    @property
    def min_decimals(self) -> int:
        if not self.tokens:
            return 0
        return min(len(t.split(".")[1]) if "." in t else 0 for t in self.tokens)

    @property
    def anchor_ok(self) -> bool:
        return self.count > 0 and abs(self.gammas[0] - FIRST_ORDINATE) <= ANCHOR_TOL

    def head(self, count: int) -> "ZeroList":
        """The first ``count`` zeros (all of them if fewer are held)."""
        if count < 0:
            raise InvalidArgument("count must be non-negative")
        count = min(count, self.count)
        return ZeroList(self.gammas[:count], self.tokens[:count], self.source_path,
                        self.source_digest, self.beta)

    @classmethod
    def empty(cls) -> "ZeroList":
        return cls(np.empty(0))

    def rhos(self) -> np.ndarray:
        return self.beta + 1j * self.gammas

    def metadata(self) -> dict:
        return {
            "count": self.count,
            "source": self.source_path,
            "digest": self.source_digest,
            "beta": self.beta,
            "min_decimals": self.min_decimals,
            "low_precision": self.count > 0 and self.min_decimals < RECOMMENDED_DECIMALS,
            "anchor_ok": self.anchor_ok,
        }


def parse_zeros(text: str, path: str | None = None, max_count: int | None = None) -> ZeroList:
    """Parse zeros from ``text``; see :func:`load_zeros`."""
    tokens = []
    prev = 0.0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        if not _DECIMAL.match(s):
            raise DataError(f"not a decimal number: {s!r}", line=lineno, path=path)
        g = float(s)
        if not (math.isfinite(g) and g > 0):
            raise DataError(f"ordinate must be positive and finite: {s!r}", line=lineno, path=path)
        if g <= prev:
            raise DataError(f"ordinates must increase strictly ({s} after {prev!r})",
                            line=lineno, path=path)
        tokens.append(s)
        prev = g
        if max_count is not None and len(tokens) >= max_count:
            break
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    gammas = np.array([float(t) for t in tokens], dtype=float)
    return ZeroList(gammas, tuple(tokens), path, digest)


def load_zeros(path=None, max_count: int | None = None) -> ZeroList:
    """Read a zeros file.

    Parameters
    ----------
    path : str or os.PathLike, optional
        Defaults to the ``HLCESARO_ZEROS`` environment variable.
    max_count : int, optional
        Stop after this many zeros.  The digest always covers the whole file.

    Raises
    ------
    DataError
        Missing file (message names the path), a non-numeric or non-positive
        entry, or a non-increasing sequence; ``line`` gives the 1-based line.
    """
    if path is None:
        path = os.environ.get(ENV_VAR)
        if not path:
            raise DataError(f"no zeros file given and {ENV_VAR} is not set")
    path = os.fspath(path)
    if max_count is not None and max_count < 0:
        raise InvalidArgument("max_count must be non-negative")
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except FileNotFoundError:
        raise DataError(f"zeros file not found: {path}", path=path) from None
    except OSError as exc:
        raise DataError(f"cannot read zeros file {path}: {exc}", path=path) from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"zeros file is not UTF-8 text: {exc}", path=path) from None
    zl = parse_zeros(text, path=path, max_count=max_count)
    digest = hashlib.sha256(raw).hexdigest()
    return ZeroList(zl.gammas, zl.tokens, path, digest)


def serialize_zeros(zeros: ZeroList) -> str:
    """Text form that :func:`parse_zeros` reads back to identical values."""
    tokens = zeros.tokens or tuple(repr(float(g)) for g in zeros.gammas)
    return "".join(t + "\n" for t in tokens)


def zero_count_main_term(t: float) -> float:
    """Smooth part of the zero counting function, ``(T/2pi) log(T/2pi e) + 7/8``."""
    x = t / (2 * math.pi)
    return x * math.log(x / math.e) + 7.0 / 8.0


def zero_count_check(zeros: ZeroList) -> dict:
    """Compare the number of loaded zeros with the counting-function main term.

    The difference is ``S(T) + O(1/T)`` with ``|S(T)|`` below about 1 for the
    heights in question, so a gap above 3 means the table skips zeros or is
    not the standard sequence.
    """
    if zeros.count == 0:
        return {"count": 0, "expected": 0.0, "gap": 0.0, "ok": True}
    t = float(zeros.gammas[-1]) + 1e-9
    expected = zero_count_main_term(t)
    gap = zeros.count - expected
    return {"count": zeros.count, "expected": expected, "gap": gap, "ok": abs(gap) < 3.0}
