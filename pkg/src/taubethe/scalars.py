"""Scalar fields, determinants and Vandermonde products.

Two numeric modes are supported and selected by the values themselves:

* EXACT -- ``int`` / ``fractions.Fraction`` entries, arbitrary precision,
  equality is literal.
* FLOAT -- ``complex`` (or ``float``) entries, equality within a relative
  tolerance ``|a - b| <= tol * max(1, |a|, |b|)``.

Hyperbolic quantities are carried through their exponentials: a rapidity
``u`` is stored as ``w = e^u``, so ``sinh(u) = (w - 1/w) / 2`` stays rational
whenever ``w`` is rational.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

DEFAULT_TOL = 1e-10


class Mode(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class TauBetheError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(TauBetheError, ValueError):
    pass


class SingularError(TauBetheError, ZeroDivisionError):
    """A pole of a formula was hit (coinciding variables, zero denominator)."""


class TruncationError(TauBetheError, ValueError):
    """A truncated series or coefficient matrix is too short for the request."""


class SizeError(TauBetheError, ValueError):
    """Problem size exceeds an enumeration or operator-dimension cap."""


class ConvergenceError(TauBetheError, ArithmeticError):
    pass


class ModelViolationError(TauBetheError, ArithmeticError):
    """A fitted structural model (e.g. a monomial prefactor) does not hold."""


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def mode_of(values) -> Mode:
    """EXACT iff every value is an int or Fraction."""
    for v in values:
        if not is_exact(v):
            return Mode.FLOAT
    return Mode.EXACT


def close(a, b, tol: float = DEFAULT_TOL) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def rel_residual(a, b) -> float:
    """``|a - b| / max(1, |a|, |b|)``; exactly 0.0 for equal exact values."""
    if is_exact(a) and is_exact(b) and a == b:
        return 0.0
    return float(abs(a - b)) / max(1.0, float(abs(a)), float(abs(b)))


def is_zero(value, tol: float = DEFAULT_TOL, scale: float = 1.0) -> bool:
    if is_exact(value):
        return value == 0
    return abs(value) <= tol * max(1.0, scale)


def div(a, b):
    """a / b that stays rational when both operands are exact."""
    if is_exact(a) and is_exact(b):
        if b == 0:
            raise SingularError("division by zero")
        return Fraction(a) / b
    return a / b


def sinh_exp(w):
    """sinh(u) given w = e^u."""
    return div(w - div(1, w), 2)


def expo(u):
    """e^u in FLOAT mode (complex)."""
    return cmath.exp(u)


def prod(values, start=1):
    out = start
    for v in values:
        out = out * v
    return out


def _square(m) -> list[list]:
    rows = [list(r) for r in m]
    n = len(rows)
    for r in rows:
        if len(r) != n:
            raise DimensionError(f"determinant needs a square matrix, got {n}x{len(r)}")
    return rows


def _det_exact(rows: list[list]):
    # Bareiss fraction-free elimination; every division below is exact.
    a = [[Fraction(v) for v in r] for r in rows]
    n = len(a)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) / prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det(m):
    """Determinant of a square matrix (nested sequence or numpy array).

    EXACT entries go through Bareiss elimination over the rationals; anything
    else through LAPACK's pivoted LU in complex arithmetic.
    """
    rows = _square(m)
    n = len(rows)
    if n == 0:
        return Fraction(1)
    flat = [v for r in rows for v in r]
    if mode_of(flat) is Mode.EXACT:
        return _det_exact(rows)
    return complex(np.linalg.det(np.array(rows, dtype=complex)))


def vandermonde(x: Sequence):
    """prod_{i<j} (x_i - x_j)."""
    out = 1
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            out = out * (x[i] - x[j])
    return out


def check_distinct(x: Sequence, what: str = "variables", tol: float = DEFAULT_TOL) -> None:
    """Raise SingularError when two entries coincide (within tol in FLOAT mode)."""
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            d = x[i] - x[j]
            scale = max(abs(x[i]), abs(x[j]))
            if is_zero(d, tol, scale):
                raise SingularError(f"{what} {i} and {j} coincide: {x[i]!r}")


# -- monomial fitting ------------------------------------------------------


@dataclass(frozen=True)
class MonomialFit:
    """``value(w) = constant * prod_k w_k ** exponents[k]``.

    ``max_residual`` is the worst relative deviation over the held-out points
    (0.0 means exact agreement in EXACT mode).
    """

    constant: object
    exponents: tuple[int, ...]
    max_residual: float
    held_out: int

    def __call__(self, point: Sequence):
        out = self.constant
        for w, k in zip(point, self.exponents):
            out = out * w**k
        return out


def _exact_log(ratio, base: Fraction, bound: int) -> int | None:
    for k in range(-bound, bound + 1):
        if Fraction(base) ** k == ratio:
            return k
    return None


def fit_monomial(
    fn: Callable[[Sequence], object],
    base_point: Sequence,
    held_out: Sequence[Sequence],
    scale=2,
    tol: float = DEFAULT_TOL,
    max_degree: int = 64,
) -> MonomialFit:
    """Fit ``fn`` as ``const * prod w_k^{a_k}`` with integer ``a_k``.

    Each variable is scaled by ``scale`` in turn; the ratio of values must be
    an exact integer power of ``scale``. The fit is then checked on every
    held-out point. Raises ModelViolationError if any step fails.
    """
    exact = mode_of(list(base_point)) is Mode.EXACT and is_exact(scale)
    f0 = fn(base_point)
    if is_zero(f0):
        raise ModelViolationError("fit base value vanishes")
    exps: list[int] = []
    for k in range(len(base_point)):
        moved = list(base_point)
        moved[k] = moved[k] * scale
        ratio = fn(moved) / f0
        if exact:
            a = _exact_log(ratio, Fraction(scale), max_degree)
            if a is None:
                raise ModelViolationError(f"variable {k}: ratio {ratio} is not a power of {scale}")
        else:
            a = round(math.log(abs(ratio)) / math.log(abs(scale)))
            if abs(ratio - complex(scale) ** a) > 1e3 * tol * abs(ratio):
                raise ModelViolationError(f"variable {k}: ratio {ratio} is not a power of {scale}")
        exps.append(a)
    denom = prod(w**a for w, a in zip(base_point, exps))
    fit = MonomialFit(f0 / denom, tuple(exps), 0.0, 0)
    worst = 0.0
    for pt in held_out:
        got, want = fn(pt), fit(pt)
        if got != want:
            worst = max(worst, float(abs(got - want) / abs(got)))
    return MonomialFit(fit.constant, fit.exponents, worst, len(held_out))


__all__ = [
    "DEFAULT_TOL", "Mode", "TauBetheError", "DimensionError", "SingularError",
    "TruncationError", "SizeError", "ConvergenceError", "ModelViolationError",
    "is_exact", "mode_of", "close", "rel_residual", "is_zero", "sinh_exp", "expo",
    "div", "prod", "det", "vandermonde", "check_distinct", "MonomialFit", "fit_monomial",
]
