"""q = 0 (crystal limit) models: rational R-matrix, the free-variable
scalar-product determinant and boxed plane partitions.

Variables here are multiplicative: the kernels depend on u^2, v^2 only
through f = u^2/(u^2 - v^2) and g = uv/(u^2 - v^2).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from .scalars import (
    DEFAULT_TOL,
    ModelViolationError,
    MonomialFit,
    SingularError,
    SizeError,
    check_distinct,
    det,
    div,
    fit_monomial,
    is_zero,
    sinh_exp,
)
from .symfunc import partitions_in_box, rectangle, schur

PP_BRUTEFORCE_CAP = 64


def f_q0(u, v):
    return div(u * u, u * u - v * v)


def g_q0(u, v):
    return div(u * v, u * u - v * v)


def r_matrix_q0(u, v) -> list[list]:
    if is_zero(u * u - v * v):
        raise SingularError("R-matrix pole at u^2 = v^2")
    f, g = f_q0(u, v), g_q0(u, v)
    return [[f, 0, 0, 0], [0, 1, g, 0], [0, g, 0, 0], [0, 0, 0, f]]


def xxz_r_twisted(u, v, q) -> list[list]:
    """(q / b) F_21 R(U - V) F_12^{-1} for the XXZ R-matrix at e^{U-V} = u/v, e^{-gamma} = q.

    F_12 = diag(1, phi, 1/phi, 1) with phi^2 = q. Entries in closed form:
    [[qa/b, 0, 0, 0], [0, 1, qc/b, 0], [0, qc/b, q^2, 0], [0, 0, 0, qa/b]],
    which tends to r_matrix_q0(u, v) as q -> 0.
    """
    w = div(u, v)
    a, b, c = sinh_exp(div(w, q)), sinh_exp(w), sinh_exp(div(1, q))
    fa, gc = div(q * a, b), div(q * c, b)
    return [[fa, 0, 0, 0], [0, 1, gc, 0], [0, gc, q * q, 0], [0, 0, 0, fa]]


def xxz_r_rescaled(u, v, q) -> list[list]:
    """(q / b) R(U - V) without the twist; its middle block tends to [[0, g], [g, 0]]."""
    w = div(u, v)
    a, b, c = sinh_exp(div(w, q)), sinh_exp(w), sinh_exp(div(1, q))
    fa, gc = div(q * a, b), div(q * c, b)
    return [[fa, 0, 0, 0], [0, q, gc, 0], [0, gc, q, 0], [0, 0, 0, fa]]


def matrix_distance(m1: Sequence[Sequence], m2: Sequence[Sequence]):
    return max(abs(a - b) for r1, r2 in zip(m1, m2) for a, b in zip(r1, r2))


# -- free-variable determinant ----------------------------------------------------


@dataclass(frozen=True)
class QZeroParams:
    """u, v free variables; alpha, delta are the vacuum eigenvalues of A and D."""

    u: tuple
    v: tuple
    alpha: Callable
    delta: Callable
    N: int = 0

    def __post_init__(self):
        if len(self.u) != len(self.v):
            raise ValueError(f"|u| = {len(self.u)} but |v| = {len(self.v)}")
        check_distinct([w * w for w in self.u], "u^2")
        check_distinct([w * w for w in self.v], "v^2")
        if any(is_zero(a * a - b * b) for a in self.u for b in self.v):
            raise SingularError("u_i^2 = v_j^2")

    @property
    def n(self) -> int:
        return len(self.u)


def cauchy_params(u: Sequence, v: Sequence) -> QZeroParams:
    """delta = 1, alpha(w) = w^{2n-1}: then K_ij = (u_i v_j)^n / (u_i + v_j)."""
    n = len(u)
    return QZeroParams(tuple(u), tuple(v), lambda w: w ** (2 * n - 1), lambda w: 1)


def q0_kernel(p: QZeroParams) -> list[list]:
    n = p.n
    rows = []
    for a in p.u:
        row = []
        for b in p.v:
            num = (p.alpha(a) * p.delta(b) * div(b, a) ** (n - 1)
                   - p.delta(a) * p.alpha(b) * div(a, b) ** (n - 1))
            row.append(div(num * a * b, a * a - b * b))
        rows.append(row)
    return rows


def scalar_det_q0(p: QZeroParams):
    """prod_{i<j} u_i u_j/(u_i^2 - u_j^2) * v_j v_i/(v_j^2 - v_i^2) * det K.

    The overall "simple factor" is model dependent and not included.
    """
    n = p.n
    pre = 1
    for i in range(n):
        for j in range(i + 1, n):
            ui, uj, vi, vj = p.u[i], p.u[j], p.v[i], p.v[j]
            pre = pre * div(ui * uj, ui * ui - uj * uj) * div(vj * vi, vj * vj - vi * vi)
    return pre * det(q0_kernel(p))


# -- boxed plane partitions ------------------------------------------------------


def boxed_schur_sum(n: int, N: int, a: Sequence, b: Sequence):
    """sum over lambda in (N^n) of s_lambda(a) s_lambda(b)."""
    if len(a) != n or len(b) != n:
        raise ValueError(f"need alphabets of length {n}")
    return sum((schur(a, lam) * schur(b, lam) for lam in partitions_in_box(n, N)), 0)


def boxed_schur_sum_transposed(n: int, N: int, a: Sequence, b: Sequence):
    """Same sum reindexed over mu in (n^N) with lambda = mu'."""
    if len(a) != n or len(b) != n:
        raise ValueError(f"need alphabets of length {n}")
    total = 0
    for mu in partitions_in_box(N, n):
        lam = mu.transpose()
        total = total + schur(a, lam) * schur(b, lam)
    return total


def box_term_count(n: int, N: int) -> int:
    return comb(n + N, n)


def plane_partition_count(a: int, b: int, c: int) -> int:
    """a x b arrays with entries in [0, c], weakly decreasing along rows and columns."""
    if min(a, b, c) < 0:
        raise ValueError("box sides must be nonnegative")
    if a * b * c > PP_BRUTEFORCE_CAP:
        raise SizeError(f"brute force capped at a*b*c <= {PP_BRUTEFORCE_CAP}")
    if a == 0 or b == 0:
        return 1

    # columns are weakly decreasing length-a vectors, each dominated by the previous one
    def columns(bound: Sequence[int]):
        def rec(prefix, k):
            if k == a:
                yield tuple(prefix)
                return
            top = min(bound[k], prefix[-1] if prefix else c)
            for h in range(top + 1):
                yield from rec(prefix + [h], k + 1)

        yield from rec([], 0)

    def count(prev: tuple, left: int) -> int:
        if left == 0:
            return 1
        return sum(count(col, left - 1) for col in columns(prev))

    return count((c,) * a, b)


def macmahon_box_count(a: int, b: int, c: int) -> int:
    """prod_{i,j,k} (i + j + k - 1) / (i + j + k - 2) over the box."""
    out = Fraction(1)
    for i in range(1, a + 1):
        for j in range(1, b + 1):
            for k in range(1, c + 1):
                out *= Fraction(i + j + k - 1, i + j + k - 2)
    assert out.denominator == 1
    return int(out)


def single_schur(n: int, N: int, u: Sequence, v: Sequence):
    """s_{(N^n)}(u_1^2, ..., u_n^2, v_1^2, ..., v_n^2)."""
    return schur([w * w for w in u] + [w * w for w in v], rectangle(n, N))


def schur_ratio_q0(n: int, N: int, u: Sequence, v: Sequence):
    """s_{(N^n)}(u^2, v^2) / sum_lambda s_lambda(u^2) s_lambda(v^{-2})."""
    boxed = boxed_schur_sum(n, N, [w * w for w in u], [div(1, w * w) for w in v])
    if is_zero(boxed):
        raise ModelViolationError("boxed Schur sum vanishes at this point; resample")
    return div(single_schur(n, N, u, v), boxed)


def single_schur_form(n: int, N: int, u: Sequence, v: Sequence, points: int = 5,
                      rng: random.Random | None = None,
                      tol: float = DEFAULT_TOL) -> tuple[object, MonomialFit]:
    """Evaluate s_{(N^n)}(u^2, v^2) and fit its ratio to the boxed sum as a monomial.

    Points are (u_1, ..., u_n, v_1, ..., v_n); held-out points are random
    rationals. The expected fit is prod v_j^{2N} with constant 1.
    """
    if len(u) != n or len(v) != n:
        raise ValueError(f"need {n} u's and {n} v's")
    rng = rng or random.Random(0)
    value = single_schur(n, N, u, v)
    held = [[Fraction(rng.randint(1, 12), rng.randint(1, 12)) for _ in range(2 * n)]
            for _ in range(points)]
    fit = fit_monomial(lambda pt: schur_ratio_q0(n, N, pt[:n], pt[n:]), [*u, *v], held, tol=tol)
    return value, fit


__all__ = [
    "f_q0", "g_q0", "r_matrix_q0", "xxz_r_twisted", "xxz_r_rescaled", "matrix_distance",
    "QZeroParams", "cauchy_params", "q0_kernel", "scalar_det_q0",
    "boxed_schur_sum", "boxed_schur_sum_transposed", "box_term_count",
    "plane_partition_count", "macmahon_box_count", "single_schur", "schur_ratio_q0",
    "single_schur_form", "PP_BRUTEFORCE_CAP",
]
