"""Partitions, Miwa times, complete homogeneous and Schur functions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .scalars import (
    DEFAULT_TOL,
    SingularError,
    TruncationError,
    check_distinct,
    det,
    div,
    is_exact,
    vandermonde,
)


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive parts (trailing zeros dropped)."""

    parts: tuple[int, ...] = ()

    def __init__(self, parts: Sequence[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts not weakly decreasing: {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        # 0-based; zero beyond the length
        return self.parts[i] if 0 <= i < len(self.parts) else 0

    def __repr__(self) -> str:
        return f"Partition({list(self.parts)})"

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def transpose(self) -> Partition:
        if not self.parts:
            return self
        return Partition([sum(1 for p in self.parts if p > j) for j in range(self.parts[0])])

    def padded(self, n: int) -> tuple[int, ...]:
        if n < self.length:
            raise ValueError(f"{self} has more than {n} parts")
        return self.parts + (0,) * (n - self.length)

    def shifted(self, n: int) -> tuple[int, ...]:
        """l_i = lambda_i - i + n for i = 1..n (strictly decreasing, >= 0)."""
        return tuple(p - i + n for i, p in enumerate(self.padded(n), start=1))

    def fits_in(self, rows: int, cols: int) -> bool:
        return self.length <= rows and (not self.parts or self.parts[0] <= cols)


def partitions_in_box(rows: int, cols: int) -> Iterator[Partition]:
    """All partitions inside the (cols^rows) rectangle, reverse-lexicographic."""

    def rec(prefix: list[int], bound: int, left: int):
        if left == 0:
            yield Partition(prefix)
            return
        for p in range(bound, -1, -1):
            yield from rec(prefix + [p], p, left - 1)

    if rows < 0 or cols < 0:
        return
    yield from rec([], cols, rows)


def partitions_of(n: int, max_length: int | None = None) -> Iterator[Partition]:
    """Partitions of n (optionally with at most max_length parts)."""

    def rec(left: int, bound: int, prefix: list[int]):
        if left == 0:
            yield Partition(prefix)
            return
        if max_length is not None and len(prefix) >= max_length:
            return
        for p in range(min(left, bound), 0, -1):
            yield from rec(left - p, p, prefix + [p])

    yield from rec(n, n, [])


def double_staircase(n: int) -> Partition:
    """(n-1, n-1, n-2, n-2, ..., 1, 1)."""
    return Partition([k for k in range(n - 1, 0, -1) for _ in range(2)])


def rectangle(rows: int, cols: int) -> Partition:
    return Partition([cols] * rows)


# -- Miwa variables ----------------------------------------------------------


@dataclass(frozen=True)
class MiwaPoint:
    """Alphabet x with sign/inversion convention for its time vector.

    ``t_n = sign * (1/n) * sum_k x_k^{+n}`` (or ``x_k^{-n}`` when ``inverse``),
    which covers both ``t_n`` and ``tbar_n = -(1/n) sum y_k^{-n}``.
    """

    x: tuple
    sign: int = 1
    inverse: bool = False


def miwa_times(p: MiwaPoint | Sequence, K: int) -> tuple:
    if K < 1:
        raise ValueError(f"truncation order must be >= 1, got {K}")
    if not isinstance(p, MiwaPoint):
        p = MiwaPoint(tuple(p))
    xs = [div(1, v) for v in p.x] if p.inverse else list(p.x)
    out = []
    for n in range(1, K + 1):
        s = sum((v**n for v in xs), 0)
        out.append(p.sign * (Fraction(s, n) if is_exact(s) else s / n))
    return tuple(out)


def complete_h_all(t: Sequence, n: int) -> list:
    """[h_0, ..., h_n] of exp(sum_m t_m z^m) via n h_n = sum_m m t_m h_{n-m}."""
    if n > len(t):
        raise TruncationError(f"h_{n} needs t_1..t_{n}, only {len(t)} given")
    h = [1]
    for k in range(1, n + 1):
        acc = sum((m * t[m - 1] * h[k - m] for m in range(1, k + 1)), 0)
        h.append(Fraction(acc, k) if is_exact(acc) else acc / k)
    return h


def complete_h(n: int, t: Sequence):
    if n < 0:
        return 0
    return complete_h_all(t, n)[n]


# -- Schur functions ---------------------------------------------------------


def schur_weyl(x: Sequence, lam: Partition | Sequence[int], tol: float = DEFAULT_TOL):
    """det(x_j^{lambda_i - i + N}) / Delta(x) with N = len(x).

    Vanishes when lambda has more than N parts.
    """
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    n = len(x)
    if lam.length > n:
        return 0
    check_distinct(x, "alphabet entries", tol)
    exps = lam.shifted(n)
    num = det([[xj**e for xj in x] for e in exps])
    return div(num, vandermonde(x))


def schur_jt(t: Sequence, lam: Partition | Sequence[int], N: int | None = None):
    """det(h_{lambda_i - i + j}[t])_{i,j=1..N}; independent of N >= l(lambda)."""
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    if N is None:
        N = lam.length
    if N < lam.length:
        raise ValueError(f"N={N} smaller than length of {lam}")
    if N == 0:
        return 1
    need = lam[0] + N - 1
    if need > len(t):
        raise TruncationError(f"{lam} with N={N} needs t up to t_{need}, have {len(t)}")
    h = complete_h_all(t, need)
    parts = lam.padded(N)

    def hh(k):
        return h[k] if k >= 0 else 0

    return det([[hh(parts[i] - i + j) for j in range(N)] for i in range(N)])


def schur_negated(t: Sequence, mu: Partition | Sequence[int], N: int | None = None):
    """s_mu evaluated at -t."""
    return schur_jt([-v for v in t], mu, N)


def schur(x: Sequence, lam: Partition | Sequence[int]):
    """s_lambda(x) by the Weyl quotient, or Jacobi-Trudi when x has repeats."""
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    try:
        return schur_weyl(x, lam)
    except SingularError:
        pass
    if lam.length > len(x):
        return 0
    if lam.length == 0:
        return 1
    K = lam[0] + lam.length - 1
    return schur_jt(miwa_times(x, K), lam)
