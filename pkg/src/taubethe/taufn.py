"""KP, 2-component KP and diagonal Toda tau functions in Miwa variables.

Every infinite object is truncated explicitly: coefficient matrices have a
finite column count ``L`` (so ``f_i`` are polynomials of degree < L) and
power series carry their truncation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .scalars import (
    DEFAULT_TOL,
    ConvergenceError,
    DimensionError,
    SingularError,
    TruncationError,
    check_distinct,
    det,
    div,
    is_zero,
    prod,
    vandermonde,
)
from .symfunc import Partition, partitions_in_box, schur_weyl


def poly_eval(coeffs: Sequence, x):
    """sum_l coeffs[l] x^l (Horner)."""
    out = 0
    for c in reversed(coeffs):
        out = out * x + c
    return out


def poly_mul(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return out


def poly_from_roots(factors: Sequence[tuple]) -> list:
    """Product of linear factors given as (c0, c1) meaning c0 + c1 x."""
    out = [1]
    for c0, c1 in factors:
        out = poly_mul(out, [c0, c1])
    return out


@dataclass(frozen=True)
class CoefficientMatrix:
    """Rows are coefficient lists of the polynomials f_i(x) = sum_l f_{il} x^l."""

    rows: tuple[tuple, ...]

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(r) for r in rows)
        if not rows:
            raise DimensionError("coefficient matrix needs at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged coefficient matrix")
        object.__setattr__(self, "rows", rows)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    def column(self, l: int) -> list:
        # columns past the degree bound are identically zero
        if l >= self.n_cols:
            return [0] * self.n_rows
        return [r[l] for r in self.rows]

    def f(self, i: int, x):
        return poly_eval(self.rows[i], x)


def kp_tau(F: CoefficientMatrix, x: Sequence, tol: float = DEFAULT_TOL):
    """det(f_i(x_j)) / Delta(x)."""
    if len(x) != F.n_rows:
        raise DimensionError(f"need {F.n_rows} Miwa variables, got {len(x)}")
    check_distinct(x, "Miwa variables", tol)
    m = [[F.f(i, xj) for xj in x] for i in range(F.n_rows)]
    return div(det(m), vandermonde(x))


def plucker_coeff(F: CoefficientMatrix, lam: Partition | Sequence[int], strict: bool = False):
    """c_lambda = det(f_{i, l_j}) with l_j = lambda_j - j + N.

    Columns at or beyond the degree bound are zero, so c_lambda = 0 there;
    with ``strict`` such a request raises TruncationError instead.
    """
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    N = F.n_rows
    if lam.length > N:
        return 0
    cols = lam.shifted(N)
    if cols[0] >= F.n_cols:
        if strict:
            raise TruncationError(f"{lam} needs column {cols[0]}, matrix has {F.n_cols}")
        return 0
    return det([[F.rows[i][l] for l in cols] for i in range(N)])


def plucker_coords(F: CoefficientMatrix) -> dict[Partition, object]:
    """All possibly nonzero c_lambda, lambda inside ((L-N)^N)."""
    N, L = F.n_rows, F.n_cols
    return {lam: plucker_coeff(F, lam) for lam in partitions_in_box(N, max(L - N, 0))}


def schur_expand_kp(F: CoefficientMatrix, x: Sequence):
    """sum_lambda c_lambda s_lambda(x) over the finite support of c."""
    if len(x) != F.n_rows:
        raise DimensionError(f"need {F.n_rows} Miwa variables, got {len(x)}")
    total = 0
    for lam, c in plucker_coords(F).items():
        if c != 0:
            total = total + c * schur_weyl(x, lam)
    return total


# Gr(2,4): p01 p23 - p02 p13 + p03 p12 = 0, with p_{ab} <-> c_lambda through
# (l1, l2) = (b, a), lambda = (b - 1, a).
GR24_RELATION: tuple[tuple[int, Partition, Partition], ...] = (
    (1, Partition([]), Partition([2, 2])),
    (-1, Partition([1]), Partition([2, 1])),
    (1, Partition([2]), Partition([1, 1])),
)


def gr24_residual(coords: Mapping[Partition, object]):
    """Quadratic Plucker residual on the six coordinates lambda in (2,2)."""
    return sum((s * coords.get(a, 0) * coords.get(b, 0) for s, a, b in GR24_RELATION), 0)


def plucker_relation_residual(F: CoefficientMatrix):
    if F.n_rows != 2 or F.n_cols != 4:
        raise ValueError(f"built-in relation is for 2x4 matrices, got {F.n_rows}x{F.n_cols}")
    return gr24_residual(plucker_coords(F))


# -- 2-component KP ----------------------------------------------------------


def two_kp_tau(F: CoefficientMatrix, G: CoefficientMatrix, x: Sequence, y: Sequence,
               tol: float = DEFAULT_TOL):
    """det(f_i(x_j) | g_i(y_k)) / (Delta(x) Delta(y))."""
    M, N = len(x), len(y)
    if F.n_rows != M + N or G.n_rows != M + N:
        raise DimensionError(f"blocks need {M + N} rows, got {F.n_rows} and {G.n_rows}")
    check_distinct(x, "x variables", tol)
    check_distinct(y, "y variables", tol)
    m = [[F.f(i, xj) for xj in x] + [G.f(i, yk) for yk in y] for i in range(M + N)]
    return div(det(m), vandermonde(x) * vandermonde(y))


def two_kp_coeff(F: CoefficientMatrix, G: CoefficientMatrix, lam: Partition, mu: Partition,
                 M: int, N: int):
    """c_{lambda mu} = det(f_{i, l_j} | g_{i, m_k})."""
    if lam.length > M or mu.length > N:
        return 0
    lcols, mcols = lam.shifted(M), mu.shifted(N)
    if (M and lcols[0] >= F.n_cols) or (N and mcols[0] >= G.n_cols):
        return 0
    m = [[F.rows[i][l] for l in lcols] + [G.rows[i][k] for k in mcols] for i in range(M + N)]
    return det(m)


def two_kp_expansion(F: CoefficientMatrix, G: CoefficientMatrix, x: Sequence, y: Sequence):
    """sum_{lambda, mu} c_{lambda mu} s_lambda(x) s_mu(y)."""
    M, N = len(x), len(y)
    total = 0
    for lam in partitions_in_box(M, max(F.n_cols - M, 0)):
        for mu in partitions_in_box(N, max(G.n_cols - N, 0)):
            c = two_kp_coeff(F, G, lam, mu, M, N)
            if c != 0:
                total = total + c * schur_weyl(x, lam) * schur_weyl(y, mu)
    return total


# -- diagonal Toda / Orlov-Shiota ----------------------------------------------


@dataclass(frozen=True)
class PowerSeriesH:
    """Truncated series h(z) = sum_n h_n z^n.

    ``coeff_fn`` (n -> h_n) lets the truncation be extended; ``closed_form``
    evaluates h(z) exactly when the series does not terminate.
    """

    coeffs: tuple
    coeff_fn: Callable[[int], object] | None = field(default=None, compare=False)
    closed_form: Callable[[object], object] | None = field(default=None, compare=False)

    @classmethod
    def polynomial(cls, coeffs: Sequence) -> PowerSeriesH:
        return cls(tuple(coeffs))

    @classmethod
    def from_function(cls, coeff_fn, order: int, closed_form=None) -> PowerSeriesH:
        return cls(tuple(coeff_fn(n) for n in range(order + 1)), coeff_fn, closed_form)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def nondegenerate(self) -> bool:
        return all(c != 0 for c in self.coeffs)

    @property
    def is_polynomial(self) -> bool:
        return self.coeff_fn is None and self.closed_form is None

    def coefficient(self, n: int):
        if n < 0:
            return 0
        if n < len(self.coeffs):
            return self.coeffs[n]
        if self.coeff_fn is not None:
            return self.coeff_fn(n)
        if self.is_polynomial:
            return 0
        raise TruncationError(f"h_{n} beyond truncation order {self.order}")

    def shifted(self) -> PowerSeriesH:
        """h'(z) with h'_n = h_{n+1}."""
        fn = self.coeff_fn
        return PowerSeriesH(self.coeffs[1:], (lambda n: fn(n + 1)) if fn else None)

    def __call__(self, z):
        if self.closed_form is not None:
            return self.closed_form(z)
        return poly_eval(self.coeffs, z)


def diagonal_coefficient(h: PowerSeriesH, lam: Partition, s: int):
    """c_{s,lambda} = prod_{i=1}^{s} h_{lambda_i - i + s}."""
    return prod(h.coefficient(l) for l in lam.shifted(s))


def _check_toda_args(x, y, tol):
    if len(x) != len(y):
        raise DimensionError(f"|x| = {len(x)} but |y| = {len(y)}")
    if any(is_zero(v) for v in y):
        raise SingularError("y entries must be nonzero")
    check_distinct(x, "x variables", tol)
    check_distinct(y, "y variables", tol)


def toda_diagonal_tau(h: PowerSeriesH, x: Sequence, y: Sequence, tol: float = DEFAULT_TOL):
    """det(h(x_i / y_j)) / (Delta(x) Delta(1/y))."""
    _check_toda_args(x, y, tol)
    yinv = [div(1, v) for v in y]
    m = [[h(xi * yj) for yj in yinv] for xi in x]
    return div(det(m), vandermonde(x) * vandermonde(yinv))


def toda_diagonal_expansion(h: PowerSeriesH, x: Sequence, y: Sequence, box: int | None = None):
    """sum over lambda in (box^N) of c_lambda s_lambda(x) s_lambda(1/y).

    For a polynomial h of degree L the default box L - N + 1 makes the sum
    exact.
    """
    N = len(x)
    _check_toda_args(x, y, 0.0)
    if box is None:
        if not h.is_polynomial:
            raise TruncationError("non-polynomial h needs an explicit box or toda_diagonal_series")
        box = h.order - N + 1
    yinv = [div(1, v) for v in y]
    total = 0
    for lam in partitions_in_box(N, max(box, 0)) if box >= 0 else ():
        c = diagonal_coefficient(h, lam, N)
        if c != 0:
            total = total + c * schur_weyl(x, lam) * schur_weyl(yinv, lam)
    return total


def toda_diagonal_series(h: PowerSeriesH, x: Sequence, y: Sequence, tol: float = DEFAULT_TOL,
                         max_width: int = 200) -> tuple[object, int]:
    """Partial sums over lambda_1 <= w, w = 0, 1, ... until the shell
    ``lambda_1 == w`` contributes less than tol (relative). Returns
    (value, width used). Stops after two consecutive negligible shells. FLOAT mode; the series must converge at (x, y).
    """
    N = len(x)
    _check_toda_args(x, y, tol)
    yinv = [div(1, v) for v in y]
    total = 0
    quiet = 0
    for w in range(max_width + 1):
        shell = 0
        for lam in partitions_in_box(N, w):
            if lam[0] != w:
                continue
            shell = shell + diagonal_coefficient(h, lam, N) * schur_weyl(x, lam) * schur_weyl(yinv, lam)
        total = total + shell
        # two consecutive negligible shells, so an accidental zero cannot stop it
        quiet = quiet + 1 if abs(shell) <= tol * max(1.0, abs(total)) else 0
        if quiet == 2:
            return total, w
    raise ConvergenceError(f"series not converged within width {max_width}")
