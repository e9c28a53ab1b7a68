"""Six-vertex model with domain-wall boundary conditions.

Rapidities are carried as exponentials (``eu[i] = e^{u_i}``, ``ev[j] =
e^{v_j}``, ``eg = e^{gamma}``), so that with rational exponentials every
Boltzmann weight is rational and the Izergin-Korepin identities become
decidable. The multiplicative variables are ``x_i = eu_i^2``,
``y_j = ev_j^2`` and ``q = 1/eg``.

Lattice conventions: rows are indexed bottom to top, columns left to right.
Horizontal edges carry 'R'/'L' arrows, vertical edges 'U'/'D'. The boundary
arrows point into the lattice on the left and right, out of it on the top
and bottom.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .scalars import (
    DEFAULT_TOL,
    Mode,
    MonomialFit,
    SingularError,
    SizeError,
    check_distinct,
    det,
    div,
    expo,
    fit_monomial,
    is_zero,
    mode_of,
    prod,
    sinh_exp,
    vandermonde,
)
from .symfunc import double_staircase, schur_weyl
from .taufn import CoefficientMatrix, PowerSeriesH, poly_from_roots, toda_diagonal_series

MAX_BRUTEFORCE_N = 5


@dataclass(frozen=True)
class SixVertexParams:
    eu: tuple
    ev: tuple
    eg: object

    def __post_init__(self):
        if len(self.eu) != len(self.ev):
            raise ValueError("need as many row as column rapidities")

    @classmethod
    def from_rapidities(cls, u: Sequence, v: Sequence, gamma) -> SixVertexParams:
        return cls(tuple(expo(a) for a in u), tuple(expo(b) for b in v), expo(gamma))

    @property
    def N(self) -> int:
        return len(self.eu)

    @property
    def mode(self) -> Mode:
        return mode_of([*self.eu, *self.ev, self.eg])

    @property
    def x(self) -> tuple:
        return tuple(w * w for w in self.eu)

    @property
    def y(self) -> tuple:
        return tuple(w * w for w in self.ev)

    @property
    def q(self):
        return div(1, self.eg)

    def with_exponentials(self, point: Sequence) -> SixVertexParams:
        """Same gamma, rapidities replaced by point = (eu..., ev...)."""
        return SixVertexParams(tuple(point[: self.N]), tuple(point[self.N:]), self.eg)

    @property
    def point(self) -> tuple:
        return (*self.eu, *self.ev)

    def is_admissible(self, tol: float = DEFAULT_TOL) -> bool:
        """No pole of the IK formula: sinh(u_i - u_j), sinh(v_i - v_j),
        sinh(u_i - v_j), sinh(u_i - v_j + gamma) and sinh(gamma) nonzero."""
        args = [self.eg]
        n = self.N
        args += [div(self.eu[i], self.eu[j]) for i in range(n) for j in range(i + 1, n)]
        args += [div(self.ev[i], self.ev[j]) for i in range(n) for j in range(i + 1, n)]
        args += [div(a, b) for a in self.eu for b in self.ev]
        args += [div(a, b) * self.eg for a in self.eu for b in self.ev]
        return all(not is_zero(w * w - 1, tol) for w in args) and all(
            not is_zero(w, tol) for w in self.point)

    def fit_admissible(self, scale=2, tol: float = DEFAULT_TOL) -> bool:
        """Admissible, and still so after scaling any one exponential by ``scale``."""
        if not self.is_admissible(tol):
            return False
        for k in range(2 * self.N):
            moved = list(self.point)
            moved[k] = moved[k] * scale
            if not self.with_exponentials(moved).is_admissible(tol):
                return False
        return True


def random_exact_params(N: int, rng: random.Random, max_tries: int = 1000,
                        for_fit: bool = False) -> SixVertexParams:
    """Admissible point with rational exponentials (so x, y, q are squares of rationals).

    ``for_fit`` also rejects points where doubling one exponential hits a pole.
    """
    for _ in range(max_tries):
        def r():
            return Fraction(rng.randint(1, 9), rng.randint(1, 9))
        p = SixVertexParams(tuple(r() for _ in range(N)), tuple(r() for _ in range(N)), r())
        if p.fit_admissible() if for_fit else p.is_admissible():
            return p
    raise SingularError(f"no admissible point after {max_tries} draws")


def random_held_out(p: SixVertexParams, k: int, rng: random.Random,
                    max_tries: int = 1000) -> list[SixVertexParams]:
    """k admissible points sharing gamma (and the mode) with p."""
    out = []
    for _ in range(max_tries):
        if len(out) == k:
            return out
        if p.mode is Mode.EXACT:
            point = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(2 * p.N)]
        else:
            point = [expo(complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.3, 0.3))) for _ in range(2 * p.N)]
        h = p.with_exponentials(point)
        if h.is_admissible(DEFAULT_TOL if p.mode is Mode.EXACT else 1e-6):
            out.append(h)
    raise SingularError(f"no admissible held-out point after {max_tries} draws")


def random_float_params(N: int, rng: random.Random, gamma=None, max_tries: int = 1000) -> SixVertexParams:
    for _ in range(max_tries):
        u = [complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.3, 0.3)) for _ in range(N)]
        v = [complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.3, 0.3)) for _ in range(N)]
        g = gamma if gamma is not None else complex(rng.uniform(0.2, 0.8), rng.uniform(-0.4, 0.4))
        p = SixVertexParams.from_rapidities(u, v, g)
        if p.is_admissible(1e-6):
            return p
    raise SingularError(f"no admissible point after {max_tries} draws")


def random_contraction_params(N: int, rng: random.Random, margin: float = 0.5,
                              max_tries: int = 1000) -> SixVertexParams:
    """FLOAT point with |x_i| < margin * min_j |y_j| * min(1, |q|^2), where the
    Cauchy-kernel series converges geometrically."""
    for _ in range(max_tries):
        p = random_float_params(N, rng)
        p = p.with_exponentials([w * 0.4 for w in p.eu] + [w * 1.5 for w in p.ev])
        bound = margin * min(abs(v) for v in p.y) * min(1.0, abs(p.q) ** 2)
        if p.is_admissible(1e-6) and max(abs(v) for v in p.x) < bound:
            return p
    raise SingularError(f"no contraction point after {max_tries} draws")


# -- weights and brute force ---------------------------------------------------

# (left, right, bottom, top) edge states -> vertex type
VERTEX_TYPES = {
    ("R", "R", "U", "U"): "a", ("L", "L", "D", "D"): "a",
    ("R", "R", "D", "D"): "b", ("L", "L", "U", "U"): "b",
    ("R", "L", "D", "U"): "c", ("L", "R", "U", "D"): "c",
}


def weight(i: int, j: int, kind: str, p: SixVertexParams):
    """a(u_i - v_j) = sinh(u_i - v_j + gamma), b = sinh(u_i - v_j), c = sinh(gamma)."""
    if kind == "a":
        return sinh_exp(div(p.eu[i], p.ev[j]) * p.eg)
    if kind == "b":
        return sinh_exp(div(p.eu[i], p.ev[j]))
    if kind == "c":
        return sinh_exp(p.eg)
    raise ValueError(f"unknown vertex type {kind!r}")


def dwbc_configurations(N: int) -> Iterator[tuple[tuple[str, ...], ...]]:
    """Every ice-rule configuration with DWBC, as an N x N grid of vertex types
    (grid[i][j] for row i from the bottom, column j from the left)."""
    if N > MAX_BRUTEFORCE_N:
        raise SizeError(f"enumeration capped at N = {MAX_BRUTEFORCE_N}")
    outgoing = {}
    for (hl, hr, vb, vt), kind in VERTEX_TYPES.items():
        outgoing.setdefault((hl, vb), []).append((hr, vt, kind))

    def rows(i: int, below: tuple, grid: list):
        if i == N:
            if all(s == "U" for s in below):
                yield tuple(grid)
            return
        for above, types in row_fill(below):
            yield from rows(i + 1, above, grid + [types])

    def row_fill(below: tuple):
        def rec(j: int, left: str, above: list, types: list):
            if j == N:
                if left == "L":
                    yield tuple(above), tuple(types)
                return
            for hr, vt, kind in outgoing.get((left, below[j]), ()):
                yield from rec(j + 1, hr, above + [vt], types + [kind])

        yield from rec(0, "R", [], [])

    yield from rows(0, ("D",) * N, [])


def count_configurations(N: int) -> int:
    return sum(1 for _ in dwbc_configurations(N))


def z_bruteforce(p: SixVertexParams):
    """Sum over all DWBC configurations of the product of vertex weights."""
    n = p.N
    w = {(i, j, k): weight(i, j, k, p) for i in range(n) for j in range(n) for k in "abc"}
    total = 0
    for grid in dwbc_configurations(n):
        total = total + prod(w[i, j, grid[i][j]] for i in range(n) for j in range(n))
    return total


# -- Izergin-Korepin -----------------------------------------------------------


def _a(p, i, j):
    return weight(i, j, "a", p)


def _b(p, i, j):
    return weight(i, j, "b", p)


def ik_determinant(p: SixVertexParams):
    """Z_N from the sinh-form Izergin-Korepin determinant."""
    n = p.N
    den_f = [sinh_exp(div(p.eu[i], p.eu[j])) * sinh_exp(div(p.ev[j], p.ev[i]))
             for i in range(n) for j in range(i + 1, n)]
    num_f = [_a(p, i, j) * _b(p, i, j) for i in range(n) for j in range(n)]
    if any(is_zero(f) for f in den_f + num_f):
        raise SingularError("coinciding rapidities or u_i - v_j in {0, -gamma}")
    den, num = prod(den_f), prod(num_f)
    c = sinh_exp(p.eg)
    m = [[div(c, _a(p, i, j) * _b(p, i, j)) for j in range(n)] for i in range(n)]
    return div(num * det(m), den)


def _ra(p, i, j):
    # x_i q^{-1} - y_j q
    return div(p.x[i], p.q) - p.y[j] * p.q


def _rb(p, i, j):
    return p.x[i] - p.y[j]


def exact_prefactor(p: SixVertexParams):
    """C_N as derived by hand from the sinh -> rational rewrite:
    (-1)^{N(N-1)/2} 2^{-N^2} prod_i eu_i^{1-N} prod_j ev_j^{1-N}.

    Only used as a cross-check of :func:`determine_prefactor`.
    """
    n = p.N
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * div(prod(w ** (1 - n) for w in p.point), 2 ** (n * n))


def ik_rational_core(p: SixVertexParams, form: int = 1):
    """The x, y rational part of Z_N in the chosen rewrite (0, 1 or 2)."""
    n = p.N
    check_distinct(p.x, "x variables")
    check_distinct(p.y, "y variables")
    dd = vandermonde(p.x) * vandermonde(p.y)
    for i in range(n):
        for j in range(n):
            if is_zero(_ra(p, i, j)) or is_zero(_rb(p, i, j)):
                raise SingularError("pole of the rational kernel")
    qq = div(1, p.q) - p.q
    if form == 0:
        full = prod(_ra(p, i, j) * _rb(p, i, j) for i in range(n) for j in range(n))
        m = [[div(qq, _ra(p, i, j) * _rb(p, i, j)) for j in range(n)] for i in range(n)]
        return div(full * det(m), dd)
    if form == 1:
        rowp = [prod(_ra(p, i, k) * _rb(p, i, k) for k in range(n)) for i in range(n)]
        m = [[div(rowp[i], _ra(p, i, j) * _rb(p, i, j)) for j in range(n)] for i in range(n)]
        return div(det(m), dd)
    if form == 2:
        colp = [prod(_ra(p, k, j) * _rb(p, k, j) for k in range(n)) for j in range(n)]
        m = [[div(colp[j], _ra(p, i, j) * _rb(p, i, j)) for j in range(n)] for i in range(n)]
        return div(det(m), dd)
    raise ValueError(f"form must be 0, 1 or 2, got {form}")


def ik_rational(p: SixVertexParams, form: int = 1, prefactor: MonomialFit | None = None):
    """(rational core, monomial prefactor) with core * prefactor = Z_N.

    The prefactor is C_N for form 0 and C_N (q^{-1} - q)^N for forms 1, 2.
    C_N comes from ``prefactor`` (a fit over the exponentials, see
    :func:`determine_prefactor`) or, if omitted, from :func:`exact_prefactor`.
    """
    core = ik_rational_core(p, form)
    c_n = prefactor(p.point) if prefactor is not None else exact_prefactor(p)
    if form != 0:
        c_n = c_n * (div(1, p.q) - p.q) ** p.N
    return core, c_n


def determine_prefactor(p: SixVertexParams, held_out: Sequence[SixVertexParams],
                        form: int = 0, tol: float = DEFAULT_TOL) -> MonomialFit:
    """Fit C_N = const * prod eu_i^{a_i} prod ev_j^{b_j} by scaling one
    exponential at a time around p, then check it on the held-out points.

    Exponents are reported for e^{u}, e^{v}; in x = e^{2u} they are halved.
    """
    if any(h.eg != p.eg for h in held_out):
        raise ValueError("held-out points must share gamma with the base point")
    qfac = 1 if form == 0 else (div(1, p.q) - p.q) ** p.N

    def ratio(point):
        pp = p.with_exponentials(point)
        return div(ik_determinant(pp), ik_rational_core(pp, form) * qfac)

    return fit_monomial(ratio, p.point, [h.point for h in held_out], tol=tol)


def tau1_coefficients(p: SixVertexParams) -> CoefficientMatrix:
    """Rows j: coefficients of f_j(x) = prod_{k != j} (x q^{-1} - y_k q)(x - y_k)."""
    qi = div(1, p.q)
    rows = []
    for j in range(p.N):
        factors = []
        for k in range(p.N):
            if k != j:
                factors += [(-p.y[k] * p.q, qi), (-p.y[k], 1)]
        rows.append(poly_from_roots(factors))
    return CoefficientMatrix(rows)


def tau2_coefficients(p: SixVertexParams) -> CoefficientMatrix:
    """Rows i: coefficients in y of g_i(y) = prod_{k != i} (x_k q^{-1} - y q)(x_k - y)."""
    qi = div(1, p.q)
    rows = []
    for i in range(p.N):
        factors = []
        for k in range(p.N):
            if k != i:
                factors += [(p.x[k] * qi, -p.q), (p.x[k], -1)]
        rows.append(poly_from_roots(factors))
    return CoefficientMatrix(rows)


# -- special points --------------------------------------------------------------

SO_GAMMA = complex(0, -3.141592653589793 / 3)  # q = e^{-gamma} = e^{i pi / 3}


def stroganov_okada_check(p: SixVertexParams, shift_y: bool = True):
    """Z_N / s_lambda(x, y') with lambda the double staircase of length 2N.

    With ``shift_y`` the second alphabet is y' = q^{-2} y, under which the
    ratio is a monomial at q = e^{i pi/3}; ``shift_y=False`` uses y' = y
    literally (not a monomial in this model's rapidity convention).
    """
    lam = double_staircase(p.N)
    ys = [div(v, p.q * p.q) for v in p.y] if shift_y else list(p.y)
    s = schur_weyl([*p.x, *ys], lam)
    if is_zero(s, 1e-14):
        raise SingularError("Schur value vanishes at this sample; resample")
    return ik_determinant(p) / s


def stroganov_okada_fit(N: int, rng: random.Random, points: int = 5,
                        shift_y: bool = True) -> MonomialFit:
    """Monomial x constant fit of the Stroganov-Okada ratio at q = e^{i pi/3}.

    Raises ModelViolationError when the ratio is not a monomial.
    """
    ps = [random_float_params(N, rng, gamma=SO_GAMMA) for _ in range(points + 1)]
    base = ps[0]

    def ratio(point):
        return stroganov_okada_check(base.with_exponentials(point), shift_y)

    return fit_monomial(ratio, base.point, [h.point for h in ps[1:]], scale=2.0, tol=1e-9)


def zj_kernel(q) -> PowerSeriesH:
    """h(z) = 1 / ((1 - q^{-2} z)(1 - z)), h_n = sum_{k<=n} q^{-2k}."""
    r = div(1, q * q)

    def coeff(n):
        return sum((r**k for k in range(n + 1)), 0)

    return PowerSeriesH.from_function(coeff, 0, closed_form=lambda z: div(1, (1 - r * z) * (1 - z)))


def zj_tau(p: SixVertexParams):
    """det(h(x_i / y_j)) / (Delta(x) Delta(1/y)) with the kernel of zj_kernel."""
    n = p.N
    h = zj_kernel(p.q)
    yinv = [div(1, v) for v in p.y]
    m = [[h(p.x[i] * yinv[j]) for j in range(n)] for i in range(n)]
    return div(det(m), vandermonde(p.x) * vandermonde(yinv))


def zj_cauchy_form(p: SixVertexParams, prefactor: MonomialFit | None = None):
    """(tau part, prefactor) of the Cauchy-kernel rewrite of Z_N.

    Prefactor is C_N (q^{-1}-q)^N q^{N(N-1)} prod_{ij}(1 - q^{-2} x_i/y_j)(1 - x_i/y_j)
    prod_{i<j}(-y_i y_j). The q^{N(N-1)} is needed for the product to equal
    the rat-IK0 value.
    """
    n = p.N
    r = div(1, p.q * p.q)
    c_n = prefactor(p.point) if prefactor is not None else exact_prefactor(p)
    kern = prod((1 - r * div(p.x[i], p.y[j])) * (1 - div(p.x[i], p.y[j]))
                for i in range(n) for j in range(n))
    pairs = prod(-p.y[i] * p.y[j] for i in range(n) for j in range(i + 1, n))
    pref = c_n * (div(1, p.q) - p.q) ** n * p.q ** (n * (n - 1)) * kern * pairs
    return zj_tau(p), pref


def zj_series_check(p: SixVertexParams, tol: float = DEFAULT_TOL) -> tuple[object, object, int]:
    """(determinant quotient, truncated Orlov-Shiota series, width used).

    Needs |x_i| < min_j |y_j| * min(1, |q|^2) for convergence.
    """
    h = zj_kernel(p.q)
    value, width = toda_diagonal_series(h, list(p.x), list(p.y), tol=tol * 1e-2)
    return zj_tau(p), value, width
