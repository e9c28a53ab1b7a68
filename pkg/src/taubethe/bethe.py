"""Algebraic Bethe ansatz for the inhomogeneous spin-1/2 XXZ chain.

Operators are dense ``2^N x 2^N`` numpy arrays: ``dtype=object`` holding
Fractions in EXACT mode, ``complex128`` in FLOAT mode. Site 1 is the
leftmost tensor factor and the local basis is (up, down), so basis index 0
is the pseudo-vacuum |0> and index 2^N - 1 the anti-pseudo-vacuum.

As elsewhere in the package, spectral parameters are passed as
exponentials ``w = e^u``; Bethe roots are canonically represented by
``y = e^{2v}``.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .scalars import (
    DEFAULT_TOL,
    Mode,
    MonomialFit,
    SingularError,
    SizeError,
    TauBetheError,
    check_distinct,
    det,
    div,
    expo,
    fit_monomial,
    mode_of,
    prod,
    sinh_exp,
    vandermonde,
)
from .taufn import poly_eval, poly_from_roots

MAX_SITES = 10


class SolverError(TauBetheError, ArithmeticError):
    """Newton iteration failed to reach the requested Bethe residual."""


class DegenerateRootError(TauBetheError, ValueError):
    """Roots collide (v_i = v_j or v_i - v_j = +-gamma) or the Bethe state vanishes."""


@dataclass(frozen=True)
class ChainParams:
    exi: tuple  # e^{xi_l}
    eg: object  # e^{gamma}

    def __post_init__(self):
        if len(self.exi) > MAX_SITES:
            raise SizeError(f"operator size capped at 2^{MAX_SITES}")

    @classmethod
    def from_rapidities(cls, xi: Sequence, gamma) -> ChainParams:
        return cls(tuple(expo(x) for x in xi), expo(gamma))

    @property
    def N(self) -> int:
        return len(self.exi)

    @property
    def mode(self) -> Mode:
        return mode_of([*self.exi, self.eg])

    @property
    def exact(self) -> bool:
        return self.mode is Mode.EXACT

    @property
    def z(self) -> tuple:
        return tuple(w * w for w in self.exi)

    @property
    def q(self):
        return div(1, self.eg)

    @property
    def dim(self) -> int:
        return 2**self.N


def random_exact_chain(N: int, rng: random.Random) -> ChainParams:
    for _ in range(1000):
        exi = tuple(Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(N))
        eg = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        if eg * eg != 1 and len({w * w for w in exi}) == N:
            return ChainParams(exi, eg)
    raise SingularError("no admissible chain parameters")


def random_float_chain(N: int, rng: random.Random) -> ChainParams:
    xi = [complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.2)) for _ in range(N)]
    gamma = complex(rng.uniform(0.3, 0.9), rng.uniform(-0.3, 0.3))
    return ChainParams.from_rapidities(xi, gamma)


# -- local and monodromy matrices ------------------------------------------------


def _array(rows, exact: bool) -> np.ndarray:
    return np.array(rows, dtype=object if exact else complex)


def _eye(dim: int, exact: bool) -> np.ndarray:
    m = np.zeros((dim, dim), dtype=object if exact else complex)
    for k in range(dim):
        m[k, k] = 1
    if exact:
        m[m == 0] = 0  # int zeros are fine with Fractions
    return m


def abc(w_diff, eg):
    """(a, b, c) at spectral difference with exponential w_diff."""
    return sinh_exp(w_diff * eg), sinh_exp(w_diff), sinh_exp(eg)


def local_L(w, p: ChainParams, site: int) -> list[list[np.ndarray]]:
    """2x2 auxiliary matrix of 2x2 spin operators, L(u - xi_site)."""
    a, b, c = abc(div(w, p.exi[site]), p.eg)
    ex = p.exact
    z = 0
    return [
        [_array([[a, z], [z, b]], ex), _array([[z, z], [c, z]], ex)],  # a P+ + b P-, c sigma^-
        [_array([[z, c], [z, z]], ex), _array([[b, z], [z, a]], ex)],  # c sigma^+, b P+ + a P-
    ]


@dataclass(frozen=True)
class TMatrix:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def block(self, i: int, j: int) -> np.ndarray:
        return ((self.A, self.B), (self.C, self.D))[i][j]

    @property
    def trace(self) -> np.ndarray:
        return self.A + self.D


def build_T(w, p: ChainParams) -> TMatrix:
    """T(u) = L^(1)(u - xi_1) ... L^(N)(u - xi_N), blocks A, B, C, D."""
    if p.N > MAX_SITES:
        raise SizeError(f"operator size capped at 2^{MAX_SITES}")
    if p.N == 0:
        one = _eye(1, p.exact)
        zero = one * 0
        return TMatrix(one, zero, zero, one)
    T = local_L(w, p, 0)
    for site in range(1, p.N):
        L = local_L(w, p, site)
        T = [[sum(np.kron(T[i][k], L[k][j]) for k in range(2)) for j in range(2)] for i in range(2)]
    return TMatrix(T[0][0], T[0][1], T[1][0], T[1][1])


def vacuum(p: ChainParams) -> np.ndarray:
    v = np.zeros(p.dim, dtype=object if p.exact else complex)
    v[:] = 0
    v[0] = 1
    return v


def anti_vacuum(p: ChainParams) -> np.ndarray:
    v = vacuum(p)
    v[0], v[-1] = 0, 1
    return v


def alpha(w, p: ChainParams):
    """prod_l sinh(u - xi_l + gamma)."""
    return prod(sinh_exp(div(w, e) * p.eg) for e in p.exi)


def delta(w, p: ChainParams):
    """prod_l sinh(u - xi_l)."""
    return prod(sinh_exp(div(w, e)) for e in p.exi)


def reflection(w, p: ChainParams):
    return div(alpha(w, p), delta(w, p))


def f_fn(w_diff, eg):
    """f(u) = sinh(u + gamma) / sinh(u)."""
    return div(sinh_exp(w_diff * eg), sinh_exp(w_diff))


def g_fn(w_diff, eg):
    """g(u) = sinh(gamma) / sinh(u)."""
    return div(sinh_exp(eg), sinh_exp(w_diff))


def max_abs(m) -> object:
    """Largest entry modulus (exact for object arrays)."""
    arr = np.asarray(m)
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(v) for v in arr.flat)
    return float(np.max(np.abs(arr)))


def _residual(diff, *scales):
    """Exact max-norm in EXACT mode, max-norm relative to the operand scale otherwise."""
    r = max_abs(diff)
    if isinstance(r, float):
        s = max([1.0] + [float(max_abs(m)) for m in scales])
        return r / s
    return r


def r_matrix(wu, wv, p: ChainParams) -> list[list]:
    a, b, c = abc(div(wu, wv), p.eg)
    return [[a, 0, 0, 0], [0, b, c, 0], [0, c, b, 0], [0, 0, 0, a]]


def check_rtt(wu, wv, p: ChainParams):
    """Max-norm of R(u-v)(T(u) x 1)(1 x T(v)) - (1 x T(v))(T(u) x 1)R(u-v)."""
    R = r_matrix(wu, wv, p)
    Tu, Tv = build_T(wu, p), build_T(wv, p)
    # products[(e, f, c, d)] = Tu_{ec} Tv_{fd}; swapped[(b, f, a, e)] = Tv_{bf} Tu_{ae}
    idx = [(0, 0), (0, 1), (1, 0), (1, 1)]
    worst = 0
    scale = []
    for (a, b) in idx:
        for (c, d) in idx:
            lhs = sum(R[2 * a + b][2 * e + f] * (Tu.block(e, c) @ Tv.block(f, d))
                      for (e, f) in idx if R[2 * a + b][2 * e + f] != 0)
            rhs = sum((Tv.block(b, f) @ Tu.block(a, e)) * R[2 * e + f][2 * c + d]
                      for (e, f) in idx if R[2 * e + f][2 * c + d] != 0)
            r = _residual(lhs - rhs, lhs, rhs)
            worst = max(worst, r)
            scale.append(r)
    return worst


def exchange_residuals(wu, wv, p: ChainParams) -> dict[str, object]:
    """Residuals of the bilinear relations encoded in RTT = TTR.

    AB: A(u)B(v) = f(v-u) B(v)A(u) - g(v-u) B(u)A(v)
    DB: D(u)B(v) = f(u-v) B(v)D(u) - g(u-v) B(u)D(v)
    CB: [C(u), B(v)] = g(u-v) (A(v)D(u) - A(u)D(v))
    plus [X(u), X(v)] = 0 for X in A, B, C, D and the transfer matrix.
    """
    Tu, Tv = build_T(wu, p), build_T(wv, p)
    uv, vu = div(wu, wv), div(wv, wu)
    f, g = (lambda w: f_fn(w, p.eg)), (lambda w: g_fn(w, p.eg))
    out = {}

    def put(name, lhs, rhs):
        out[name] = _residual(lhs - rhs, lhs, rhs)

    put("AB", Tu.A @ Tv.B, f(vu) * (Tv.B @ Tu.A) - g(vu) * (Tu.B @ Tv.A))
    put("DB", Tu.D @ Tv.B, f(uv) * (Tv.B @ Tu.D) - g(uv) * (Tu.B @ Tv.D))
    put("CB", Tu.C @ Tv.B - Tv.B @ Tu.C, g(uv) * (Tv.A @ Tu.D - Tu.A @ Tv.D))
    for name in "ABCD":
        X, Y = getattr(Tu, name), getattr(Tv, name)
        put(f"[{name},{name}]", X @ Y, Y @ X)
    put("[T,T]", Tu.trace @ Tv.trace, Tv.trace @ Tu.trace)
    return out


def vacuum_residuals(w, p: ChainParams) -> dict[str, object]:
    """<0|B = 0, C|0> = 0, A|0> = alpha|0>, D|0> = delta|0>, <0|A = alpha<0|, <0|D = delta<0|."""
    T = build_T(w, p)
    e0 = vacuum(p)
    al, de = alpha(w, p), delta(w, p)
    zero = e0 * 0
    out = {}
    for name, lhs, rhs in [
        ("<0|B", e0 @ T.B, zero), ("C|0>", T.C @ e0, zero),
        ("A|0>", T.A @ e0, al * e0), ("D|0>", T.D @ e0, de * e0),
        ("<0|A", e0 @ T.A, al * e0), ("<0|D", e0 @ T.D, de * e0),
    ]:
        out[name] = _residual(lhs - rhs, lhs, rhs)
    return out


def magnon_number(index: int) -> int:
    """Number of down spins in a basis state."""
    return bin(index).count("1")


def b_lowers_spin(T: TMatrix) -> bool:
    """Every nonzero B[r, c] maps c's k-magnon sector into k+1 magnons."""
    rows, cols = np.nonzero(np.asarray(T.B != 0))
    return all(magnon_number(r) == magnon_number(c) + 1 for r, c in zip(rows, cols))


# -- Bethe roots -------------------------------------------------------------------


@dataclass(frozen=True)
class BetheRoots:
    """Magnon rapidities as y_i = e^{2 v_i}; ``ev`` are principal square roots."""

    y: tuple
    residual: float = field(default=0.0, compare=False)

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def ev(self) -> tuple:
        return tuple(cmath.sqrt(v) for v in self.y)


def bethe_lhs(ev: Sequence, p: ChainParams) -> list:
    """r(v_i) prod_{j != i} sinh(v_i - v_j - gamma) / sinh(v_i - v_j + gamma)."""
    out = []
    for i, wi in enumerate(ev):
        val = reflection(wi, p)
        for j, wj in enumerate(ev):
            if j != i:
                d = div(wi, wj)
                val = val * div(sinh_exp(div(d, p.eg)), sinh_exp(d * p.eg))
        out.append(val)
    return out


def bethe_residual(ev: Sequence, p: ChainParams) -> float:
    return max((abs(v - 1) for v in bethe_lhs(ev, p)), default=0.0)


def _bethe_poly(y: np.ndarray, z, q):
    """P_i(y) = prod_l (y_i/q - q z_l) prod_{j!=i}(q y_i - y_j/q)
              - prod_l (y_i - z_l) prod_{j!=i}(y_i/q - q y_j), with Jacobian."""
    n = len(y)
    P = np.zeros(n, dtype=complex)
    J = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for sign, fac_z, cy_i, cy_j in ((1, lambda yi, zl: yi / q - q * zl, q, -1 / q),
                                        (-1, lambda yi, zl: yi - zl, 1 / q, -q)):
            zfac = [fac_z(y[i], zl) for zl in z]
            dz = [1 / q if sign == 1 else 1 for _ in z]
            jfac = [(j, cy_i * y[i] + cy_j * y[j]) for j in range(n) if j != i]
            factors = zfac + [v for _, v in jfac]
            total = prod(factors)
            P[i] += sign * total
            # d/dy_i: every factor depends on y_i
            dfi = dz + [cy_i] * len(jfac)
            for k in range(len(factors)):
                others = prod(factors[:k] + factors[k + 1:])
                J[i, i] += sign * dfi[k] * others
            # d/dy_j: only the (i, j) factor
            for k, (j, _) in enumerate(jfac):
                pos = len(zfac) + k
                others = prod(factors[:pos] + factors[pos + 1:])
                J[i, j] += sign * cy_j * others
    return P, J


def _roots_admissible(y, q, tol=1e-6) -> bool:
    n = len(y)
    if any(abs(v) < tol for v in y):
        return False
    for i in range(n):
        for j in range(i + 1, n):
            scale = max(abs(y[i]), abs(y[j]))
            for c in (1, q * q, 1 / (q * q)):
                if abs(y[i] - c * y[j]) <= tol * scale:
                    return False
    return True


def _newton(y0, p: ChainParams, max_iter: int = 100):
    z = [complex(v) for v in p.z]
    q = complex(p.q)
    y = np.array(y0, dtype=complex)
    for _ in range(max_iter):
        P, J = _bethe_poly(y, z, q)
        try:
            step = np.linalg.solve(J, P)
        except np.linalg.LinAlgError:
            return None
        y = y - step
        if not np.all(np.isfinite(y)):
            return None
        if np.max(np.abs(step)) <= 1e-15 * max(1.0, np.max(np.abs(y))):
            break
    return y


def canonical_key(y: Sequence, digits: int = 8) -> tuple:
    return tuple(sorted((round(v.real, digits), round(v.imag, digits)) for v in y))


def _random_start(rng: random.Random, n: int) -> list:
    # unit-modulus annulus, radius in [1/2, 2]
    return [cmath.rect(rng.uniform(0.5, 2.0), rng.uniform(-cmath.pi, cmath.pi)) for _ in range(n)]


def _solve(p: ChainParams, n: int, starts, tol: float) -> tuple[dict, int]:
    q = complex(p.q)
    found: dict[tuple, BetheRoots] = {}
    collisions = 0
    for y0 in starts:
        y = _newton(y0, p)
        if y is None:
            continue
        roots = [complex(v) for v in y]
        if not _roots_admissible(roots, q):
            collisions += 1
            continue
        res = bethe_residual([cmath.sqrt(v) for v in roots], p)
        if res <= tol:
            key = canonical_key(roots)
            if key not in found:
                found[key] = BetheRoots(tuple(sorted(roots, key=lambda v: (v.real, v.imag))), res)
    return found, collisions


def _check_solve_args(p: ChainParams, n: int):
    if p.exact:
        raise ValueError("Bethe roots are solved in FLOAT mode")
    if not 0 <= n <= p.N:
        raise ValueError(f"need 0 <= n <= N = {p.N}, got {n}")


def solve_bethe_all(p: ChainParams, n: int, starts: int = 40, rng: random.Random | None = None,
                    tol: float = 1e-12) -> list[BetheRoots]:
    """Distinct admissible solutions found by multi-start Newton, sorted canonically."""
    _check_solve_args(p, n)
    if n == 0:
        return [BetheRoots(())]
    rng = rng or random.Random(0)
    found, _ = _solve(p, n, [_random_start(rng, n) for _ in range(starts)], tol)
    return [found[k] for k in sorted(found)]


def solve_bethe(p: ChainParams, n: int, seeds: int | Sequence = 40, rng: random.Random | None = None,
                tol: float = 1e-12) -> BetheRoots:
    """One admissible Bethe root set with residual <= tol (canonically the first found).

    ``seeds`` is either a number of random starts or an explicit list of
    starting y-vectors.
    """
    _check_solve_args(p, n)
    if n == 0:
        return BetheRoots(())
    if isinstance(seeds, int):
        rng = rng or random.Random(0)
        starts = [_random_start(rng, n) for _ in range(seeds)]
    else:
        starts = [list(s) for s in seeds]
    found, collisions = _solve(p, n, starts, tol)
    if found:
        return found[min(found)]
    if collisions:
        raise DegenerateRootError(f"{collisions} of {len(starts)} starts converged to colliding roots")
    raise SolverError(f"no {n}-magnon root set with residual <= {tol:g} from {len(starts)} starts")


# -- Bethe states and eigenvalues --------------------------------------------------


def apply_B(ev: Sequence, p: ChainParams, state=None) -> np.ndarray:
    """prod_i B(v_i) |state> (default the pseudo-vacuum)."""
    psi = vacuum(p) if state is None else state
    for w in ev:
        psi = build_T(w, p).B @ psi
    return psi


def transfer_eigenvalue(w, ev: Sequence, p: ChainParams):
    """alpha(u) prod f(v_i - u) + delta(u) prod f(u - v_i)."""
    return (alpha(w, p) * prod(f_fn(div(v, w), p.eg) for v in ev)
            + delta(w, p) * prod(f_fn(div(w, v), p.eg) for v in ev))


def eigen_check(roots: BetheRoots, w, p: ChainParams) -> float:
    """|| T(u) psi - Lambda(u) psi || / || psi || for psi = prod B(v_i)|0>."""
    psi = apply_B(roots.ev, p)
    norm = float(np.linalg.norm(psi.astype(complex)))
    if norm < 1e-300:
        raise DegenerateRootError("Bethe state vanishes")
    lam = transfer_eigenvalue(w, roots.ev, p)
    diff = build_T(w, p).trace @ psi - lam * psi
    return float(np.linalg.norm(diff.astype(complex))) / norm


# -- scalar products ----------------------------------------------------------------


def scalar_product_direct(wu: Sequence, wv: Sequence, p: ChainParams):
    """<0| prod C(u_i) prod B(v_i) |0> by explicit operator products."""
    if len(wu) != len(wv):
        raise ValueError("need as many u as v")
    psi = apply_B(wv, p)
    bra = vacuum(p)
    for w in wu:
        bra = bra @ build_T(w, p).C
    return bra @ psi


def _sh(x):
    return sinh_exp(x)


def slavnov_h(wu: Sequence, wv: Sequence, p: ChainParams, printed_index: bool = False):
    """Slavnov determinant with the H-kernel.

    The product inside H_ij runs over k != j, which is what dividing row i
    of the K-kernel by delta(u_i) prod_k sinh(u_i - v_k + gamma) produces.
    ``printed_index=True`` uses k != i instead; that variant agrees only for n = 1.
    """
    n = len(wu)
    eg = p.eg
    pre_num = prod(delta(a, p) * delta(b, p) for a, b in zip(wu, wv))
    pre_num = pre_num * prod(_sh(div(a, b) * eg) for a in wu for b in wv)
    pre_den = prod(_sh(div(wu[i], wu[j])) * _sh(div(wv[j], wv[i]))
                   for i in range(n) for j in range(i + 1, n))
    H = []
    for i, a in enumerate(wu):
        row = []
        for j, b in enumerate(wv):
            skip = i if printed_index else j
            prodk = prod(div(_sh(div(div(a, wv[k]), eg)), _sh(div(a, wv[k]) * eg))
                         for k in range(n) if k != skip)
            bracket = 1 - reflection(a, p) * prodk
            row.append(div(_sh(eg), _sh(div(a, b) * eg) * _sh(div(a, b))) * bracket)
        H.append(row)
    return div(pre_num * det(H), pre_den)


def slavnov_k(wu: Sequence, wv: Sequence, p: ChainParams):
    """Slavnov determinant with the K-kernel."""
    n = len(wu)
    eg = p.eg
    pre_num = _sh(eg) ** n * prod(delta(b, p) for b in wv)
    pre_den = prod(_sh(div(wu[i], wu[j])) * _sh(div(wv[j], wv[i]))
                   for i in range(n) for j in range(i + 1, n))
    K = []
    for a in wu:
        row = []
        for j, b in enumerate(wv):
            plus = prod(_sh(div(a, wv[k]) * eg) for k in range(n) if k != j)
            minus = prod(_sh(div(div(a, wv[k]), eg)) for k in range(n) if k != j)
            row.append(div(delta(a, p) * plus - alpha(a, p) * minus, _sh(div(a, b))))
        K.append(row)
    return div(pre_num * det(K), pre_den)


# -- almost rational form -----------------------------------------------------------


def fj_numerator(j: int, y: Sequence, p: ChainParams) -> list:
    """Coefficients in x of
    prod_l (x - z_l) prod_{k!=j} (x/q - q y_k) - prod_l (x/q - q z_l) prod_{k!=j} (q x - y_k/q)."""
    q = p.q
    qi = div(1, q)
    others = [yk for k, yk in enumerate(y) if k != j]
    left = poly_from_roots([(-zl, 1) for zl in p.z] + [(-q * yk, qi) for yk in others])
    right = poly_from_roots([(-q * zl, qi) for zl in p.z] + [(-qi * yk, q) for yk in others])
    return [a - b for a, b in zip(left, right)]


def fj_value(j: int, x, y: Sequence, p: ChainParams):
    """f_j(x) = numerator / (x - y_j), evaluated as a rational function."""
    return div(poly_eval(fj_numerator(j, y, p), x), x - y[j])


def synthetic_division(coeffs: Sequence, root) -> tuple[list, object]:
    """Divide sum c_l x^l by (x - root); returns (quotient coefficients, remainder)."""
    high = list(reversed(coeffs))
    out = [high[0]]
    for c in high[1:]:
        out.append(c + root * out[-1])
    remainder = out.pop()
    return list(reversed(out)), remainder


@dataclass(frozen=True)
class FjReport:
    j: int
    residual: float  # |numerator(y_j)| relative to the size of its two terms
    quotient: tuple
    remainder: object

    @property
    def degree(self) -> int:
        return len(self.quotient) - 1


def fj_polynomiality(roots: BetheRoots | Sequence, p: ChainParams, j: int) -> FjReport:
    y = list(roots.y if isinstance(roots, BetheRoots) else roots)
    num = fj_numerator(j, y, p)
    quotient, rem = synthetic_division(num, y[j])
    # scale: the two products whose difference the numerator is
    q, yj = p.q, y[j]
    t1 = prod(yj - zl for zl in p.z) * prod(div(yj, q) - q * yk for k, yk in enumerate(y) if k != j)
    t2 = prod(div(yj, q) - q * zl for zl in p.z) * prod(q * yj - div(yk, q) for k, yk in enumerate(y) if k != j)
    scale = abs(t1) + abs(t2)
    residual = float(abs(rem) / scale) if scale else float(abs(rem))
    return FjReport(j, residual, tuple(quotient), rem)


def slavnov_rational_core(wu: Sequence, wv: Sequence, p: ChainParams):
    """sinh^n(gamma) prod delta(v_i) / Delta(y) * det(f_j(x_i)) / Delta(x), without C_n."""
    n = len(wu)
    x = [w * w for w in wu]
    y = [w * w for w in wv]
    check_distinct(x, "x = e^{2u}")
    check_distinct(y, "y = e^{2v}")
    m = [[fj_value(j, xi, y, p) for j in range(n)] for xi in x]
    pre = sinh_exp(p.eg) ** n * prod(delta(w, p) for w in wv)
    return div(pre * det(m), vandermonde(y) * vandermonde(x))


def fit_slavnov_prefactor(wu: Sequence, wv: Sequence, p: ChainParams,
                          held_out: Sequence[Sequence] = (), tol: float = DEFAULT_TOL) -> MonomialFit:
    """Fit C_n = K-form / rational core as a monomial in (e^{u_i}, e^{v_i}).

    The rewrite is algebraic, so the fit may use any admissible v, Bethe or not.
    Points are (e^{u_1}, ..., e^{u_n}, e^{v_1}, ..., e^{v_n}).
    """
    n = len(wu)

    def ratio(point):
        a, b = list(point[:n]), list(point[n:])
        return div(slavnov_k(a, b, p), slavnov_rational_core(a, b, p))

    return fit_monomial(ratio, [*wu, *wv], held_out, tol=tol)


def slavnov_c_closed_form(wu: Sequence, wv: Sequence, p: ChainParams):
    """Hand-derived C_n, used only to cross-check the fit."""
    n, N = len(wu), p.N
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return (sign * div(1, 2) ** (n * (N - 1)) * prod(w ** (1 - N) for w in wu)
            * prod(wv) * prod(div(1, e) ** n for e in p.exi))


def slavnov(wu: Sequence, roots: BetheRoots | Sequence, p: ChainParams, form: str = "K",
            prefactor: MonomialFit | None = None, tol: float = 1e-10):
    """Scalar product <0| prod C(u_i) prod B(v_i) |0> from the Slavnov determinant.

    ``roots`` must solve the Bethe equations (checked against ``tol``). Form
    "rational" needs the C_n fit, computed here at shifted non-Bethe points
    when ``prefactor`` is not supplied.
    """
    wv = list(roots.ev if isinstance(roots, BetheRoots) else roots)
    if len(wu) != len(wv):
        raise ValueError("need as many u as v")
    if not p.exact:
        res = bethe_residual(wv, p)
        if res > tol:
            raise DegenerateRootError(f"v is not on shell: Bethe residual {res:.3g}")
    if form == "H":
        return slavnov_h(wu, wv, p)
    if form == "K":
        return slavnov_k(wu, wv, p)
    if form != "rational":
        raise ValueError(f"unknown form {form!r}")
    if prefactor is None:
        rng = random.Random(len(wu))
        base = [w * expo(complex(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2))) for w in [*wu, *wv]]
        held = [[w * expo(complex(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2))) for w in base]
                for _ in range(3)]
        prefactor = fit_slavnov_prefactor(base[:len(wu)], base[len(wu):], p, held)
    return prefactor([*wu, *wv]) * slavnov_rational_core(wu, wv, p)


# -- domain-wall bridge -----------------------------------------------------------------


@dataclass(frozen=True)
class DomainWallReport:
    coefficient: object  # <0bar| prod B(u_i) |0>
    dual_coefficient: object  # <0| prod C(u_i) |0bar>
    z: object  # Izergin-Korepin determinant at (u, xi)
    leak: object  # largest component off |0bar> (or <0bar|)
    deviation: object  # max of leak and both coefficient mismatches


def domain_wall_identity(wu: Sequence, p: ChainParams) -> DomainWallReport:
    """prod B(u_i)|0> = Z_N(u, xi)|0bar> and <0| prod C(u_i) = Z_N(u, xi)<0bar|."""
    from .sixvertex import SixVertexParams, ik_determinant

    if len(wu) != p.N:
        raise ValueError(f"need N = {p.N} spectral parameters, got {len(wu)}")
    psi = apply_B(wu, p)
    bra = vacuum(p)
    for w in wu:
        bra = bra @ build_T(w, p).C
    z = ik_determinant(SixVertexParams(tuple(wu), tuple(p.exi), p.eg))
    coef, dual = psi[-1], bra[-1]
    leak = max(max_abs(psi[:-1]), max_abs(bra[:-1])) if p.N else 0
    dev = max(leak, abs(coef - z), abs(dual - z))
    if not p.exact:
        dev = float(dev) / max(1.0, abs(z))
    return DomainWallReport(coef, dual, z, leak, dev)
