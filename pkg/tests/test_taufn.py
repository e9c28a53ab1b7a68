from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cofactor_det, ssyt_schur
from taubethe.scalars import ConvergenceError, DimensionError, TruncationError
from taubethe.symfunc import Partition, partitions_in_box
from taubethe.taufn import (
    GR24_RELATION,
    CoefficientMatrix,
    PowerSeriesH,
    diagonal_coefficient,
    gr24_residual,
    kp_tau,
    plucker_coeff,
    plucker_coords,
    plucker_relation_residual,
    poly_eval,
    poly_from_roots,
    schur_expand_kp,
    toda_diagonal_expansion,
    toda_diagonal_series,
    toda_diagonal_tau,
    two_kp_coeff,
    two_kp_expansion,
    two_kp_tau,
)


def rfrac(rng):
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def rmatrix(rng, rows, cols):
    return CoefficientMatrix([[rfrac(rng) for _ in range(cols)] for _ in range(rows)])


def ralphabet(rng, n):
    while True:
        x = [rfrac(rng) for _ in range(n)]
        if len(set(x)) == n:
            return x


def test_poly_helpers():
    assert poly_eval([1, 2, 3], 2) == 17
    assert poly_from_roots([(-1, 1), (-2, 1)]) == [2, -3, 1]


def test_kp_tau_identity_matrix():
    # f_1 = x, f_2 = 1: det is exactly Delta(x)
    F = CoefficientMatrix([[0, 1], [1, 0]])
    assert kp_tau(F, [Fraction(2), Fraction(5)]) == 1


def test_kp_tau_dimension_check():
    F = CoefficientMatrix([[1, 2, 3], [0, 1, 0]])
    with pytest.raises(DimensionError):
        kp_tau(F, [1])


def test_plucker_coeff_is_minor():
    rng = random.Random(1)
    F = rmatrix(rng, 3, 6)
    lam = Partition([2, 1])
    cols = lam.shifted(3)
    assert plucker_coeff(F, lam) == cofactor_det([[F.rows[i][c] for c in cols] for i in range(3)])
    assert plucker_coeff(F, [4, 0, 0]) == 0
    with pytest.raises(TruncationError):
        plucker_coeff(F, [4], strict=True)


@pytest.mark.parametrize("N,L", [(1, 3), (2, 4), (2, 6), (3, 5), (3, 6)])
def test_cauchy_binet_exact(N, L):
    rng = random.Random(N * 10 + L)
    for _ in range(5):
        F = rmatrix(rng, N, L)
        x = ralphabet(rng, N)
        assert kp_tau(F, x) == schur_expand_kp(F, x)


def test_cauchy_binet_against_tableaux():
    # schur_expand_kp rebuilt with the tableau oracle
    rng = random.Random(5)
    F = rmatrix(rng, 2, 5)
    x = ralphabet(rng, 2)
    total = sum(c * ssyt_schur(x, lam) for lam, c in plucker_coords(F).items())
    assert kp_tau(F, x) == total


def test_gr24_relation_is_the_only_quadric():
    """Derive the quadratic relations among the six 2x4 minors from data."""
    rng = random.Random(11)
    shapes = list(partitions_in_box(2, 2))
    pairs = list(itertools.combinations_with_replacement(range(6), 2))
    rows = []
    for _ in range(30):
        c = plucker_coords(rmatrix(rng, 2, 4))
        v = [c[s] for s in shapes]
        rows.append([sympy.Rational(v[a] * v[b]) for a, b in pairs])
    null = sympy.Matrix(rows).nullspace()
    assert len(null) == 1
    derived = {pairs[k]: null[0][k] for k in range(len(pairs)) if null[0][k] != 0}
    ours = {}
    for s, a, b in GR24_RELATION:
        key = tuple(sorted((shapes.index(a), shapes.index(b))))
        ours[key] = s
    assert set(derived) == set(ours)
    ratio = {derived[k] / ours[k] for k in ours}
    assert len(ratio) == 1


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=9), min_size=8, max_size=8))
def test_plucker_relation_vanishes(entries):
    F = CoefficientMatrix([entries[:4], entries[4:]])
    assert plucker_relation_residual(F) == 0


def test_plucker_relation_detects_non_grassmannian_point():
    coords = {lam: 1 for lam in partitions_in_box(2, 2)}
    assert gr24_residual(coords) != 0
    with pytest.raises(ValueError):
        plucker_relation_residual(CoefficientMatrix([[1, 2, 3], [4, 5, 6]]))


@pytest.mark.parametrize("M,N", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_two_kp_expansion(M, N):
    rng = random.Random(M * 7 + N)
    for L in (M + N, M + N + 2):
        F, G = rmatrix(rng, M + N, L), rmatrix(rng, M + N, L)
        x, y = ralphabet(rng, M), ralphabet(rng, N)
        assert two_kp_tau(F, G, x, y) == two_kp_expansion(F, G, x, y)


def test_two_kp_coeff_block_minor():
    rng = random.Random(2)
    F, G = rmatrix(rng, 3, 4), rmatrix(rng, 3, 4)
    lam, mu = Partition([1]), Partition([2])
    m = [[F.rows[i][l] for l in lam.shifted(2)] + [G.rows[i][k] for k in mu.shifted(1)] for i in range(3)]
    assert two_kp_coeff(F, G, lam, mu, 2, 1) == cofactor_det(m)


def test_diagonal_coefficient():
    h = PowerSeriesH.polynomial([1, 2, 3, 4])
    assert diagonal_coefficient(h, Partition([1]), 2) == 3 * 1
    assert diagonal_coefficient(h, Partition([3]), 2) == 0


@pytest.mark.parametrize("N", [1, 2, 3])
def test_toda_polynomial_exact(N):
    rng = random.Random(N)
    for deg in range(N - 1, 6):
        h = PowerSeriesH.polynomial([rfrac(rng) or 1 for _ in range(deg + 1)])
        x, y = ralphabet(rng, N), ralphabet(rng, N)
        y = [v or Fraction(1, 7) for v in y]
        if len(set(y)) < N:
            continue
        assert toda_diagonal_tau(h, x, y) == toda_diagonal_expansion(h, x, y)


def test_toda_series_geometric_kernel():
    # h(z) = 1/(1-z): h_n = 1 for all n
    h = PowerSeriesH.from_function(lambda n: 1, 0, closed_form=lambda z: 1 / (1 - z))
    x = [0.1 + 0.05j, -0.2]
    y = [1.5, 2.0 - 0.5j]
    value, width = toda_diagonal_series(h, x, y, tol=1e-14)
    assert abs(value - toda_diagonal_tau(h, x, y)) < 1e-12
    assert width > 2
    with pytest.raises(ConvergenceError):
        toda_diagonal_series(h, [0.9, 0.95], [1.0, 1.01], max_width=5)
    with pytest.raises(TruncationError):
        toda_diagonal_expansion(h, x, y)
