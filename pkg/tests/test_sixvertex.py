from __future__ import annotations

import cmath
import itertools
import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taubethe.scalars import ModelViolationError, SizeError, det, vandermonde
from taubethe.sixvertex import (
    SO_GAMMA,
    SixVertexParams,
    count_configurations,
    determine_prefactor,
    dwbc_configurations,
    exact_prefactor,
    ik_determinant,
    ik_rational,
    ik_rational_core,
    random_contraction_params,
    random_exact_params,
    random_float_params,
    random_held_out,
    stroganov_okada_check,
    stroganov_okada_fit,
    tau1_coefficients,
    tau2_coefficients,
    z_bruteforce,
    zj_cauchy_form,
    zj_kernel,
    zj_series_check,
    zj_tau,
)
from taubethe.taufn import kp_tau


def asm_count(n):
    """Alternating sign matrices built row by row; column partial sums stay in {0, 1}."""
    def rows(col_sums):
        for row in itertools.product((-1, 0, 1), repeat=n):
            nz = [v for v in row if v]
            if not nz or nz[0] != 1 or nz[-1] != 1 or any(a == b for a, b in zip(nz, nz[1:])):
                continue
            new = tuple(c + v for c, v in zip(col_sums, row))
            if all(s in (0, 1) for s in new):
                yield new

    def rec(k, sums):
        if k == n:
            return 1 if all(s == 1 for s in sums) else 0
        return sum(rec(k + 1, s) for s in rows(sums))

    return rec(0, (0,) * n)


def test_configuration_counts():
    assert [count_configurations(n) for n in range(1, 5)] == [1, 2, 7, 42]
    assert [asm_count(n) for n in range(1, 5)] == [1, 2, 7, 42]
    for n in range(1, 6):
        closed = Fraction(1)
        for k in range(n):
            closed *= Fraction(factorial(3 * k + 1), factorial(n + k))
        assert count_configurations(n) == closed


def test_each_configuration_has_N_c_vertices_per_row():
    # every row of an ASM has one more +1 than -1
    for grid in dwbc_configurations(3):
        for row in grid:
            assert row.count("c") % 2 == 1


def test_enumeration_cap():
    with pytest.raises(SizeError):
        next(dwbc_configurations(6))


def test_n1_is_sinh_gamma():
    p = SixVertexParams((Fraction(3, 2),), (Fraction(5, 7),), Fraction(4))
    c = (Fraction(4) - Fraction(1, 4)) / 2
    assert z_bruteforce(p) == c == ik_determinant(p)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_master_identity_exact(N):
    rng = random.Random(N)
    for _ in range(5):
        p = random_exact_params(N, rng)
        assert z_bruteforce(p) == ik_determinant(p)


def test_master_identity_float_n4():
    p = random_float_params(4, random.Random(4))
    z, ik = z_bruteforce(p), ik_determinant(p)
    assert abs(z - ik) / abs(z) < 1e-10


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_z_symmetric_in_u_and_in_v(seed):
    rnd = random.Random(seed)
    p = random_exact_params(3, rnd)
    z = z_bruteforce(p)
    perm_u = list(p.eu)
    perm_v = list(p.ev)
    rnd.shuffle(perm_u)
    rnd.shuffle(perm_v)
    assert z_bruteforce(SixVertexParams(tuple(perm_u), p.ev, p.eg)) == z
    assert z_bruteforce(SixVertexParams(p.eu, tuple(perm_v), p.eg)) == z


@pytest.mark.parametrize("N", [1, 2, 3])
def test_rational_forms_and_fitted_prefactor(N):
    rng = random.Random(10 + N)
    p = random_exact_params(N, rng, for_fit=True)
    held = random_held_out(p, 3, rng)
    z = ik_determinant(p)
    for form in (0, 1, 2):
        fit = determine_prefactor(p, held, form)
        assert fit.max_residual == 0
        assert fit.exponents == (1 - N,) * (2 * N)
        core, pref = ik_rational(p, form, fit)
        assert core * pref == z
        assert fit(p.point) == exact_prefactor(p)


def test_rational_core_is_polynomial_times_vandermonde():
    """(rat-IK1) core * Delta(x) has degree <= 2(N-1) + 2N in x_1: a polynomial
    through deg + 1 samples must predict every further sample."""
    N = 2
    p = random_exact_params(N, random.Random(7))
    deg = 2 * (N - 1) + 2 * N
    xs, vals = [], []
    for k in range(1, 40):
        w = Fraction(k, 7)
        pp = SixVertexParams((w, *p.eu[1:]), p.ev, p.eg)
        if not pp.is_admissible():
            continue
        xs.append(w * w)
        vals.append(ik_rational_core(pp, 1) * vandermonde(pp.x))
        if len(xs) == deg + 3:
            break

    def lagrange(t):
        total = 0
        for i in range(deg + 1):
            term = vals[i]
            for j in range(deg + 1):
                if j != i:
                    term *= (t - xs[j]) / (xs[i] - xs[j])
            total += term
        return total

    assert lagrange(xs[-1]) == vals[-1] and lagrange(xs[-2]) == vals[-2]


def test_tau_coefficient_rows_give_kp_tau():
    p = random_exact_params(3, random.Random(2))
    F = tau1_coefficients(p)
    assert F.n_rows == 3 and F.n_cols == 5
    G = tau2_coefficients(p)
    assert G.n_cols == 5
    # tau1 at x equals det(f_j(x_i)) / Delta(x) by construction
    m = [[F.f(j, xi) for j in range(3)] for xi in p.x]
    assert kp_tau(F, list(p.x)) == det(m) / vandermonde(p.x)


def test_zj_equals_rat_ik0_exact():
    rng = random.Random(21)
    for N in (1, 2, 3):
        p = random_exact_params(N, rng)
        tau, pref = zj_cauchy_form(p)
        assert tau * pref == ik_determinant(p)


def test_zj_kernel_coefficients():
    h = zj_kernel(Fraction(1, 2))
    assert [h.coefficient(n) for n in range(3)] == [1, 5, 21]
    z = Fraction(1, 10)
    assert h(z) == 1 / ((1 - 4 * z) * (1 - z))


def test_zj_n1_is_kernel():
    p = random_exact_params(1, random.Random(3))
    assert zj_tau(p) == zj_kernel(p.q)(p.x[0] / p.y[0])


@pytest.mark.parametrize("N", [1, 2, 3])
def test_zj_series_matches_quotient(N):
    p = random_contraction_params(N, random.Random(N))
    quotient, series, width = zj_series_check(p)
    assert abs(quotient - series) <= 1e-10 * abs(quotient)


def test_stroganov_okada_n1():
    p = SixVertexParams.from_rapidities([0.3], [-0.1], SO_GAMMA)
    assert abs(stroganov_okada_check(p) - cmath.sinh(SO_GAMMA)) < 1e-14


@pytest.mark.parametrize("N", [2, 3])
def test_stroganov_okada_shifted_alphabet_is_monomial(N):
    fit = stroganov_okada_fit(N, random.Random(N), points=5)
    assert fit.max_residual <= 1e-8
    assert fit.exponents == (1 - N,) * (2 * N)


@pytest.mark.parametrize("N", [2, 3])
def test_stroganov_okada_literal_alphabet_is_not_monomial(N):
    # documents the convention mismatch recorded in the decisions ledger
    with pytest.raises(ModelViolationError):
        stroganov_okada_fit(N, random.Random(N), points=5, shift_y=False)


def test_held_out_must_share_gamma():
    rng = random.Random(1)
    p = random_exact_params(2, rng, for_fit=True)
    other = SixVertexParams(p.eu, p.ev, p.eg + 1)
    with pytest.raises(ValueError):
        determine_prefactor(p, [other])
