from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ssyt_schur
from taubethe.scalars import SingularError, TruncationError
from taubethe.symfunc import (
    MiwaPoint,
    Partition,
    complete_h,
    double_staircase,
    miwa_times,
    partitions_in_box,
    partitions_of,
    rectangle,
    schur,
    schur_jt,
    schur_negated,
    schur_weyl,
)

partitions = st.lists(st.integers(0, 5), max_size=4).map(lambda p: Partition(sorted(p, reverse=True)))
alphabets = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=1,
                     max_size=3, unique=True)


def test_partition_normalisation():
    assert Partition([3, 1, 0, 0]) == Partition([3, 1])
    assert Partition([2, 2, 1]).transpose() == Partition([3, 2])
    assert Partition([]).transpose() == Partition([])
    assert Partition([3, 1]).shifted(3) == (5, 2, 0)
    with pytest.raises(ValueError):
        Partition([1, 2])
    with pytest.raises(ValueError):
        Partition([2, -1])


@given(partitions)
def test_transpose_is_involution(lam):
    assert lam.transpose().transpose() == lam
    assert lam.transpose().weight == lam.weight


def test_box_enumeration():
    box = list(partitions_in_box(2, 2))
    assert box[0] == Partition([2, 2]) and box[-1] == Partition([])
    assert len(box) == 6 and len(set(box)) == 6
    assert len(list(partitions_in_box(3, 3))) == 20
    assert [len(list(partitions_of(n))) for n in range(7)] == [1, 1, 2, 3, 5, 7, 11]
    assert double_staircase(3) == Partition([2, 2, 1, 1])
    assert rectangle(2, 3) == Partition([3, 3])


def test_miwa_times():
    x = [Fraction(1, 2), Fraction(3)]
    assert miwa_times(x, 2) == (Fraction(7, 2), Fraction(37, 8))
    assert miwa_times(MiwaPoint(tuple(x), -1, True), 1) == (Fraction(-7, 3),)
    with pytest.raises(ValueError):
        miwa_times(x, 0)


def test_complete_h_small():
    x = [Fraction(2), Fraction(3)]
    t = miwa_times(x, 3)
    assert complete_h(0, t) == 1
    assert complete_h(2, t) == 4 + 6 + 9
    assert complete_h(-1, t) == 0
    with pytest.raises(TruncationError):
        complete_h(4, t)


@settings(max_examples=60, deadline=None)
@given(alphabets, partitions)
def test_weyl_matches_tableaux(x, lam):
    assert schur_weyl(x, lam) == ssyt_schur(x, lam)


@settings(max_examples=60, deadline=None)
@given(alphabets, partitions)
def test_weyl_matches_jacobi_trudi(x, lam):
    K = max(lam[0] + lam.length - 1, 1)
    assert schur_weyl(x, lam) == schur_jt(miwa_times(x, K), lam)


@settings(max_examples=40, deadline=None)
@given(alphabets, partitions, st.randoms(use_true_random=False))
def test_schur_symmetric(x, lam, rnd):
    y = list(x)
    rnd.shuffle(y)
    assert schur_weyl(x, lam) == schur_weyl(y, lam)


def test_schur_examples():
    x = [Fraction(2), Fraction(5)]
    assert schur_weyl(x, [1]) == 7
    assert schur_weyl(x, [1, 1]) == 10
    assert schur_weyl(x, [1, 1, 1]) == 0
    assert schur_weyl([Fraction(3)], []) == 1


def test_jt_independent_of_N_and_negation():
    rng = random.Random(3)
    t = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(8)]
    lam = Partition([3, 1])
    assert schur_jt(t, lam, 2) == schur_jt(t, lam, 4)
    # s_lambda(-t) = (-1)^{|lambda|} s_{lambda'}(t)
    assert schur_negated(t, lam) == (-1) ** lam.weight * schur_jt(t, lam.transpose())
    with pytest.raises(TruncationError):
        schur_jt(t[:2], lam)


def test_repeated_alphabet():
    with pytest.raises(SingularError):
        schur_weyl([1, 1], [1])
    # s_(2,1)(1,1,1) = 8 standard count
    assert schur([1, 1, 1], [2, 1]) == 8
    assert schur([1, 1], [2, 2]) == 1
