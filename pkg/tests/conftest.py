"""Shared independent oracles and the acceptance summary printer."""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


def cofactor_det(m):
    """Laplace expansion along the first row; independent of scalars.det."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


def ssyt_schur(x, lam):
    """s_lambda(x) as a sum over semistandard tableaux with entries 1..len(x)."""
    cells = [(i, j) for i, row in enumerate(lam) for j in range(row)]
    n = len(x)
    total = 0
    for fill in itertools.product(range(n), repeat=len(cells)):
        t = dict(zip(cells, fill))
        if any(j and t[i, j - 1] > t[i, j] for i, j in cells):
            continue
        if any(i and t[i - 1, j] >= t[i, j] for i, j in cells):
            continue
        term = 1
        for v in fill:
            term = term * x[v]
        total = total + term
    return total


def pp_bruteforce(a, b, c):
    """Count a x b plane partitions with parts <= c by scanning every array."""
    count = 0
    for vals in itertools.product(range(c + 1), repeat=a * b):
        arr = [vals[i * b:(i + 1) * b] for i in range(a)]
        rows_ok = all(arr[i][j] >= arr[i][j + 1] for i in range(a) for j in range(b - 1))
        cols_ok = all(arr[i][j] >= arr[i + 1][j] for i in range(a - 1) for j in range(b))
        count += rows_ok and cols_ok
    return count


def pp_hook_content(a, b, c):
    """prod_{i<=a, j<=b} (i + j + c - 1) / (i + j - 1)."""
    out = Fraction(1)
    for i in range(1, a + 1):
        for j in range(1, b + 1):
            out *= Fraction(i + j + c - 1, i + j - 1)
    return int(out)


def record_acceptance(number: int, title: str, passed: bool, elapsed: float) -> None:
    ACCEPTANCE[number] = (title, "PASS" if passed else "FAIL", elapsed)


@pytest.fixture
def acceptance():
    return record_acceptance


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, status, elapsed = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d} {status}  {title}  ({elapsed:.2f} s)")
