"""Batch verification harness: ``taubethe verify <suite> ...``.

Every check runs ``trials`` times on points drawn from a PRNG seeded by
(seed, suite, check, mode), so a report is reproducible from the seed and
the command-line parameters alone. Exit code 0 means all checks passed, 1
that some check failed and 2 a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
import zlib
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import bethe as bt
from . import qzero as qz
from . import sixvertex as sv
from . import symfunc as sf
from . import taufn as tf
from .scalars import DEFAULT_TOL, TauBetheError, expo, prod

SUITES = ("symfunc", "taufn", "sixvertex", "bethe", "qzero")
MODES = ("exact", "float")
FIELDS = ("suite", "check", "params", "status", "residual", "elapsed_ms", "seed")
SEED_ENV = "TAUBETHE_SEED"

# caps on --n per suite, and on --sites
N_CAPS = {"symfunc": 6, "taufn": 4, "sixvertex": 5, "qzero": 3}
SITES_CAP = bt.MAX_SITES


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    n: int = 3
    sites: int = 4
    magnons: int = 2
    mode: str = "both"
    trials: int = 3
    seed: int = 0
    tol: float = DEFAULT_TOL
    report: str | None = None
    format: str = "json"

    def validate(self) -> None:
        if self.suite not in (*SUITES, "all"):
            raise UsageError(f"unknown suite {self.suite!r}")
        if self.mode not in (*MODES, "both"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.trials < 1:
            raise UsageError("--trials must be >= 1")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        for s in self.suites:
            if s in N_CAPS and not 1 <= self.n <= N_CAPS[s]:
                raise UsageError(f"--n must be in 1..{N_CAPS[s]} for suite {s}")
        if "bethe" in self.suites:
            if not 1 <= self.sites <= SITES_CAP:
                raise UsageError(f"--sites must be in 1..{SITES_CAP}")
            if not 0 <= self.magnons <= self.sites:
                raise UsageError("--magnons must be in 0..sites")

    @property
    def suites(self) -> tuple[str, ...]:
        return SUITES if self.suite == "all" else (self.suite,)

    @property
    def modes(self) -> tuple[str, ...]:
        return MODES if self.mode == "both" else (self.mode,)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    check: str
    params: dict
    status: str  # PASS, FAIL or SKIP
    residual: float | None
    elapsed_ms: float = field(compare=False)
    seed: int

    @property
    def repro(self) -> str:
        p = self.params
        opts = [f"--{k} {p[k]}" for k in ("n", "sites", "magnons", "trials", "tol") if k in p]
        return " ".join(["taubethe verify", self.suite, f"--mode {p.get('mode', 'both')}",
                         *opts, f"--seed {self.seed}"])

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> CheckResult:
        if set(d) != set(FIELDS):
            raise ValueError(f"report fields {sorted(d)} != {sorted(FIELDS)}")
        res = d["residual"]
        return cls(d["suite"], d["check"], dict(d["params"]), d["status"],
                   None if res is None else float(res), float(d["elapsed_ms"]), int(d["seed"]))


# -- random points ------------------------------------------------------------------


def rand_scalar(rng: random.Random, exact: bool, nonzero: bool = True):
    if exact:
        num = rng.randint(1, 9) if nonzero else rng.randint(-9, 9)
        return Fraction(num * rng.choice((1, -1)), rng.randint(1, 9))
    return complex(rng.uniform(-1, 1), rng.uniform(-1, 1))


def rand_alphabet(rng: random.Random, n: int, exact: bool) -> list:
    for _ in range(1000):
        x = [rand_scalar(rng, exact) for _ in range(n)]
        if all(abs(x[i] - x[j]) > 1e-3 for i in range(n) for j in range(i + 1, n)):
            return x
    raise TauBetheError("could not draw a distinct alphabet")


def rand_partition(rng: random.Random, max_len: int, max_weight: int) -> sf.Partition:
    weight = rng.randint(0, max_weight)
    choices = list(sf.partitions_of(weight, max_len))
    return rng.choice(choices)


def rand_matrix(rng: random.Random, rows: int, cols: int, exact: bool) -> tf.CoefficientMatrix:
    return tf.CoefficientMatrix([[rand_scalar(rng, exact, nonzero=False) for _ in range(cols)]
                                 for _ in range(rows)])


def diff(a, b, exact: bool):
    """Exact difference, or difference relative to max(1, |a|, |b|)."""
    if exact:
        return abs(a - b)
    return abs(a - b) / max(1.0, abs(a), abs(b))


# -- check registry -------------------------------------------------------------------

CheckFn = Callable[[random.Random, SuiteConfig, bool], object]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    fn: CheckFn
    modes: tuple[str, ...]
    params: tuple[str, ...]


REGISTRY: list[Check] = []


def check(suite: str, modes: Sequence[str] = MODES, params: Sequence[str] = ("n",)):
    def deco(fn: CheckFn) -> CheckFn:
        REGISTRY.append(Check(suite, fn.__name__, fn, tuple(modes), tuple(params)))
        return fn
    return deco


# symfunc


@check("symfunc")
def weyl_vs_jacobi_trudi(rng, cfg, exact):
    x = rand_alphabet(rng, cfg.n, exact)
    lam = rand_partition(rng, min(cfg.n, 3), 6)
    K = max(lam[0] + lam.length - 1, 1)
    return diff(sf.schur_weyl(x, lam), sf.schur_jt(sf.miwa_times(x, K), lam), exact)


@check("symfunc")
def schur_symmetry(rng, cfg, exact):
    x = rand_alphabet(rng, cfg.n, exact)
    lam = rand_partition(rng, cfg.n, 6)
    y = list(x)
    rng.shuffle(y)
    return diff(sf.schur_weyl(x, lam), sf.schur_weyl(y, lam), exact)


# taufn


@check("taufn")
def kp_cauchy_binet(rng, cfg, exact):
    F = rand_matrix(rng, cfg.n, cfg.n + rng.randint(0, 3), exact)
    x = rand_alphabet(rng, cfg.n, exact)
    return diff(tf.kp_tau(F, x), tf.schur_expand_kp(F, x), exact)


@check("taufn", params=())
def gr24_plucker(rng, cfg, exact):
    F = rand_matrix(rng, 2, 4, exact)
    r = tf.plucker_relation_residual(F)
    scale = max([1.0] + [abs(c) for c in tf.plucker_coords(F).values()]) ** 2
    return abs(r) if exact else abs(r) / scale


@check("taufn")
def two_kp_expansion(rng, cfg, exact):
    M = min(cfg.n, 2)
    N = rng.randint(1, 2)
    L = M + N + rng.randint(0, 2)
    F, G = rand_matrix(rng, M + N, L, exact), rand_matrix(rng, M + N, L, exact)
    x, y = rand_alphabet(rng, M, exact), rand_alphabet(rng, N, exact)
    return diff(tf.two_kp_tau(F, G, x, y), tf.two_kp_expansion(F, G, x, y), exact)


@check("taufn")
def toda_diagonal(rng, cfg, exact):
    N = min(cfg.n, 3)
    deg = rng.randint(N - 1, 5)
    h = tf.PowerSeriesH.polynomial([rand_scalar(rng, exact) for _ in range(deg + 1)])
    x, y = rand_alphabet(rng, N, exact), rand_alphabet(rng, N, exact)
    return diff(tf.toda_diagonal_tau(h, x, y), tf.toda_diagonal_expansion(h, x, y), exact)


# sixvertex


def sv_point(rng, N, exact):
    return sv.random_exact_params(N, rng) if exact else sv.random_float_params(N, rng)


ASM_COUNTS = (1, 1, 2, 7, 42, 429)


@check("sixvertex")
def ik_master(rng, cfg, exact):
    p = sv_point(rng, cfg.n, exact)
    return diff(sv.z_bruteforce(p), sv.ik_determinant(p), exact)


@check("sixvertex", modes=("exact",))
def dwbc_count(rng, cfg, exact):
    return abs(sv.count_configurations(cfg.n) - ASM_COUNTS[cfg.n])


@check("sixvertex")
def rational_forms(rng, cfg, exact):
    p = sv.random_exact_params(cfg.n, rng, for_fit=True) if exact else sv.random_float_params(cfg.n, rng)
    z = sv.ik_determinant(p)
    held = sv.random_held_out(p, 2, rng)
    worst = 0
    for form in (0, 1, 2):
        fit = sv.determine_prefactor(p, held, form, tol=cfg.tol)
        core, pref = sv.ik_rational(p, form, fit)
        worst = max(worst, diff(core * pref, z, exact), fit.max_residual if not exact else 0)
        if exact and fit.max_residual:
            worst = max(worst, Fraction(fit.max_residual))
    return worst


@check("sixvertex")
def zj_cauchy(rng, cfg, exact):
    p = sv_point(rng, cfg.n, exact)
    tau, pref = sv.zj_cauchy_form(p)
    return diff(tau * pref, sv.ik_determinant(p), exact)


@check("sixvertex", modes=("float",))
def zj_series(rng, cfg, exact):
    p = sv.random_contraction_params(cfg.n, rng)
    tau, series, _ = sv.zj_series_check(p, cfg.tol)
    return diff(tau, series, False)


@check("sixvertex", modes=("float",))
def stroganov_okada_shifted(rng, cfg, exact):
    fit = sv.stroganov_okada_fit(cfg.n, rng, points=5)
    return fit.max_residual


# bethe


def chain(rng, cfg, exact):
    return bt.random_exact_chain(cfg.sites, rng) if exact else bt.random_float_chain(cfg.sites, rng)


def spectral(rng, exact):
    if exact:
        return Fraction(rng.randint(1, 9), rng.randint(1, 9))
    return expo(complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)))


BETHE_PARAMS = ("sites",)
ROOT_PARAMS = ("sites", "magnons")


@check("bethe", params=BETHE_PARAMS)
def rtt(rng, cfg, exact):
    p = chain(rng, cfg, exact)
    return bt.check_rtt(spectral(rng, exact), spectral(rng, exact), p)


@check("bethe", params=BETHE_PARAMS)
def exchange_relations(rng, cfg, exact):
    p = chain(rng, cfg, exact)
    return max(bt.exchange_residuals(spectral(rng, exact), spectral(rng, exact), p).values())


@check("bethe", params=BETHE_PARAMS)
def vacuum_conditions(rng, cfg, exact):
    p = chain(rng, cfg, exact)
    return max(bt.vacuum_residuals(spectral(rng, exact), p).values())


@check("bethe", modes=("exact",), params=BETHE_PARAMS)
def b_lowers_spin(rng, cfg, exact):
    p = chain(rng, cfg, exact)
    return 0 if bt.b_lowers_spin(bt.build_T(spectral(rng, exact), p)) else 1


@check("bethe", params=BETHE_PARAMS)
def domain_wall(rng, cfg, exact):
    p = chain(rng, cfg, exact)
    return bt.domain_wall_identity([spectral(rng, exact) for _ in range(cfg.sites)], p).deviation


@check("bethe", modes=("exact",), params=ROOT_PARAMS)
def slavnov_h_equals_k_offshell(rng, cfg, exact):
    p = chain(rng, cfg, True)
    n = cfg.magnons
    wu = [spectral(rng, True) for _ in range(n)]
    wv = [spectral(rng, True) for _ in range(n)]
    return abs(bt.slavnov_h(wu, wv, p) - bt.slavnov_k(wu, wv, p))


def on_shell(rng, cfg):
    p = bt.random_float_chain(cfg.sites, rng)
    roots = bt.solve_bethe(p, cfg.magnons, seeds=40 * max(cfg.magnons, 1), rng=rng)
    wu = [spectral(rng, False) for _ in range(cfg.magnons)]
    return p, roots, wu


@check("bethe", modes=("float",), params=ROOT_PARAMS)
def bethe_roots(rng, cfg, exact):
    p, roots, _ = on_shell(rng, cfg)
    return max(roots.residual, bt.bethe_residual(roots.ev, p))


@check("bethe", modes=("float",), params=ROOT_PARAMS)
def transfer_eigenvalue(rng, cfg, exact):
    p, roots, _ = on_shell(rng, cfg)
    return max(bt.eigen_check(roots, spectral(rng, False), p) for _ in range(3))


def _slavnov(form):
    def run(rng, cfg, exact):
        p, roots, wu = on_shell(rng, cfg)
        direct = bt.scalar_product_direct(wu, roots.ev, p)
        return abs(bt.slavnov(wu, roots, p, form) - direct) / abs(direct)
    run.__name__ = f"slavnov_{form.lower()}"
    return run


for _form in ("H", "K", "rational"):
    check("bethe", modes=("float",), params=ROOT_PARAMS)(_slavnov(_form))


@check("bethe", modes=("float",), params=ROOT_PARAMS)
def fj_polynomial(rng, cfg, exact):
    p, roots, _ = on_shell(rng, cfg)
    reps = [bt.fj_polynomiality(roots, p, j) for j in range(roots.n)]
    if any(r.degree != p.N + roots.n - 2 for r in reps):
        return 1.0
    return max((r.residual for r in reps), default=0.0)


# qzero


@check("qzero", modes=("exact",))
def boxed_plane_partitions(rng, cfg, exact):
    n = cfg.n
    worst = 0
    for N in range(1, 4):
        ones = [1] * n
        s = qz.boxed_schur_sum(n, N, ones, ones)
        worst = max(worst, abs(s - qz.plane_partition_count(n, n, N)),
                    abs(s - qz.macmahon_box_count(n, n, N)))
    return worst


@check("qzero", modes=("exact",), params=())
def macmahon(rng, cfg, exact):
    while True:
        a, b, c = (rng.randint(1, 4) for _ in range(3))
        if a * b * c <= 27:
            break
    return abs(qz.plane_partition_count(a, b, c) - qz.macmahon_box_count(a, b, c))


@check("qzero", modes=("exact",))
def single_schur_factor(rng, cfg, exact):
    n, N = cfg.n, rng.randint(1, 2)
    u = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n)]
    v = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n)]
    _, fit = qz.single_schur_form(n, N, u, v, rng=rng)
    expected = (0,) * n + (2 * N,) * n
    mismatch = 0 if (fit.exponents == expected and fit.constant == 1) else 1
    return max(Fraction(fit.max_residual), mismatch)


@check("qzero")
def cauchy_determinant(rng, cfg, exact):
    n = cfg.n
    while True:
        u, v = rand_alphabet(rng, n, exact), rand_alphabet(rng, n, exact)
        if any(abs(a + b) < 1e-3 for a in u for b in v):
            continue  # pole of the Cauchy kernel
        try:
            p = qz.cauchy_params(u, v)
            break
        except ZeroDivisionError:
            continue
    # closed form: prefactor * prod (u_i v_i)^n * Cauchy determinant
    cauchy = prod((u[j] - u[i]) * (v[j] - v[i]) for i in range(n) for j in range(i + 1, n))
    cauchy = cauchy / prod(a + b for a in u for b in v)
    pre = prod(u[i] * u[j] / (u[i] ** 2 - u[j] ** 2) * v[j] * v[i] / (v[j] ** 2 - v[i] ** 2)
               for i in range(n) for j in range(i + 1, n))
    want = pre * prod((a * b) ** n for a, b in zip(u, v)) * cauchy
    return diff(qz.scalar_det_q0(p), want, exact)


@check("qzero", modes=("float",), params=())
def crystal_limit(rng, cfg, exact):
    u, v = Fraction(rng.randint(2, 9)), Fraction(1, rng.randint(1, 9))
    q = Fraction(1, 10**12)
    return float(qz.matrix_distance(qz.xxz_r_twisted(u, v, q), qz.r_matrix_q0(u, v)))


# -- running ----------------------------------------------------------------------------


def check_seed(seed: int, suite: str, name: str, mode: str) -> int:
    return zlib.crc32(f"{seed}:{suite}:{name}:{mode}".encode())


def _params(c: Check, cfg: SuiteConfig, mode: str) -> dict:
    out = {"mode": mode, "trials": cfg.trials, "tol": cfg.tol}
    for k in c.params:
        out[k] = getattr(cfg, k)
    return out


RESAMPLE_CAP = 1000


def _trial(c: Check, rng: random.Random, cfg: SuiteConfig, exact: bool):
    # poles have measure zero but rational draws can hit them: redraw
    for _ in range(RESAMPLE_CAP):
        try:
            return c.fn(rng, cfg, exact)
        except ZeroDivisionError:
            continue
    raise TauBetheError(f"no admissible point after {RESAMPLE_CAP} draws")


def run_check(c: Check, cfg: SuiteConfig, mode: str) -> CheckResult:
    params = _params(c, cfg, mode)
    if mode not in c.modes:
        return CheckResult(c.suite, c.name, params, "SKIP", None, 0.0, cfg.seed)
    rng = random.Random(check_seed(cfg.seed, c.suite, c.name, mode))
    exact = mode == "exact"
    start = time.perf_counter()
    worst, status = 0, "PASS"
    try:
        for _ in range(cfg.trials):
            worst = max(worst, _trial(c, rng, cfg, exact))
        ok = worst == 0 if exact else float(worst) <= cfg.tol
        status = "PASS" if ok else "FAIL"
        residual = float(worst)
    except (TauBetheError, ArithmeticError, ValueError) as exc:
        status, residual = "FAIL", None
        params = {**params, "error": f"{type(exc).__name__}: {exc}"}
    elapsed = round((time.perf_counter() - start) * 1e3, 3)
    return CheckResult(c.suite, c.name, params, status, residual, elapsed, cfg.seed)


def run_suite(cfg: SuiteConfig) -> list[CheckResult]:
    cfg.validate()
    results = []
    for suite in cfg.suites:
        for c in REGISTRY:
            if c.suite != suite:
                continue
            for mode in cfg.modes:
                results.append(run_check(c, cfg, mode))
    return results


# -- reports ------------------------------------------------------------------------------


def format_report(results: Sequence[CheckResult], fmt: str = "json") -> str:
    if not results:
        raise ValueError("no results to report")
    rows = [r.to_dict() for r in results]
    if fmt == "json":
        return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(FIELDS)
        for row in rows:
            w.writerow([json.dumps(row["params"]) if k == "params" else
                        ("" if row[k] is None else row[k]) for k in FIELDS])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def parse_report(text: str, fmt: str = "json") -> list[CheckResult]:
    if fmt == "json":
        return [CheckResult.from_dict(d) for d in json.loads(text)]
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text, newline=""))
        if tuple(reader.fieldnames or ()) != FIELDS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        out = []
        for row in reader:
            row["params"] = json.loads(row["params"])
            row["residual"] = None if row["residual"] == "" else row["residual"]
            out.append(CheckResult.from_dict(row))
        return out
    raise ValueError(f"unknown format {fmt!r}")


def emit_report(results: Sequence[CheckResult], path: str, fmt: str = "json") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_report(results, fmt))


def load_report(path: str, fmt: str = "json") -> list[CheckResult]:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_report(fh.read(), fmt)


def strip_timing(results: Sequence[CheckResult]) -> list[dict]:
    return [{k: v for k, v in r.to_dict().items() if k != "elapsed_ms"} for r in results]


# -- entry point ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="taubethe", description="Identity checks for tau functions, "
                                 "six-vertex partition functions and Bethe states.")
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=(*SUITES, "all"))
    v.add_argument("--n", type=int, default=3, help="size parameter (alphabet / lattice size)")
    v.add_argument("--sites", type=int, default=4, help="chain length for the bethe suite")
    v.add_argument("--magnons", type=int, default=2, help="number of Bethe roots")
    v.add_argument("--mode", choices=(*MODES, "both"), default="both")
    v.add_argument("--trials", type=int, default=3)
    v.add_argument("--seed", type=int, default=None, help=f"PRNG seed (fallback: ${SEED_ENV}, then 0)")
    v.add_argument("--tol", type=float, default=DEFAULT_TOL, help="FLOAT tolerance")
    v.add_argument("--report", default=None, help="write the report here instead of stdout")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    return ap


def resolve_seed(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"${SEED_ENV} must be an integer, got {env!r}") from None


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)  # exits with status 2 on malformed arguments
    try:
        cfg = SuiteConfig(args.suite, args.n, args.sites, args.magnons, args.mode, args.trials,
                          resolve_seed(args.seed), args.tol, args.report, args.format)
        cfg.validate()
    except UsageError as exc:
        ap.error(str(exc))
    results = run_suite(cfg)
    text = format_report(results, cfg.format)
    if cfg.report:
        try:
            emit_report(results, cfg.report, cfg.format)
        except OSError as exc:
            print(f"taubethe: cannot write report: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    failed = [r for r in results if r.status == "FAIL"]
    for r in results:
        print(f"{r.status:4}  {r.suite}.{r.check} [{r.params['mode']}]"
              + ("" if r.residual is None else f"  residual={r.residual:.3g}"), file=sys.stderr)
    for r in failed:
        print(f"reproduce: {r.repro}", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
