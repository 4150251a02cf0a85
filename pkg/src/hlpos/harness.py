"""Experiments for both directions of the anisotropic inequality.

* :func:`verify_random` checks the inequality on random non-negative tensors
  for an admissible exponent tuple.
* :func:`falsify` and :func:`sharpness_experiment` evaluate the diagonal
  families in closed form and report how the ratio LHS / norm grows with n.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import opnorm
from .exponents import (
    admissible,
    as_exponents,
    as_perm,
    as_spaces,
    critical_exponents,
    delta,
    ext,
    is_first_case,
)
from .extremal import MAX_DENSE_CELLS, ExtremalFamily
from .tensor import NonNegTensor, mixed_norm

HOLDS = "HOLDS"
VIOLATED = "VIOLATED-CANDIDATE"
INCONCLUSIVE = "INCONCLUSIVE"

VERDICT_RTOL = 1e-9
CROSS_CHECK_MAX_N = 64


class PreconditionError(ValueError):
    """The experiment does not apply to this exponent tuple."""


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    dims: tuple[int, ...]
    lhs: float
    estimate: float
    verdict: str
    converged: bool
    restarts: int

    @property
    def ratio(self) -> float:
        if self.estimate > 0:
            return self.lhs / self.estimate
        return 0.0 if self.lhs == 0 else math.inf


@dataclass
class VerifyReport:
    p: tuple
    sigma: tuple[int, ...]
    q: tuple
    records: list[TrialRecord] = field(default_factory=list)

    @property
    def trials(self) -> int:
        return len(self.records)

    def _count(self, verdict: str) -> int:
        return sum(r.verdict == verdict for r in self.records)

    @property
    def holds(self) -> int:
        return self._count(HOLDS)

    @property
    def violated(self) -> int:
        return self._count(VIOLATED)

    @property
    def inconclusive(self) -> int:
        return self._count(INCONCLUSIVE)

    @property
    def worst_ratio(self) -> float:
        return max((r.ratio for r in self.records), default=0.0)

    def summary(self) -> dict:
        return {
            "p": [v.to_json() for v in self.p],
            "sigma": [s + 1 for s in self.sigma],
            "q": [v.to_json() for v in self.q],
            "trials": self.trials,
            "holds": self.holds,
            "inconclusive": self.inconclusive,
            "violated": self.violated,
            "worst_ratio": self.worst_ratio,
        }


@dataclass(frozen=True)
class SharpnessRow:
    n: int
    lhs: float
    norm: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.norm


@dataclass(frozen=True)
class FalsifyResult:
    k: int  # first failing position, 0-based
    family: ExtremalFamily
    rows: list[SharpnessRow]
    slope: float  # predicted d log(ratio) / d log(n)


# -- sufficiency -------------------------------------------------------------

def random_tensor(rng: np.random.Generator, order: int, max_dim: int, distribution: str = "uniform") -> NonNegTensor:
    shape = tuple(int(v) for v in rng.integers(1, max_dim + 1, size=order))
    if distribution == "uniform":
        data = rng.uniform(0.0, 1.0, size=shape)
    elif distribution == "pareto":
        data = rng.pareto(1.5, size=shape)
    else:
        raise ValueError(f"unknown distribution {distribution!r}")
    return NonNegTensor(data)


def check_tensor(
    a: NonNegTensor,
    p,
    sigma,
    q,
    seed: int = 0,
    restarts: int = opnorm.DEFAULT_RESTARTS,
    tol: float = opnorm.DEFAULT_TOL,
    max_iter: int = opnorm.DEFAULT_MAX_ITER,
) -> TrialRecord:
    """One trial: compare the mixed norm of ``a`` with its estimated operator norm.

    The estimate is a lower bound, so ``lhs > estimate`` is only a candidate
    violation; the estimator gets one retry with four times the restarts first.
    """
    lhs = mixed_norm(a, q, sigma)
    est = opnorm.alternating_ascent(a, p, restarts=restarts, tol=tol, max_iter=max_iter, seed=seed)
    used = restarts
    if lhs > est.value * (1 + VERDICT_RTOL):
        used = restarts * 4
        est = opnorm.alternating_ascent(a, p, restarts=used, tol=tol, max_iter=max_iter, seed=seed)
    if lhs <= est.value * (1 + VERDICT_RTOL):
        verdict = HOLDS
    elif not est.converged:
        verdict = INCONCLUSIVE
    else:
        verdict = VIOLATED
    return TrialRecord(seed, a.shape, lhs, est.value, verdict, est.converged, used)


def verify_random(
    p,
    sigma,
    q,
    trials: int = 100,
    max_dim: int = 6,
    seed: int = 0,
    restarts: int = opnorm.DEFAULT_RESTARTS,
    tol: float = opnorm.DEFAULT_TOL,
    max_iter: int = opnorm.DEFAULT_MAX_ITER,
    distribution: str = "uniform",
    workers: int = 1,
) -> VerifyReport:
    p = as_spaces(p)
    q = as_exponents(q)
    sigma = as_perm(sigma, len(p))
    verdict = admissible(p, sigma, q)
    if not verdict:
        raise PreconditionError(
            f"q is not admissible (fails at position {verdict.k + 1}); use falsify instead"
        )
    trial_seeds = [int(s) for s in np.random.default_rng(seed).integers(0, 2**63 - 1, size=trials)]

    def run(ts: int) -> TrialRecord:
        rng = np.random.default_rng(ts)
        a = random_tensor(rng, len(p), max_dim, distribution)
        return check_tensor(a, p, sigma, q, ts, restarts, tol, max_iter)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run, trial_seeds))
    else:
        records = [run(ts) for ts in trial_seeds]
    return VerifyReport(p, sigma, q, records)


# -- necessity ---------------------------------------------------------------

def _cross_check(family: ExtremalFamily, q, sigma, expected: float) -> None:
    n, m = family.n, family.m
    if n > CROSS_CHECK_MAX_N or n**m > MAX_DENSE_CELLS:
        return
    got = mixed_norm(family.tensor(), q, sigma)
    if not math.isclose(got, expected, rel_tol=1e-9):
        raise RuntimeError(f"closed-form LHS {expected!r} disagrees with dense evaluation {got!r} at n={n}")


def falsify(p, sigma, q, n_list: Sequence[int]) -> FalsifyResult:
    """Ratios ``n**(1/q_k) / ||family||`` for the pinned diagonal aligned to ``sigma``.

    ``k`` is the first position where ``q`` falls below its critical value;
    the ratio grows like ``n ** (1/q_k - 1/delta_k)``.
    """
    p = as_spaces(p)
    q = as_exponents(q)
    sigma = as_perm(sigma, len(p))
    verdict = admissible(p, sigma, q)
    if verdict:
        raise PreconditionError("q is admissible; nothing to falsify (use verify)")
    k = verdict.k
    d = verdict.required
    slope = 1.0 / float(q[k]) - (0.0 if d.is_inf else 1.0 / float(d))
    rows = []
    family = None
    for n in n_list:
        family = ExtremalFamily("pinned_diagonal" if k else "diagonal", len(p), int(n), k, sigma)
        lhs = family.mixed_norm(q)
        _cross_check(family, q, sigma, lhs)
        rows.append(SharpnessRow(int(n), lhs, family.norm(p)))
    return FalsifyResult(k, family, rows, slope)


def sharpness_experiment(p, sigma, n_list: Sequence[int]) -> list[SharpnessRow]:
    """Critical exponents on the diagonal family: every ratio is 1."""
    p = as_spaces(p)
    sigma = as_perm(sigma, len(p))
    if not is_first_case(p):
        raise PreconditionError("sum 1/p_i >= 1; use falsify with a finite q_1 instead")
    q = critical_exponents(p, sigma)
    rows = []
    for n in n_list:
        family = ExtremalFamily("diagonal", len(p), int(n), 0, sigma)
        lhs = family.mixed_norm(q)
        _cross_check(family, q, sigma, lhs)
        rows.append(SharpnessRow(int(n), lhs, family.norm(p)))
    return rows


def log_slope(rows: Sequence[SharpnessRow]) -> float:
    """Least-squares slope of log(ratio) against log(n)."""
    x = np.log([r.n for r in rows])
    y = np.log([r.ratio for r in rows])
    return float(np.polyfit(x, y, 1)[0])


def bayart_check(p, rho) -> bool:
    """Isotropic exponent ``rho`` in every slot; needs ``sum 1/p_i < 1``."""
    p = as_spaces(p)
    if not is_first_case(p):
        raise PreconditionError("isotropic check needs sum 1/p_i < 1")
    rho = ext(rho)
    ok = bool(admissible(p, None, (rho,) * len(p)))
    if ok != (rho >= delta(p)):
        raise RuntimeError(f"admissibility and the isotropic bound disagree for rho={rho}")
    return ok


# -- output ------------------------------------------------------------------

def rows_to_csv(rows: Sequence[SharpnessRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "lhs", "norm", "ratio"])
    for r in rows:
        w.writerow([r.n, repr(r.lhs), repr(r.norm), repr(r.ratio)])
    return buf.getvalue()


def records_to_csv(report: VerifyReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["seed", "dims", "lhs", "estimate", "ratio", "verdict", "converged", "restarts"])
    for r in sorted(report.records, key=lambda r: r.seed):
        w.writerow([
            r.seed,
            "x".join(str(n) for n in r.dims),
            repr(r.lhs),
            repr(r.estimate),
            repr(r.ratio),
            r.verdict,
            int(r.converged),
            r.restarts,
        ])
    return buf.getvalue()
