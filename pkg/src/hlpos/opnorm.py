"""Operator norms of non-negative multilinear forms on products of l_p balls.

Only two paths give exact values: linear forms (``m = 1``) and tensors whose
spaces are all ``l_1``/``l_inf``.  Everything else is a lower bound found by
block-coordinate ascent, each block solved in closed form by Hölder duality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .exponents import as_spaces, conjugate
from .tensor import NonNegTensor, TensorError

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 1000
DEFAULT_RESTARTS = 8
GRID_CAP = 10**8


@dataclass(frozen=True, eq=False)
class NormEstimate:
    value: float
    kind: str  # "exact" or "lower_bound"
    iterations: int
    restarts_used: int
    converged: bool
    witness: tuple[np.ndarray, ...]
    seed: int | None = None
    error_bound: float = 0.0  # additive, grid oracle only
    history: tuple[float, ...] = field(default=(), repr=False)


def lp_norm(x: np.ndarray, p: float) -> float:
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return 0.0
    top = float(np.max(x))
    if math.isinf(p) or top == 0.0:
        return top
    return top * float(np.sum((x / top) ** p)) ** (1.0 / p)


def holder_dual_argmax(c, p) -> tuple[np.ndarray, float]:
    """Maximize ``sum c_j x_j`` over non-negative ``x`` with ``||x||_p <= 1``.

    The maximum is ``||c||_{p*}``.  Ties in the ``p = 1`` case go to the
    lowest index; an all-zero ``c`` returns ``(e_0, 0.0)``.
    """
    c = np.asarray(c, dtype=float)
    if np.any(c < 0):
        raise ValueError("holder_dual_argmax needs a non-negative vector")
    pf = float(p)
    x = np.zeros_like(c)
    if not np.any(c > 0):
        x[0] = 1.0
        return x, 0.0
    if math.isinf(pf):
        x[:] = 1.0
        return x, float(c.sum())
    if pf == 1.0:
        j = int(np.argmax(c))
        x[j] = 1.0
        return x, float(c[j])
    ps = float(conjugate(p))
    nrm = lp_norm(c, ps)
    x = (c / nrm) ** (ps - 1.0)
    return x, nrm


def form_value(a: NonNegTensor, witness: Sequence[np.ndarray]) -> float:
    t = a.data
    for x in reversed(witness):
        t = t @ np.asarray(x, dtype=float)
    return float(t)


def _contract_except(t: np.ndarray, witness: Sequence[np.ndarray], slot: int) -> np.ndarray:
    for k in range(t.ndim - 1, -1, -1):
        if k == slot:
            continue
        t = np.tensordot(t, witness[k], axes=([k], [0]))
    return t


def exact_norm_m1(c, p) -> NormEstimate:
    """Norm of the linear form with coefficients ``c`` on ``l_p``: ``||c||_{p*}``."""
    c = np.asarray(c, dtype=float).ravel()
    x, value = holder_dual_argmax(c, p)
    return NormEstimate(value, "exact", 0, 0, True, (x,), history=(value,))


def _exact_extreme(a: NonNegTensor, pf: list[float]) -> NormEstimate:
    # every slot is l_1 or l_inf: l_inf slots take all-ones, l_1 slots a basis vector
    t = a.data
    ones_slots = [k for k, v in enumerate(pf) if math.isinf(v)]
    for k in reversed(ones_slots):
        t = t.sum(axis=k)
    basis_slots = [k for k, v in enumerate(pf) if not math.isinf(v)]
    witness = [np.ones(n) for n in a.shape]
    if basis_slots:
        flat = int(np.argmax(t))
        pos = np.unravel_index(flat, t.shape)
        for k, j in zip(basis_slots, pos):
            e = np.zeros(a.shape[k])
            e[j] = 1.0
            witness[k] = e
        value = float(t.flat[flat])
    else:
        value = float(t)
    return NormEstimate(value, "exact", 0, 0, True, tuple(witness), history=(value,))


def _normalize(v: np.ndarray, p: float) -> np.ndarray:
    return v / lp_norm(v, p)


def _ascent_run(t: np.ndarray, pf: list[float], start: list[np.ndarray], tol: float, max_iter: int):
    x = [s.copy() for s in start]
    obj = _value(t, x)
    history = [obj]
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        before = obj
        for k in range(t.ndim):
            c = _contract_except(t, x, k)
            x[k], _ = holder_dual_argmax(c, pf[k])
            obj = float(c @ x[k])
        history.append(obj)
        if obj - before <= tol * obj:
            converged = True
            break
    return obj, x, it, converged, history


def _value(t: np.ndarray, x: Sequence[np.ndarray]) -> float:
    for v in reversed(x):
        t = t @ v
    return float(t)


def _random_start(rng: np.random.Generator, shape, pf) -> list[np.ndarray]:
    return [_normalize(rng.uniform(0.05, 1.0, size=n), p) for n, p in zip(shape, pf)]


def alternating_ascent(
    a: NonNegTensor,
    p: Sequence,
    restarts: int = DEFAULT_RESTARTS,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = 0,
    start: Sequence[np.ndarray] | None = None,
) -> NormEstimate:
    """Lower bound on ``||a||`` by cyclic block maximization.

    Each block update contracts every other slot at its current vector and
    replaces the slot's vector by the Hölder maximizer, so the objective never
    decreases.  Restart 0 starts from uniform vectors, restart ``r > 0`` from
    a positive random draw seeded by ``(seed, r)``.  A supplied ``start``
    witness is run as an additional restart.  The best restart wins; ties go
    to the earlier restart.
    """
    p = as_spaces(p)
    if len(p) != a.order:
        raise TensorError(f"{len(p)} spaces for a tensor of order {a.order}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    pf = [float(v) for v in p]
    if a.order == 1:
        est = exact_norm_m1(a.data, p[0])
        return NormEstimate(est.value, "exact", 0, 0, True, est.witness, seed)
    if all(v == 1.0 or math.isinf(v) for v in pf):
        est = _exact_extreme(a, pf)
        return NormEstimate(est.value, "exact", 0, 0, True, est.witness, seed)

    t = a.data
    if not np.any(t > 0):
        witness = tuple(_normalize(np.ones(n), v) for n, v in zip(a.shape, pf))
        return NormEstimate(0.0, "lower_bound", 0, 0, True, witness, seed, history=(0.0,))

    starts = [[_normalize(np.ones(n), v) for n, v in zip(a.shape, pf)]]
    for r in range(1, restarts):
        starts.append(_random_start(np.random.default_rng([seed, r]), a.shape, pf))
    if start is not None:
        user = [np.asarray(s, dtype=float) for s in start]
        if [u.shape for u in user] != [(n,) for n in a.shape]:
            raise TensorError("start witness does not match the tensor shape")
        starts.append(user)

    best = None
    total_iter = 0
    for s in starts:
        obj, x, it, conv, hist = _ascent_run(t, pf, s, tol, max_iter)
        total_iter += it
        if best is None or obj > best[0]:
            best = (obj, x, conv, hist)
    obj, x, conv, hist = best
    return NormEstimate(
        value=obj,
        kind="lower_bound",
        iterations=total_iter,
        restarts_used=len(starts),
        converged=conv,
        witness=tuple(x),
        seed=seed,
        history=tuple(hist),
    )


# -- brute-force oracle ------------------------------------------------------

def simplex_grid(n: int, resolution: int) -> np.ndarray:
    """All non-negative integer vectors of length n summing to ``resolution``."""
    rows = []
    for bars in combinations(range(resolution + n - 1), n - 1):
        prev = -1
        row = []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(resolution + n - 2 - prev)
        rows.append(row)
    return np.asarray(rows, dtype=float)


def grid_size(n: int, resolution: int) -> int:
    return math.comb(resolution + n - 1, n - 1)


def sphere_grid(n: int, p: float, resolution: int) -> np.ndarray:
    g = simplex_grid(n, resolution)
    return np.stack([_normalize(row, p) for row in g])


def grid_oracle(a: NonNegTensor, p: Sequence, resolution: int, cap: int = GRID_CAP, chunk: int = 2048) -> NormEstimate:
    """Exhaustive search over normalized simplex grids, one per slot.

    ``error_bound`` is an additive bound on ``||a|| - value``.  Rounding a
    point of the simplex to the grid moves each coordinate by less than
    ``1/resolution``; after normalizing to the l_p sphere the slot moves by at
    most ``eta_i = 2 n_i / resolution`` in l_p, and multilinearity gives
    ``||a|| - value <= ||a|| * sum eta_i``.
    """
    p = as_spaces(p)
    if len(p) != a.order:
        raise TensorError(f"{len(p)} spaces for a tensor of order {a.order}")
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    sizes = [grid_size(n, resolution) for n in a.shape]
    total = math.prod(sizes)
    if total > cap:
        raise ValueError(
            f"grid of {total} evaluations exceeds cap {cap}; "
            f"per-slot sizes {sizes} at resolution {resolution}"
        )
    pf = [float(v) for v in p]
    grids = [sphere_grid(n, v, resolution) for n, v in zip(a.shape, pf)]

    t = a.data
    for k in range(a.order - 1, 0, -1):
        t = np.tensordot(t, grids[k], axes=([k], [1]))
        t = np.moveaxis(t, -1, k)
    # t has shape (n_1, N_2, ..., N_m)
    rest = t.reshape(t.shape[0], -1)
    best_val, best_i, best_j = -1.0, 0, 0
    g0 = grids[0]
    for lo in range(0, g0.shape[0], chunk):
        block = g0[lo : lo + chunk] @ rest
        flat = int(np.argmax(block))
        i, j = divmod(flat, block.shape[1])
        if block[i, j] > best_val:
            best_val, best_i, best_j = float(block[i, j]), lo + i, j
    rest_idx = np.unravel_index(best_j, sizes[1:]) if a.order > 1 else ()
    witness = (g0[best_i],) + tuple(grids[k + 1][int(r)] for k, r in enumerate(rest_idx))

    eta = sum(2.0 * n / resolution for n in a.shape)
    upper = float(a.data.sum())  # unit vectors have entries <= 1
    if eta < 1:
        upper = min(upper, best_val / (1.0 - eta))
    return NormEstimate(
        value=best_val,
        kind="lower_bound",
        iterations=total,
        restarts_used=1,
        converged=True,
        witness=witness,
        error_bound=eta * upper,
        history=(best_val,),
    )
