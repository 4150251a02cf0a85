"""Extremal diagonal families and the power-sum reduction of the last axis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exponents import (
    ExponentError,
    as_exponents,
    as_perm,
    as_spaces,
    delta,
    is_first_case,
    reciprocal_sum,
    reduced_spaces,
)
from .tensor import NonNegTensor

MAX_DENSE_CELLS = 10**7


def _check_dense(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise ValueError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    if n**m > MAX_DENSE_CELLS:
        raise ValueError(
            f"refusing to materialize {n}^{m} cells (cap {MAX_DENSE_CELLS}); use the closed forms"
        )


def diagonal(m: int, n: int) -> NonNegTensor:
    """``B_n``: entry 1 where all m indices agree, 0 elsewhere."""
    _check_dense(m, n)
    a = np.zeros((n,) * m)
    idx = np.arange(n)
    a[(idx,) * m] = 1.0
    return NonNegTensor(a)


def pinned_diagonal(m: int, n: int, pin_count: int, sigma: Sequence[int] | None = None) -> NonNegTensor:
    """Slots ``sigma[:pin_count]`` fixed at index 0, diagonal over the rest."""
    if not 0 <= pin_count < m:
        raise ValueError(f"pin_count must lie in [0, {m}), got {pin_count}")
    sigma = as_perm(sigma, m)
    _check_dense(m, n)
    a = np.zeros((n,) * m)
    idx = np.arange(n)
    index: list = [None] * m
    for s in sigma[:pin_count]:
        index[s] = 0
    for s in sigma[pin_count:]:
        index[s] = idx
    a[tuple(index)] = 1.0
    return NonNegTensor(a)


def diagonal_norm_closed_form(m: int, n: int, p: Sequence) -> float:
    """Exact operator norm of ``diagonal(m, n)`` on ``l_{p_1} x ... x l_{p_m}``.

    ``n ** (1 - sum 1/p_k)`` when the reciprocal sum is below 1, else 1.
    """
    p = as_spaces(p)
    if len(p) != m:
        raise ExponentError(f"{len(p)} spaces for order {m}")
    s = reciprocal_sum(p)
    if s >= 1:
        return 1.0
    return float(n) ** float(1 - s)


def pinned_norm_closed_form(m: int, n: int, pin_count: int, p: Sequence, sigma=None) -> float:
    # each pinned factor x_0 has sup 1 over its unit ball, attained at e_0
    p = as_spaces(p)
    sigma = as_perm(sigma, m)
    trailing = [p[s] for s in sigma[pin_count:]]
    return diagonal_norm_closed_form(len(trailing), n, trailing)


@dataclass(frozen=True)
class ExtremalFamily:
    kind: str  # "diagonal" or "pinned_diagonal"
    m: int
    n: int
    pin_count: int = 0
    sigma: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("diagonal", "pinned_diagonal"):
            raise ValueError(f"unknown family {self.kind!r}")
        if self.kind == "diagonal" and self.pin_count:
            raise ValueError("diagonal family has no pinned slots")
        if not 0 <= self.pin_count < self.m:
            raise ValueError(f"pin_count must lie in [0, {self.m})")
        object.__setattr__(self, "sigma", as_perm(self.sigma, self.m))

    def tensor(self) -> NonNegTensor:
        return pinned_diagonal(self.m, self.n, self.pin_count, self.sigma)

    def norm(self, p) -> float:
        return pinned_norm_closed_form(self.m, self.n, self.pin_count, p, self.sigma)

    def mixed_norm(self, q) -> float:
        """Closed-form mixed norm under ``self.sigma``: ``n ** (1/q_k)``, k = pin_count."""
        qk = as_exponents(q)[self.pin_count]
        return 1.0 if qk.is_inf else float(self.n) ** (1.0 / float(qk))


def reduce(d: NonNegTensor, p: Sequence) -> tuple[NonNegTensor, tuple]:
    """Collapse the last axis: ``a[j_1..j_{m-1}] = sum_j d[..., j] ** delta(p_m)``.

    Returns the order ``m - 1`` tensor together with the reduced spaces
    ``r_i = p_i / delta(p_m)``.
    """
    p = as_spaces(p)
    if d.order != len(p):
        raise ExponentError(f"{len(p)} spaces for a tensor of order {d.order}")
    if d.order < 2:
        raise ExponentError("reduction needs order >= 2")
    if not is_first_case(p):
        raise ExponentError("reduction needs sum 1/p_i < 1")
    e = float(delta(p[-1:]))
    a = np.sum(d.data**e, axis=-1)
    return NonNegTensor(a), reduced_spaces(p)

