"""Non-negative coefficient tensors and nested (anisotropic) mixed norms."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .exponents import ExtReal, as_exponents, as_perm


class TensorError(ValueError):
    """Malformed tensor data (negative entries, bad shape, ...)."""


def _first_bad(arr: np.ndarray, mask: np.ndarray) -> str:
    flat = int(np.flatnonzero(mask.ravel())[0])
    multi = np.unravel_index(flat, arr.shape) if arr.ndim else ()
    return f"flat index {flat} (multi-index {tuple(int(i) for i in multi)})"


class NonNegTensor:
    """Read-only m-way array of finite non-negative coefficients.

    Entry ``a[j_1, ..., j_m]`` is the value of the form on ``(e_{j_1}, ..., e_{j_m})``.
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=float, copy=True)
        if not np.all(np.isfinite(arr)):
            raise TensorError(f"non-finite entry at {_first_bad(arr, ~np.isfinite(arr))}")
        if np.any(arr < 0):
            raise TensorError(f"negative entry at {_first_bad(arr, arr < 0)}")
        if any(n < 1 for n in arr.shape):
            raise TensorError(f"empty axis in shape {arr.shape}")
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def from_flat(cls, shape: Sequence[int], data: Sequence[float]) -> "NonNegTensor":
        shape = tuple(int(n) for n in shape)
        data = list(data)
        size = math.prod(shape)
        if len(data) != size:
            raise TensorError(f"shape {list(shape)} needs {size} entries, got {len(data)}")
        return cls(np.asarray(data, dtype=float).reshape(shape))

    @classmethod
    def zeros(cls, shape: Sequence[int]) -> "NonNegTensor":
        return cls(np.zeros(tuple(shape)))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple[int, ...]:
        return self._data.shape

    @property
    def order(self) -> int:
        return self._data.ndim

    @property
    def flat(self) -> np.ndarray:
        return self._data.ravel()

    def __mul__(self, c):
        return NonNegTensor(self._data * float(c))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, NonNegTensor):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def __repr__(self):
        return f"NonNegTensor(shape={self.shape})"

    def to_json(self) -> dict:
        return {"shape": list(self.shape), "data": [float(v) for v in self.flat]}


def tensor_from_json(obj) -> NonNegTensor:
    """Validate a ``{"shape": [...], "data": [...]}`` document."""
    if not isinstance(obj, dict) or "shape" not in obj or "data" not in obj:
        raise TensorError('tensor JSON needs "shape" and "data" keys')
    shape, data = obj["shape"], obj["data"]
    if not isinstance(shape, list) or not shape:
        raise TensorError('"shape" must be a non-empty list')
    for i, n in enumerate(shape):
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise TensorError(f"shape[{i}] = {n!r} is not a positive integer")
    if not isinstance(data, list):
        raise TensorError('"data" must be a list')
    size = math.prod(shape)
    for i, v in enumerate(data):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise TensorError(f"data[{i}] = {v!r} is not a number")
        if not math.isfinite(v):
            raise TensorError(f"data[{i}] = {v!r} is not finite")
        if v < 0:
            raise TensorError(f"data[{i}] = {v!r} is negative")
    if len(data) != size:
        raise TensorError(f"shape {shape} needs {size} entries, data has {len(data)}")
    return NonNegTensor.from_flat(shape, data)


def load_tensor(path: str | Path) -> NonNegTensor:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise TensorError(f"{path}: invalid JSON ({exc})") from None
    return tensor_from_json(obj)


def save_tensor(a: NonNegTensor, path: str | Path) -> None:
    Path(path).write_text(json.dumps(a.to_json()))


# -- axis operations ---------------------------------------------------------

def permute_axes(a: NonNegTensor, sigma: Sequence[int]) -> NonNegTensor:
    """Reorder axes so that axis ``k`` of the result is axis ``sigma[k]`` of ``a``."""
    sigma = as_perm(sigma, a.order)
    return NonNegTensor(np.transpose(a.data, sigma))


def contract(a: NonNegTensor, slot: int, x) -> NonNegTensor:
    """Sum ``a`` against ``x`` along axis ``slot``; the result has order ``m - 1``."""
    x = np.asarray(x, dtype=float)
    if not 0 <= slot < a.order:
        raise TensorError(f"slot {slot} out of range for order {a.order}")
    if x.shape != (a.shape[slot],):
        raise TensorError(f"vector of length {x.size} does not match axis {slot} of size {a.shape[slot]}")
    if np.any(x < 0):
        raise TensorError("contraction vector must be non-negative")
    return NonNegTensor(np.tensordot(a.data, x, axes=([slot], [0])))


# -- mixed norms -------------------------------------------------------------

def _lq_last(x: np.ndarray, q: float) -> np.ndarray:
    if math.isinf(q):
        return x.max(axis=-1)
    top = x.max(axis=-1, keepdims=True)
    scale = np.where(top > 0, top, 1.0)
    s = np.sum((x / scale) ** q, axis=-1)
    return top[..., 0] * s ** (1.0 / q)


def _log_lq_last(logx: np.ndarray, q: float) -> np.ndarray:
    if math.isinf(q):
        return logx.max(axis=-1)
    with np.errstate(divide="ignore"):
        return logsumexp(q * logx, axis=-1) / q


def _levels(a: NonNegTensor, q, sigma):
    q = as_exponents(q)
    if len(q) != a.order:
        raise TensorError(f"{len(q)} exponents for a tensor of order {a.order}")
    sigma = as_perm(sigma, a.order)
    return np.transpose(a.data, sigma), [float(v) for v in q]


def log_mixed_norm(a: NonNegTensor, q, sigma=None) -> float:
    """Natural log of :func:`mixed_norm`; ``-inf`` for the zero tensor."""
    x, qs = _levels(a, q, sigma)
    with np.errstate(divide="ignore"):
        x = np.log(x)
    for qk in reversed(qs):
        x = _log_lq_last(x, qk)
    return float(x)


def mixed_norm(a: NonNegTensor, q, sigma=None) -> float:
    """Nested norm of ``a``: axis ``sigma[-1]`` innermost with ``q[-1]``, axis
    ``sigma[0]`` outermost with ``q[0]``; an infinite exponent takes the max.

    Each level is rescaled by its maximum.  If a level still overflows (tiny
    maximum times a huge power sum) the value is recomputed in the log
    domain; a result beyond the double range is returned as ``inf``.
    """
    x, qs = _levels(a, q, sigma)
    with np.errstate(over="ignore", invalid="ignore"):
        for qk in reversed(qs):
            x = _lq_last(x, qk)
    out = float(x)
    if math.isinf(out) or math.isnan(out):
        try:
            out = math.exp(log_mixed_norm(a, q, sigma))
        except OverflowError:
            out = math.inf
    return out


@dataclass(frozen=True)
class MixedNormSpec:
    """Nesting order ``sigma`` (0-based, outermost first) and exponents ``q``."""

    q: tuple[ExtReal, ...]
    sigma: tuple[int, ...]

    @classmethod
    def of(cls, q, sigma=None) -> "MixedNormSpec":
        q = as_exponents(q)
        return cls(q, as_perm(sigma, len(q)))

    def __call__(self, a: NonNegTensor) -> float:
        return mixed_norm(a, self.q, self.sigma)
