"""Sharp anisotropic Hardy–Littlewood exponents for non-negative multilinear forms."""

from .exponents import (
    INF,
    Admissibility,
    ExponentError,
    ExtReal,
    admissible,
    conjugate,
    critical_exponents,
    delta,
    i0_index,
    reduced_spaces,
)
from .extremal import (
    ExtremalFamily,
    diagonal,
    diagonal_norm_closed_form,
    pinned_diagonal,
    pinned_norm_closed_form,
    reduce,
)
from .harness import (
    SharpnessRow,
    VerifyReport,
    bayart_check,
    falsify,
    sharpness_experiment,
    verify_random,
)
from .opnorm import (
    NormEstimate,
    alternating_ascent,
    exact_norm_m1,
    grid_oracle,
    holder_dual_argmax,
)
from .tensor import (
    MixedNormSpec,
    NonNegTensor,
    TensorError,
    contract,
    load_tensor,
    mixed_norm,
    permute_axes,
)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "Admissibility",
    "ExponentError",
    "ExtReal",
    "admissible",
    "conjugate",
    "critical_exponents",
    "delta",
    "i0_index",
    "reduced_spaces",
    "ExtremalFamily",
    "diagonal",
    "diagonal_norm_closed_form",
    "pinned_diagonal",
    "pinned_norm_closed_form",
    "reduce",
    "SharpnessRow",
    "VerifyReport",
    "bayart_check",
    "falsify",
    "sharpness_experiment",
    "verify_random",
    "NormEstimate",
    "alternating_ascent",
    "exact_norm_m1",
    "grid_oracle",
    "holder_dual_argmax",
    "MixedNormSpec",
    "NonNegTensor",
    "TensorError",
    "contract",
    "load_tensor",
    "mixed_norm",
    "permute_axes",
]
