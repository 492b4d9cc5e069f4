"""
effham: effective Hamiltonians by Givens-rotation diagonalization (NPAD) and
the recursive Schrieffer-Wolff transformation (RSWT), numeric or closed-form.
"""

__version__ = "0.3.0"

from .errors import ComputationError, EffHamError, InputError  # noqa: E402
from .expr import Expr, const, emit, evaluate, node_count, param, simplify  # noqa: E402
from .givens import GivensRotation, apply_givens, make_givens, select_pivot  # noqa: E402
from .linalg import (  # noqa: E402
    Basis,
    HermitianMatrix,
    commutator,
    eig_oracle,
    embed_operator,
    nested_commutator,
    offdiag_norm_sq,
)
from .npad import NpadConfig, NpadResult, npad_block, npad_diagonalize, npad_targeted  # noqa: E402
from .rswt import (  # noqa: E402
    build_generator,
    commutator_count_rswt,
    commutator_count_swt,
    rswt,
    rswt_step,
    swt_leading_order,
    truncation_error_bound,
)

__all__ = [
    "Basis",
    "ComputationError",
    "EffHamError",
    "Expr",
    "GivensRotation",
    "HermitianMatrix",
    "InputError",
    "NpadConfig",
    "NpadResult",
    "apply_givens",
    "build_generator",
    "commutator",
    "commutator_count_rswt",
    "commutator_count_swt",
    "const",
    "eig_oracle",
    "embed_operator",
    "emit",
    "evaluate",
    "make_givens",
    "nested_commutator",
    "node_count",
    "npad_block",
    "npad_diagonalize",
    "npad_targeted",
    "offdiag_norm_sq",
    "param",
    "rswt",
    "rswt_step",
    "select_pivot",
    "simplify",
    "swt_leading_order",
    "truncation_error_bound",
]
