"""
Non-perturbative analytical diagonalization (NPAD).

Repeated Givens rotations drive a Hermitian matrix toward diagonal form:

- ``npad_diagonalize``: full Jacobi iteration with largest or cyclic pivoting
- ``npad_targeted``: a prescribed rotation recipe, optionally grouped so that
  every rotation of a group is built from the group's starting matrix
- ``npad_block``: rotations restricted to couplings between blocks of a partition

Every rotation lowers the off-diagonal norm by exactly 2|H[j][k]|^2, so the
full iteration converges; with largest pivoting each rotation contracts the
norm by at least 1 - 2/(N(N-1)).
"""

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .errors import InputError, InvalidIndexError
from .givens import GivensRotation, LargestPivot, Pair, apply_givens, make_givens, make_strategy
from .linalg import HermitianMatrix, offdiag_norm_sq

Group = Sequence[Pair]


class NpadConfig(BaseModel):
    """Iteration controls for NPAD runs."""

    model_config = ConfigDict(frozen=True)

    tolerance: float = Field(1e-12, description="Stop when sqrt of the targeted off-diagonal norm is at or below this (GHz)")
    max_rotations: int = Field(10_000, description="Rotation cap")
    strategy: str = Field("largest", description="Pivot strategy: largest or cyclic")
    grouped: bool = Field(False, description="Build each group's rotations from the group's start matrix")

    @field_validator("tolerance")
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        if v < 0:
            raise ValueError("tolerance must be non-negative")
        return v

    @field_validator("max_rotations")
    @classmethod
    def validate_max_rotations(cls, v: int) -> int:
        if v < 1:
            raise ValueError("max_rotations must be at least 1")
        return v

    @field_validator("strategy")
    @classmethod
    def validate_strategy(cls, v: str) -> str:
        if v not in ("largest", "cyclic"):
            raise ValueError("strategy must be 'largest' or 'cyclic'")
        return v

    @classmethod
    def from_settings(cls, block: bool = False, **overrides) -> "NpadConfig":
        """Defaults taken from the application configuration."""
        from .settings import get_config

        numerics = get_config().numerics
        values = {
            "tolerance": numerics.tolerance,
            "max_rotations": numerics.block_max_rotations if block else numerics.max_rotations,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class NpadResult:
    """Outcome of an NPAD run."""

    h_final: HermitianMatrix
    rotations: List[GivensRotation] = field(default_factory=list)
    norm_history: List[float] = field(default_factory=list)
    converged: bool = False
    inter_block_history: List[float] = field(default_factory=list)
    residuals: List[Tuple[Pair, object]] = field(default_factory=list)
    sweeps: int = 0

    @property
    def eigenvalues(self) -> List[float]:
        """Diagonal of the final matrix, ascending (numeric runs)."""
        return sorted(self.h_final.diagonal())

    def to_dict(self) -> dict:
        payload = {
            "converged": self.converged,
            "sweeps": self.sweeps,
            "rotations": [r.to_dict() for r in self.rotations],
            "norm_history": self.norm_history,
        }
        if not self.h_final.is_symbolic:
            payload["final_matrix"] = self.h_final.to_dict()
        if self.inter_block_history:
            payload["inter_block_history"] = self.inter_block_history
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _norm(h: HermitianMatrix, mask: Optional[np.ndarray] = None) -> float:
    return float("nan") if h.is_symbolic else offdiag_norm_sq(h, mask)


def _sweep_count(rotations: int, dim: int) -> int:
    pairs = dim * (dim - 1) // 2
    return math.ceil(rotations / pairs) if pairs else 0


def npad_diagonalize(h: HermitianMatrix, cfg: Optional[NpadConfig] = None) -> NpadResult:
    """
    Full Jacobi diagonalization.

    Args:
        h: Numeric Hermitian matrix
        cfg: Tolerance, rotation cap and pivot strategy

    Returns:
        NpadResult with one norm_history entry per rotation (plus the initial norm)
    """
    cfg = cfg or NpadConfig.from_settings()
    if h.is_symbolic:
        raise InputError("full diagonalization needs numeric entries; use npad_targeted for symbolic matrices")
    strategy = make_strategy(cfg.strategy)
    result = NpadResult(h_final=h, norm_history=[_norm(h)])

    while math.sqrt(result.norm_history[-1]) > cfg.tolerance and len(result.rotations) < cfg.max_rotations:
        pivot = strategy.next_pivot(result.h_final)
        if pivot is None:
            break
        rotation = make_givens(result.h_final, *pivot)
        result.h_final = apply_givens(result.h_final, rotation)
        result.rotations.append(rotation)
        result.norm_history.append(_norm(result.h_final))

    result.converged = math.sqrt(result.norm_history[-1]) <= cfg.tolerance
    result.sweeps = _sweep_count(len(result.rotations), h.dim)
    logger.debug(
        "npad_diagonalize dim={} rotations={} converged={}", h.dim, len(result.rotations), result.converged
    )
    return result


def _as_groups(targets: Union[Sequence[Pair], Sequence[Group]], grouped: bool) -> List[List[Pair]]:
    targets = list(targets)
    if not targets:
        return []
    flat = all(len(t) == 2 and all(isinstance(x, (int, np.integer)) for x in t) for t in targets)
    if flat:
        pairs = [tuple(int(x) for x in t) for t in targets]
        return [pairs] if grouped else [[p] for p in pairs]
    groups = [[tuple(int(x) for x in p) for p in g] for g in targets]
    if grouped:
        return groups
    return [[p] for g in groups for p in g]


def npad_targeted(h: HermitianMatrix, targets: Union[Sequence[Pair], Sequence[Group]],
                  grouped: bool = False) -> NpadResult:
    """
    Apply a prescribed rotation recipe.

    ``targets`` is an ordered list of pairs, or an ordered list of groups of
    pairs. Without ``grouped`` every rotation is built from the current matrix
    and zeroes its entry exactly. With ``grouped`` all rotations of a group are
    built from the matrix at the start of that group (a flat list is one group)
    and applied one after the other.

    Works on numeric and symbolic matrices.
    """
    groups = _as_groups(targets, grouped)
    for group in groups:
        for j, k in group:
            if j == k or not (0 <= j < h.dim and 0 <= k < h.dim):
                raise InvalidIndexError(f"target ({j}, {k}) invalid for dimension {h.dim}")

    result = NpadResult(h_final=h, norm_history=[_norm(h)])
    for group in groups:
        start = result.h_final
        rotations = [make_givens(start, j, k) for j, k in group]
        for rotation in rotations:
            result.h_final = apply_givens(result.h_final, rotation, check=not grouped)
            result.rotations.append(rotation)
            result.norm_history.append(_norm(result.h_final))
            result.residuals.append((rotation.pair, result.h_final[rotation.j, rotation.k]))
    result.sweeps = len(groups)
    result.converged = True
    logger.debug("npad_targeted groups={} rotations={} grouped={}", len(groups), len(result.rotations), grouped)
    return result


def partition_mask(partition: Sequence[Sequence[int]], dim: int) -> np.ndarray:
    owner = np.full(dim, -1)
    for block_id, block in enumerate(partition):
        for i in block:
            if not 0 <= i < dim:
                raise InvalidIndexError(f"partition index {i} out of range for dimension {dim}")
            if owner[i] != -1:
                raise InputError(f"index {i} appears in more than one block")
            owner[i] = block_id
    if (owner == -1).any():
        missing = [int(i) for i in np.flatnonzero(owner == -1)]
        raise InputError(f"partition does not cover indices {missing}")
    return owner[:, None] != owner[None, :]


def npad_block(h: HermitianMatrix, partition: Sequence[Sequence[int]],
               cfg: Optional[NpadConfig] = None) -> NpadResult:
    """
    Block diagonalization: rotate only couplings between different blocks.

    Records the full off-diagonal norm (non-increasing) and the inter-block
    norm (which can transiently grow) after every rotation.
    """
    cfg = cfg or NpadConfig.from_settings(block=True)
    if h.is_symbolic:
        raise InputError("block diagonalization needs numeric entries")
    mask = partition_mask(partition, h.dim)
    strategy = LargestPivot(mask=mask)
    result = NpadResult(h_final=h, norm_history=[_norm(h)], inter_block_history=[_norm(h, mask)])

    while math.sqrt(result.inter_block_history[-1]) > cfg.tolerance and len(result.rotations) < cfg.max_rotations:
        pivot = strategy.next_pivot(result.h_final)
        if pivot is None:
            break
        rotation = make_givens(result.h_final, *pivot)
        result.h_final = apply_givens(result.h_final, rotation)
        result.rotations.append(rotation)
        result.norm_history.append(_norm(result.h_final))
        result.inter_block_history.append(_norm(result.h_final, mask))

    result.converged = math.sqrt(result.inter_block_history[-1]) <= cfg.tolerance
    result.sweeps = _sweep_count(len(result.rotations), h.dim)
    logger.debug("npad_block blocks={} rotations={} converged={}", len(partition), len(result.rotations), result.converged)
    return result


def accumulated_unitary(rotations: Sequence[GivensRotation], dim: int) -> np.ndarray:
    """Product U_n ... U_1 of numeric rotations."""
    u = np.eye(dim, dtype=np.complex128)
    for rotation in rotations:
        u = rotation.matrix(dim) @ u
    return u
