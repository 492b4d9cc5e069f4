"""
Recursive Schrieffer-Wolff transformation (RSWT).

Each iteration splits H_n = D_n + V_n, builds the generator S with
S[j][k] = V[j][k] / (D[j][j] - D[k][k]) (so [S, D] = -V) and keeps the
Baker-Campbell-Hausdorff series of e^S H e^-S up to nesting level m:

    H_{n+1} = D_n + sum_{t=1}^{m-1} t/(t+1)! C_t(S, V_n)

The level starts at K and halves every iteration, n = 0 .. floor(log2 K) - 1,
because the remaining coupling order doubles each time. Block mode removes
only inter-block couplings and carries the intra-block part along with 1/t!
weights.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from .errors import BoundHypothesisError, ComputationError, DegenerateGapError, InputError
from .expr import ZERO, Expr, is_zero
from .linalg import HermitianMatrix, as_array, commutator, nested_commutators, spectral_norm

Pair = Tuple[int, int]
Partition = Sequence[Sequence[int]]


@dataclass(frozen=True)
class Generator:
    """Anti-Hermitian S with its non-zero support."""

    s: np.ndarray
    support: FrozenSet[Pair]

    @property
    def is_zero(self) -> bool:
        return not self.support

    def norm(self) -> float:
        """Spectral norm (numeric generators)."""
        return spectral_norm(self.s) if self.support else 0.0


def _coupled_pairs(h: HermitianMatrix) -> List[Pair]:
    n = h.dim
    return [(j, k) for j in range(n) for k in range(j + 1, n) if not is_zero(h[j, k])]


def build_generator(h: HermitianMatrix, pairs: Optional[Iterable[Pair]] = None,
                    gap_floor: Optional[float] = None) -> Generator:
    """
    Generator removing the couplings on ``pairs`` (all non-zero couplings when None).

    Raises:
        DegenerateGapError: a targeted pair has |H[j][j] - H[k][k]| <= gap_floor
    """
    if gap_floor is None:
        from .settings import get_config

        gap_floor = get_config().numerics.degenerate_gap_floor
    n = h.dim
    symbolic = h.is_symbolic
    if pairs is None:
        targets = _coupled_pairs(h)
    else:
        targets = sorted({(min(p), max(p)) for p in pairs if p[0] != p[1]})
        targets = [p for p in targets if not is_zero(h[p])]

    s = np.full((n, n), ZERO, dtype=object) if symbolic else np.zeros((n, n), dtype=np.complex128)
    for j, k in targets:
        gap = h[j, j] - h[k, k]
        if not symbolic and abs(gap) <= gap_floor:
            raise DegenerateGapError((j, k), float(gap.real))
        value = h[j, k] / gap
        s[j, k] = value
        s[k, j] = -value if symbolic else -np.conj(value)

    if not symbolic and targets:
        # [S, D] + V_targeted must vanish
        d = np.diag(np.diagonal(h.data))
        v = np.zeros_like(s)
        for j, k in targets:
            v[j, k] = h[j, k]
            v[k, j] = h[k, j]
        residual = float(np.max(np.abs(commutator(s, d) + v)))
        scale = float(np.max(np.abs(v)))
        if residual > 1e-12 * max(scale, 1.0):
            raise ComputationError(f"generator defining property violated by {residual:.3e}")
    return Generator(s=s, support=frozenset(targets))


@dataclass(frozen=True)
class RswtPlan:
    """Target order K with its halving schedule of truncation levels."""

    order: int
    n_max: int
    m_schedule: Tuple[int, ...]

    @classmethod
    def for_order(cls, order: int) -> "RswtPlan":
        if order < 2:
            raise InputError("RSWT target order must be at least 2")
        n_max = order.bit_length() - 1
        return cls(order, n_max, tuple(order >> n for n in range(n_max)))


@dataclass
class RswtStep:
    """Record of one RSWT iteration."""

    d: HermitianMatrix
    v: HermitianMatrix
    generator: Generator
    h_next: HermitianMatrix
    m: int
    commutators_evaluated: int
    mode: str = "full"
    residual_order: int = 2
    generator_norm: Optional[float] = None

    def to_dict(self) -> dict:
        payload = {
            "m": self.m,
            "mode": self.mode,
            "commutators_evaluated": self.commutators_evaluated,
            "residual_order": self.residual_order,
            "support": sorted([list(p) for p in self.generator.support]),
        }
        if self.generator_norm is not None:
            payload["generator_norm"] = self.generator_norm
        if not self.h_next.is_symbolic:
            payload["h_next"] = self.h_next.to_dict()
        return payload


@dataclass
class RswtTrace:
    """Per-iteration records of an RSWT run."""

    plan: RswtPlan
    steps: List[RswtStep] = field(default_factory=list)
    generator_norm_warning: bool = False

    @property
    def total_commutators(self) -> int:
        return sum(step.commutators_evaluated for step in self.steps)

    def layer_map(self) -> Dict[Expr, int]:
        """Entry nodes of H_n mapped to layer n (symbolic runs); parameters are layer 0."""
        layers: Dict[Expr, int] = {}
        if not self.steps or not self.steps[0].d.is_symbolic:
            return layers
        for n, step in enumerate(self.steps, start=1):
            for entry in step.h_next.data.flat:
                if isinstance(entry, Expr) and entry.kind not in ("const",) and entry not in layers:
                    layers[entry] = 0 if entry.kind == "param" else n
        return layers

    def to_dict(self) -> dict:
        return {
            "order": self.plan.order,
            "m_schedule": list(self.plan.m_schedule),
            "total_commutators": self.total_commutators,
            "generator_norm_warning": self.generator_norm_warning,
            "steps": [step.to_dict() for step in self.steps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _split_block(h: HermitianMatrix, partition: Partition) -> Tuple[np.ndarray, np.ndarray, List[Pair]]:
    """Off-diagonal part split into inter-block and intra-block couplings."""
    from .npad import partition_mask

    inter_mask = partition_mask(partition, h.dim)
    v = h.offdiagonal_part().data
    zero = ZERO if h.is_symbolic else 0.0
    v_inter = v.copy()
    v_intra = v.copy()
    v_inter[~inter_mask] = zero
    v_intra[inter_mask] = zero
    n = h.dim
    inter_pairs = [(j, k) for j in range(n) for k in range(j + 1, n) if inter_mask[j, k]]
    return v_inter, v_intra, inter_pairs


def _weighted_sum(total: np.ndarray, terms: Iterable[Tuple[float, np.ndarray]]) -> np.ndarray:
    for weight, term in terms:
        total = total + term * weight
    return total


def _hermitian(arr: np.ndarray) -> HermitianMatrix:
    if arr.dtype == object:
        return HermitianMatrix(arr)
    return HermitianMatrix._wrap((arr + arr.conj().T) / 2)


def rswt_iteration(h: HermitianMatrix, m: int, mode: str = "full",
                   partition: Optional[Partition] = None, coupling_order: int = 1,
                   measure_norm: bool = False) -> RswtStep:
    """
    One RSWT iteration with its full record.

    ``coupling_order`` is the nominal order of the incoming off-diagonal part;
    the step records the order left behind (doubled in full mode, one higher in
    block mode while intra-block couplings remain).

    Full mode evaluates m - 1 commutators. Block mode keeps two chains, the
    inter-block couplings with weights t/(t+1)! to level m - 1 and the
    intra-block couplings with weights 1/t! to level m, so it evaluates 2m - 1
    commutators rather than m; ``commutators_evaluated`` records that count.
    """
    if m < 1:
        raise InputError("truncation level m must be at least 1")
    d = h.diagonal_part()
    v = h.offdiagonal_part()

    if mode == "full":
        generator = build_generator(h)
        total = as_array(d).copy()
        chain = nested_commutators(generator.s, v.data, m - 1)
        next(chain)
        total = _weighted_sum(total, ((t / math.factorial(t + 1), c_t) for t, c_t in enumerate(chain, start=1)))
        commutators = max(m - 1, 0)
        residual_order = 2 * coupling_order
    elif mode == "block":
        if partition is None:
            raise InputError("block mode needs a partition")
        v_inter, v_intra, inter_pairs = _split_block(h, partition)
        generator = build_generator(h, inter_pairs)
        total = as_array(d).copy()
        inter_chain = nested_commutators(generator.s, v_inter, m - 1)
        next(inter_chain)
        total = _weighted_sum(total, ((t / math.factorial(t + 1), c_t) for t, c_t in enumerate(inter_chain, start=1)))
        intra_chain = nested_commutators(generator.s, v_intra, m)
        total = _weighted_sum(total, ((1.0 / math.factorial(t), c_t) for t, c_t in enumerate(intra_chain)))
        commutators = max(m - 1, 0) + m
        intra_present = any(not is_zero(x) for x in v_intra.flat)
        residual_order = coupling_order + 1 if intra_present else 2 * coupling_order
    else:
        raise InputError(f"unknown RSWT mode '{mode}'")

    h_next = _hermitian(total)
    generator_norm = generator.norm() if measure_norm and not h.is_symbolic else None
    return RswtStep(
        d=d, v=v, generator=generator, h_next=h_next, m=m, commutators_evaluated=commutators,
        mode=mode, residual_order=residual_order, generator_norm=generator_norm,
    )


def rswt_step(h: HermitianMatrix, m: int, mode: str = "full",
              partition: Optional[Partition] = None) -> HermitianMatrix:
    """H_{n+1} from H_n at truncation level m."""
    return rswt_iteration(h, m, mode, partition).h_next


def rswt(h: HermitianMatrix, order: int, mode: str = "full",
         partition: Optional[Partition] = None) -> Tuple[HermitianMatrix, RswtTrace]:
    """
    Run the RSWT to target order K.

    Args:
        h: Hermitian matrix (numeric or symbolic)
        order: Target order K >= 2; the diagonal is accurate to O(lambda^(K+1))
        mode: ``full`` or ``block``
        partition: Blocks for block mode

    Returns:
        Final matrix and the iteration trace
    """
    plan = RswtPlan.for_order(order)
    trace = RswtTrace(plan=plan)
    coupling_order = 1
    current = h
    for n, m in enumerate(plan.m_schedule):
        step = rswt_iteration(current, m, mode, partition, coupling_order, measure_norm=n == 0)
        coupling_order = step.residual_order
        trace.steps.append(step)
        current = step.h_next
        logger.debug("rswt step m={} commutators={} mode={}", m, step.commutators_evaluated, mode)

    first_norm = trace.steps[0].generator_norm if trace.steps else None
    if first_norm is not None and first_norm >= 0.5:
        trace.generator_norm_warning = True
        logger.warning("generator norm {:.3f} >= 1/2; the truncation bound does not apply", first_norm)
    return current, trace


def truncation_error_bound(s_norm: float, v_norm: float, m: int) -> float:
    """
    Bound on ||H_{n+1} - e^S H_n e^-S|| for truncation level m.

    (2^m / m!) * ||S||^m / (1 - ||S||) * ||V||, valid for ||S|| < 1/2.
    """
    if s_norm < 0 or v_norm < 0:
        raise InputError("norms must be non-negative")
    if s_norm >= 0.5:
        raise BoundHypothesisError(f"generator norm {s_norm} is not below 1/2")
    return (2.0 ** m / math.factorial(m)) * s_norm ** m / (1.0 - s_norm) * v_norm


def truncation_error_bound_relaxed(s_norm: float, v_norm: float, m: int) -> float:
    """(2^m / m!) * ||S||^m * ||V||, the form without the 1/(1 - ||S||) factor."""
    if s_norm >= 0.5:
        raise BoundHypothesisError(f"generator norm {s_norm} is not below 1/2")
    return (2.0 ** m / math.factorial(m)) * s_norm ** m * v_norm


def commutator_count_swt(order: int) -> int:
    """Commutators in a direct SWT to order K: 2^K - K - 1."""
    if order < 2:
        raise InputError("order must be at least 2")
    return 2 ** order - order - 1


def commutator_count_rswt(order: int) -> int:
    """Commutators in the RSWT to order K: sum over the schedule of (floor(K/2^n) - 1)."""
    plan = RswtPlan.for_order(order)
    return sum(m - 1 for m in plan.m_schedule)


def swt_leading_order(h: HermitianMatrix) -> HermitianMatrix:
    """Leading-order Schrieffer-Wolff result, D + [S, V]/2."""
    return rswt_step(h, 2, "full")
