"""
Complex Givens rotations and pivot selection.

A rotation U_jk acts on basis states j and k only. Written with
c = cos(theta/2), s = sin(theta/2) and the phase phi of H[j][k] = g e^{-i phi}:

    U[j][j] = c          U[j][k] = e^{-i phi} s
    U[k][j] = -e^{i phi} s   U[k][k] = c

with tan(theta) = g / delta and delta = (H[j][j] - H[k][k]) / 2. The half-angle
tangent t = s / c is the smaller root of t^2 + 2t/kappa - 1 = 0, so |t| <= 1
and the level ordering of the pair is kept.

Numeric rotations take g = |H[j][k]| and the phase from its argument, except
for real entries, where g keeps the sign of the entry and phi = 0. Symbolic
rotations always use the signed real entry.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError, InvalidIndexError, StaleRotationError
from .expr import ONE, ZERO, Expr, is_zero
from .linalg import HermitianMatrix

Pair = Tuple[int, int]


def half_angle(kappa):
    """
    (t, c, s) for tan(theta) = kappa.

    Numbers use the cancellation-free form t = sgn(kappa)/(|1/kappa| + sqrt(1/kappa^2 + 1));
    Expr arguments use t = (sqrt(kappa^2 + 1) - 1)/kappa so the graph stays in {field ops, sqrt}.
    ``kappa=None`` stands for an infinite kappa (delta = 0) and gives t = 1.
    """
    if kappa is None:
        t = 1.0
    elif isinstance(kappa, Expr):
        t = ((kappa * kappa + 1).sqrt() - 1) / kappa
        c = 1 / (1 + t * t).sqrt()
        return t, c, t * c
    elif kappa == 0:
        t = 0.0
    else:
        inv = 1.0 / kappa
        t = math.copysign(1.0, kappa) / (abs(inv) + math.hypot(inv, 1.0))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return t, c, t * c


@dataclass(frozen=True)
class GivensRotation:
    """Two-level rotation on the pair (j, k), j < k."""

    j: int
    k: int
    c: object
    s: object
    t: object
    phi: float = 0.0
    g: object = 0.0
    delta: object = 0.0

    @classmethod
    def identity(cls, j: int, k: int, symbolic: bool = False) -> "GivensRotation":
        if symbolic:
            return cls(j, k, ONE, ZERO, ZERO, 0.0, ZERO, ZERO)
        return cls(j, k, 1.0, 0.0, 0.0, 0.0, 0.0)

    @property
    def pair(self) -> Pair:
        return (self.j, self.k)

    @property
    def is_identity(self) -> bool:
        return is_zero(self.s)

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.c, Expr)

    def matrix(self, dim: int) -> np.ndarray:
        """Dense numeric U_jk."""
        if self.is_symbolic:
            raise InputError("dense rotation matrices are numeric only")
        u = np.eye(dim, dtype=np.complex128)
        phase = np.exp(1j * self.phi)
        u[self.j, self.j] = self.c
        u[self.k, self.k] = self.c
        u[self.j, self.k] = np.conj(phase) * self.s
        u[self.k, self.j] = -phase * self.s
        return u

    def to_dict(self) -> dict:
        if self.is_symbolic:
            return {"j": self.j, "k": self.k, "symbolic": True}
        return {"j": self.j, "k": self.k, "c": float(self.c), "s": float(self.s), "phi": float(self.phi)}


def _check_pair(h: HermitianMatrix, j: int, k: int) -> Pair:
    if j == k:
        raise InvalidIndexError(f"a Givens rotation needs two distinct indices, got ({j}, {k})")
    if j > k:
        j, k = k, j
    if j < 0 or k >= h.dim:
        raise InvalidIndexError(f"pair ({j}, {k}) out of range for dimension {h.dim}")
    return j, k


def make_givens(h: HermitianMatrix, j: int, k: int) -> GivensRotation:
    """Rotation that zeroes H[j][k] of the current matrix."""
    j, k = _check_pair(h, j, k)
    entry = h[j, k]

    if h.is_symbolic:
        if is_zero(entry):
            return GivensRotation.identity(j, k, symbolic=True)
        delta = (h[j, j] - h[k, k]) / 2
        t, c, s = half_angle(None if is_zero(delta) else entry / delta)
        if not isinstance(t, Expr):
            t, c, s = ONE * t, ONE * c, ONE * s
        return GivensRotation(j, k, c, s, t, 0.0, entry, delta)

    entry = complex(entry)
    if entry == 0:
        return GivensRotation.identity(j, k)
    if entry.imag == 0.0:
        g, phi = entry.real, 0.0
    else:
        g, phi = abs(entry), -math.atan2(entry.imag, entry.real)
    delta = (h[j, j].real - h[k, k].real) / 2
    t, c, s = half_angle(None if delta == 0.0 else g / delta)
    return GivensRotation(j, k, c, s, t, phi, g, delta)


def _stale(h: HermitianMatrix, rotation: GivensRotation, tolerance: float) -> bool:
    """delta, g and phi of ``h`` on the pair differ from the ones the rotation was built with."""
    fresh = make_givens(h, rotation.j, rotation.k)
    if fresh.is_identity or rotation.is_identity:
        return fresh.is_identity != rotation.is_identity
    # g e^{-i phi} is compared as one complex number so phi wraps around
    entry_old = rotation.g * complex(math.cos(rotation.phi), -math.sin(rotation.phi))
    entry_new = fresh.g * complex(math.cos(fresh.phi), -math.sin(fresh.phi))
    scale = max(1.0, abs(entry_old), abs(rotation.delta))
    return (abs(fresh.delta - rotation.delta) > tolerance * scale
            or abs(entry_new - entry_old) > tolerance * scale)


def apply_givens(h: HermitianMatrix, rotation: GivensRotation, check: bool = True,
                 stale_tolerance: Optional[float] = None) -> HermitianMatrix:
    """
    H' = U H U^H for a single Givens rotation, in O(dim) entry updates.

    With ``check`` (the default) the rotation must have been built from ``h``:
    numeric rotations are re-derived and compared, the pair's diagonal entries
    are shifted by +-t*g and H'[j][k] is set to zero. Without ``check`` (grouped
    application of rotations built from an earlier matrix) the pair's 2x2 block
    is conjugated in full.

    Raises:
        StaleRotationError: ``check`` is set and the rotation does not match ``h``
    """
    if rotation.is_identity:
        return h
    j, k = _check_pair(h, rotation.j, rotation.k)
    symbolic = h.is_symbolic
    if check and not symbolic:
        if stale_tolerance is None:
            from .settings import get_config

            stale_tolerance = get_config().numerics.stale_tolerance
        if _stale(h, rotation, stale_tolerance):
            raise StaleRotationError(f"rotation on ({j}, {k}) was not built from this matrix")

    c, s = rotation.c, rotation.s
    if symbolic:
        p, p_bar = ONE, ONE
        zero = ZERO
    else:
        p = complex(math.cos(rotation.phi), math.sin(rotation.phi))
        p_bar = p.conjugate()
        zero = 0.0

    a = h.data.copy()
    hjj, hkk, hjk, hkj = a[j, j], a[k, k], a[j, k], a[k, j]
    col_j = a[:, j].copy()
    col_k = a[:, k].copy()
    new_j = c * col_j + (p * s) * col_k
    new_k = c * col_k - (p_bar * s) * col_j
    a[:, j] = new_j
    a[:, k] = new_k
    if symbolic:
        a[j, :] = new_j
        a[k, :] = new_k
    else:
        a[j, :] = np.conj(new_j)
        a[k, :] = np.conj(new_k)

    if check:
        tg = rotation.t * rotation.g
        a[j, j] = hjj + tg
        a[k, k] = hkk - tg
        a[j, k] = zero
        a[k, j] = zero
    else:
        cs = c * s
        a[j, j] = c * c * hjj + s * s * hkk + cs * (p_bar * hkj + p * hjk)
        a[k, k] = s * s * hjj + c * c * hkk - cs * (p * hjk + p_bar * hkj)
        b_jk = c * c * hjk - (p_bar * p_bar) * s * s * hkj + cs * p_bar * (hkk - hjj)
        a[j, k] = b_jk
        a[k, j] = b_jk if symbolic else np.conj(b_jk)
        if not symbolic:
            a[j, j] = a[j, j].real
            a[k, k] = a[k, k].real
    return HermitianMatrix._wrap(a)


# pivot strategies -----------------------------------------------------------

class PivotStrategy:
    """Chooses the next pair to rotate, or None when done."""

    def next_pivot(self, h: HermitianMatrix) -> Optional[Pair]:
        raise NotImplementedError


class LargestPivot(PivotStrategy):
    """
    Largest |H[j][k]| over j < k, ties to the smallest j then k.

    ``mask`` restricts the candidates (block mode); entries at or below
    ``tolerance`` count as zero.
    """

    def __init__(self, tolerance: float = 0.0, mask: Optional[np.ndarray] = None):
        self.tolerance = tolerance
        self.mask = mask

    def next_pivot(self, h: HermitianMatrix) -> Optional[Pair]:
        if h.is_symbolic:
            raise InputError("largest-pivot selection needs numeric entries")
        n = h.dim
        upper = np.triu(np.ones((n, n), dtype=bool), k=1)
        if self.mask is not None:
            upper &= self.mask
        if not upper.any():
            return None
        magnitude = np.where(upper, np.abs(h.data), -1.0)
        flat = int(np.argmax(magnitude))
        j, k = divmod(flat, n)
        if magnitude[j, k] <= self.tolerance:
            return None
        return j, k


class CyclicPivot(PivotStrategy):
    """Row-major walk over j < k that resumes where it stopped."""

    def __init__(self, tolerance: float = 0.0):
        self.tolerance = tolerance
        self.position = 0

    def next_pivot(self, h: HermitianMatrix) -> Optional[Pair]:
        n = h.dim
        pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
        if not pairs:
            return None
        for step in range(len(pairs)):
            j, k = pairs[(self.position + step) % len(pairs)]
            entry = h[j, k]
            if h.is_symbolic:
                nonzero = not is_zero(entry)
            else:
                nonzero = abs(entry) > self.tolerance
            if nonzero:
                self.position = (self.position + step + 1) % len(pairs)
                return j, k
        return None


class FixedPivots(PivotStrategy):
    """Pops pairs from a caller-supplied list."""

    def __init__(self, pairs: Sequence[Pair]):
        self.pairs: List[Pair] = [tuple(p) for p in pairs]

    def next_pivot(self, h: HermitianMatrix) -> Optional[Pair]:
        if not self.pairs:
            return None
        return self.pairs.pop(0)


def make_strategy(name: str, tolerance: float = 0.0, pairs: Optional[Sequence[Pair]] = None) -> PivotStrategy:
    if name == "largest":
        return LargestPivot(tolerance)
    if name == "cyclic":
        return CyclicPivot(tolerance)
    if name == "fixed":
        return FixedPivots(pairs or [])
    raise InputError(f"unknown pivot strategy '{name}'")


def select_pivot(h: HermitianMatrix, strategy: PivotStrategy) -> Optional[Pair]:
    """Next pivot pair of ``strategy`` on ``h``; None means done."""
    return strategy.next_pivot(h)
