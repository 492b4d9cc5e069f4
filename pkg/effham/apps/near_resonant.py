"""
ZZ interaction of two directly coupled qubits near resonance.

Everything is computed on the three-level block (|20>, |11>, |02>) of the
two-excitation manifold,

    [[delta,  g1,      0     ],
     [g1,    -delta,   g2    ],
     [0,      g2,     -Delta ]]

where zeta = H'[1][1] + delta once |11> is decoupled. The first Givens
rotation on (0, 1) gives H'[0][0] = E2 = delta * sqrt(1 + g1^2/delta^2); the
second, on (1, 2), adds the correction g2 c01 t12.
"""

import math
from typing import Union

import numpy as np

from ..errors import RegimeError
from ..expr import Expr, is_zero, sqrt
from ..givens import half_angle
from ..linalg import eig_oracle
from ..npad import npad_targeted
from ..rswt import swt_leading_order
from ..cqed import three_level_cz
from .estimates import ZzEstimate

Scalar = Union[float, Expr]

TWO_ROTATIONS = [(0, 1), (1, 2)]


def _is_symbolic(*values) -> bool:
    return any(isinstance(v, Expr) for v in values)


def level_repulsion(delta: Scalar, g1: Scalar) -> Scalar:
    """E2 = delta * sqrt(1 + g1^2/delta^2), the (0, 0) entry after the first rotation."""
    if is_zero(delta):
        return g1
    if isinstance(delta, Expr) or isinstance(g1, Expr):
        return delta * sqrt(1 + g1 * g1 / (delta * delta))
    return math.copysign(math.hypot(delta, g1), delta)


def first_rotation_cosine(delta: Scalar, g1: Scalar) -> Scalar:
    """c01 of the rotation on (|20>, |11>)."""
    if is_zero(g1):
        return 1.0
    _, c, _ = half_angle(None if is_zero(delta) else g1 / delta)
    return c


def zeta_two_level(delta: Scalar, g1: Scalar) -> ZzEstimate:
    """Two-level estimate delta - delta * sqrt(1 + g1^2/delta^2); -g1 at delta = 0."""
    return ZzEstimate(delta - level_repulsion(delta, g1), "two_level")


def two_rotation_closed_form(delta: Scalar, big_delta: Scalar, g1: Scalar, g2: Scalar) -> Scalar:
    """
    H''[1][1] after two rotations:
    -E2 + (Delta - E2)/2 * (sqrt(1 + (2 c01 g2 / (Delta - E2))^2) - 1).
    """
    e2 = level_repulsion(delta, g1)
    c01 = first_rotation_cosine(delta, g1)
    gap = big_delta - e2
    if is_zero(g2):
        return -e2
    if is_zero(gap):
        return -e2 + c01 * g2
    ratio = 2 * c01 * g2 / gap
    return -e2 + gap / 2 * (sqrt(1 + ratio * ratio) - 1)


def _bounds(h_final, delta, big_delta, g1, g2):
    """(eps1, eps2) for a numeric two-rotation run; eps1 only when Delta > E2."""
    e2 = level_repulsion(delta, g1)
    c01 = first_rotation_cosine(delta, g1)
    gap = big_delta - e2
    eps1 = c01 ** 4 * g2 ** 4 / gap ** 3 if gap > 0 else None
    residual = abs(complex(h_final[0, 1])) ** 2
    spacing = abs(float(h_final[0, 0].real) - float(h_final[1, 1].real))
    eps2 = residual / spacing if spacing > 0 else None
    return eps1, eps2


def zeta_two_rotation(delta: Scalar, big_delta: Scalar, g1: Scalar, g2: Scalar,
                      third_rotation: bool = False) -> ZzEstimate:
    """
    Two Givens rotations on (0, 1) then (1, 2) of the three-level block;
    ``third_rotation`` adds another rotation on (0, 1).
    """
    h = three_level_cz(delta, big_delta, g1, g2)
    targets = TWO_ROTATIONS + [(0, 1)] if third_rotation else TWO_ROTATIONS
    result = npad_targeted(h, targets)
    value = result.h_final[1, 1] + delta
    if h.is_symbolic:
        return ZzEstimate(value, "two_rotation")
    eps1, eps2 = _bounds(result.h_final, delta, big_delta, g1, g2)
    return ZzEstimate(float(value.real), "two_rotation", error_bound=eps1, secondary_bound=eps2)


def zeta_kerr_approx(delta: Scalar, big_delta: Scalar, g1: Scalar, g2: Scalar) -> ZzEstimate:
    """
    Kerr form H''[1][1] ~ -E2 + c01^2 g2^2 / (Delta - E2), valid for Delta >> delta, g.

    Raises:
        RegimeError: Delta <= E2
    """
    e2 = level_repulsion(delta, g1)
    c01 = first_rotation_cosine(delta, g1)
    gap = big_delta - e2
    if _is_symbolic(delta, big_delta, g1, g2):
        return ZzEstimate(delta - e2 + c01 * c01 * g2 * g2 / gap, "kerr_approx")
    if gap <= 0:
        raise RegimeError(f"Kerr approximation needs Delta > E2, got Delta - E2 = {gap:.6g}")
    value = delta - e2 + c01 ** 2 * g2 ** 2 / gap
    eps1 = c01 ** 4 * g2 ** 4 / gap ** 3
    exact = npad_targeted(three_level_cz(delta, big_delta, g1, g2), TWO_ROTATIONS)
    _, eps2 = _bounds(exact.h_final, delta, big_delta, g1, g2)
    return ZzEstimate(value, "kerr_approx", error_bound=eps1, secondary_bound=eps2)


def zeta_leading_perturbation(delta: Scalar, big_delta: Scalar, g1: Scalar, g2: Scalar) -> ZzEstimate:
    """Leading-order Schrieffer-Wolff estimate on the three-level block."""
    h = swt_leading_order(three_level_cz(delta, big_delta, g1, g2))
    value = h[1, 1] + delta
    return ZzEstimate(value if h.is_symbolic else float(value.real), "leading_perturbation")


def zeta_exact(delta: float, big_delta: float, g1: float, g2: float) -> ZzEstimate:
    """Reference zeta: the eigenvalue with the largest |11> weight, plus delta."""
    decomposition = eig_oracle(three_level_cz(delta, big_delta, g1, g2))
    weights = np.abs(decomposition.unitary[:, 1]) ** 2
    ranked = np.argsort(-weights, kind="stable")
    values = decomposition.values
    best = float(values[ranked[0]]) + delta
    if weights[ranked[0]] > 0.5:
        return ZzEstimate(best, "numeric")
    return ZzEstimate(best, "numeric", ambiguous=True,
                      candidates=(best, float(values[ranked[1]]) + delta))


def jump_detunings(alpha1: float, alpha2: float) -> tuple:
    """omega1 - omega2 where the bare levels swap: -alpha1 (20 vs 11) and alpha2 (11 vs 02)."""
    return (-alpha1, alpha2)
