"""
Cross-resonance ZX coupling strength.

The control qubit (1) is driven at the target frequency omega_d = omega2.
``omega_zx_npad4`` removes the qubit-qubit coupling g to first order, then
applies four Givens rotations on the single-photon drive couplings 00-10,
01-11, 10-20 and 11-21, all built from that one dressed Hamiltonian.
``omega_zx_analytical`` is the closed form of the same procedure and
``omega_zx_numeric`` block-diagonalizes the full driven Hamiltonian instead.

Convention: the ZX term of the computational block is (omega_zx / 2) Z x X,
so omega_zx = Re H[00,01] - Re H[10,11] = 2 Re tr(H ZX) / 4, and for small
drives omega_zx -> -g Omega alpha1 / (Delta_- (Delta_- + alpha1)).
"""

import math
from typing import Optional, Union

import numpy as np
from loguru import logger

from ..cqed import CqedParams, cr_driven_frame
from ..errors import NonConvergenceError, ResonanceError
from ..expr import ZERO, Expr, is_zero
from ..givens import half_angle
from ..linalg import Basis, HermitianMatrix, commutator
from ..npad import NpadConfig, npad_block, npad_targeted
from ..rswt import build_generator

Scalar = Union[float, Expr]

SQRT2 = math.sqrt(2.0)

COMPUTATIONAL = ("00", "01", "10", "11")

# control up to its second excited state, target a qubit
EFFECTIVE_LEVELS = (3, 2)

DRIVE_ROTATIONS = (("00", "10"), ("01", "11"), ("10", "20"), ("11", "21"))

PAULI_Z = np.diag([1.0, -1.0])
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])


def _half_angles(kappa: Scalar):
    t, c, s = half_angle(kappa)
    return c, s


def omega_zx_analytical(g: Scalar, drive: Scalar, delta_minus: Scalar, alpha1: Scalar,
                        leakage_gap: Optional[Scalar] = None) -> Scalar:
    """
    omega_zx = g Omega [ (s1^2 c2^2 - c1^2) / (2 D-) - s2^2 / (D- + a1)
               + ((s1^2 - c1^2 c2^2)(a1 - D-) - sqrt(2) a1 s1 s2 c2) / (2 D- (D- + a1)) ]

    with tan(theta1) = Omega / D-, tan(theta2) = sqrt(2) Omega / ``leakage_gap``,
    c_j = cos(theta_j / 2) and s_j = sin(theta_j / 2). ``leakage_gap`` defaults
    to 2 D- + a1; the 10-20 splitting D- + a1 gives exactly ``omega_zx_npad4``.

    Raises:
        ResonanceError: D-, D- + a1 or the leakage gap vanishes
    """
    default_gap = leakage_gap is None
    if default_gap:
        leakage_gap = 2 * delta_minus + alpha1
    numeric = not any(isinstance(x, Expr) for x in (g, drive, delta_minus, alpha1, leakage_gap))
    if numeric:
        for name, value in (("Delta_minus", delta_minus), ("Delta_minus+alpha1", delta_minus + alpha1),
                            ("2*Delta_minus+alpha1" if default_gap else "leakage_gap", leakage_gap)):
            if value == 0:
                raise ResonanceError(name, 0.0)
    if is_zero(drive):
        return 0.0
    c1, s1 = _half_angles(drive / delta_minus)
    c2, s2 = _half_angles(SQRT2 * drive / leakage_gap)
    dm, a1 = delta_minus, alpha1
    bracket = (
        (s1 * s1 * c2 * c2 - c1 * c1) / (2 * dm)
        - s2 * s2 / (dm + a1)
        + ((s1 * s1 - c1 * c1 * c2 * c2) * (a1 - dm) - SQRT2 * a1 * s1 * s2 * c2) / (2 * dm * (dm + a1))
    )
    return g * drive * bracket

def omega_zx_leading(g: float, drive: float, delta_minus: float, alpha1: float) -> float:
    """Small-drive limit -g Omega alpha1 / (Delta_- (Delta_- + alpha1))."""
    return -g * drive * alpha1 / (delta_minus * (delta_minus + alpha1))


def pauli_coefficient(block: np.ndarray, first: np.ndarray, second: np.ndarray) -> float:
    """Re tr(block (first x second)) / 4 for a 4x4 block on (00, 01, 10, 11)."""
    return float(np.real(np.trace(block @ np.kron(first, second)))) / 4


def computational_partition(basis: Basis):
    """{00, 01}, {10, 11} and everything else."""
    control0 = [basis.index("00"), basis.index("01")]
    control1 = [basis.index("10"), basis.index("11")]
    taken = set(control0 + control1)
    leakage = [i for i in range(len(basis)) if i not in taken]
    return [control0, control1, leakage]


def omega_zx_numeric(p: CqedParams, cfg: NpadConfig = None) -> float:
    """
    ZX strength of the block-diagonalized driven Hamiltonian.

    Couplings between the control-qubit sectors and to the leakage levels are
    rotated away; the ZX coefficient is read off the computational block as
    2 Re tr(H ZX) / 4, the prefactor of Z x X / 2. With this convention the
    small-drive slope is -g alpha1 / (Delta_- (Delta_- + alpha1)), without an
    extra factor 1/2.
    """
    h = cr_driven_frame(p)
    basis = Basis.full(p.levels_for(2))
    result = npad_block(h, computational_partition(basis), cfg)
    if not result.converged:
        raise NonConvergenceError("block diagonalization did not converge; raise block_max_rotations")
    idx = [basis.index(label) for label in COMPUTATIONAL]
    block = result.h_final.data[np.ix_(idx, idx)]
    return 2 * pauli_coefficient(block, PAULI_Z, PAULI_X)


def dressed_drive_frame(p: CqedParams, symbolic: bool = False) -> HermitianMatrix:
    """
    Driven frame of the three-level control and two-level target with g
    removed to first order: D + H_d + [S, H_d].

    S is the Schrieffer-Wolff generator of the exchange couplings alone
    ([S, D] = -V); the static O(g^2) shifts and [S, [S, H_d]] are dropped, so
    the result is linear in g.

    Raises:
        DegenerateGapError: Delta_- or Delta_- + alpha1 vanishes (numeric builds)
    """
    q = p.model_copy(update={"levels": list(EFFECTIVE_LEVELS)})
    h = cr_driven_frame(q, symbolic=symbolic)
    basis = Basis.full(EFFECTIVE_LEVELS)
    n = h.dim
    # the exchange flips the target, the drive does not
    exchange = [(j, k) for j in range(n) for k in range(j + 1, n)
                if basis.labels[j][1] != basis.labels[k][1]]
    s = build_generator(h, exchange).s

    a = h.data.copy()
    drive = np.full((n, n), ZERO, dtype=object) if symbolic else np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            if basis.labels[j][1] != basis.labels[k][1]:
                a[j, k] = ZERO if symbolic else 0.0
            else:
                drive[j, k] = a[j, k]
    return HermitianMatrix(a + commutator(s, drive))


def omega_zx_npad4(p: CqedParams, symbolic: bool = False) -> Scalar:
    """
    ZX strength from four grouped Givens rotations on the dressed drive frame.

    Equals ``omega_zx_analytical`` with the leakage gap set to Delta_- + alpha1.
    """
    h = dressed_drive_frame(p, symbolic=symbolic)
    basis = Basis.full(EFFECTIVE_LEVELS)
    targets = [basis.pair(a, b) for a, b in DRIVE_ROTATIONS]
    result = npad_targeted(h, targets, grouped=True)
    final = result.h_final
    i = {label: basis.index(label) for label in COMPUTATIONAL}
    value = final[i["00"], i["01"]] - final[i["10"], i["11"]]
    logger.debug("omega_zx_npad4 rotations={}", len(result.rotations))
    if symbolic:
        return value
    return float(np.real(value))
