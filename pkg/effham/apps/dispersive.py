"""
ZZ interaction of two qubits coupled through a resonator (quasi-dispersive regime).

Closed forms in the qubit-resonator detunings Delta_q = omega_q - omega_r,
anharmonicities alpha_q and couplings g_q, written for either scalar backend:

- ``zeta_disp``: effective qubit-qubit exchange with |020> and |002>
- ``zeta4``: fourth order, zeta_t + zeta_r
- ``zeta6``: sixth order, with the exchange part kept as a quotient

plus the engine routes on the qubit-resonator-qubit Hamiltonian: NPAD with
eight grouped rotations, RSWT to a chosen order and exact diagonalization.
Labels are (resonator, qubit 1, qubit 2).

For alpha_1 = alpha_2 = alpha the zeros of zeta4 lie on the circle
(Delta_+ - alpha)^2 + Delta_-^2 = alpha^2 with Delta_+- = Delta_1 +- Delta_2.
"""

import math
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from loguru import logger
from scipy.optimize import brentq

from ..cqed import CqedParams, qrq_basis, qubit_resonator_qubit
from ..errors import ComputationError, ResonanceError
from ..expr import Expr
from ..npad import npad_targeted
from ..rswt import RswtTrace, rswt
from .estimates import ZzEstimate, zeta_numeric, zz_from_energies

Scalar = Union[float, Expr]

SQRT2 = math.sqrt(2.0)

COMPUTATIONAL_LABELS = ("000", "001", "010", "011")

# rotation recipe: two groups, each built from the matrix at the start of its group
NPAD8_GROUPS = (
    (("010", "100"), ("001", "100"), ("011", "101"), ("011", "110")),
    (("011", "200"), ("001", "010"), ("011", "002"), ("011", "020")),
)


class Detunings(NamedTuple):
    """Resonator-frame parameters of the qubit-resonator-qubit model."""

    delta1: Scalar
    delta2: Scalar
    alpha1: Scalar
    alpha2: Scalar
    g1: Scalar
    g2: Scalar

    @classmethod
    def from_params(cls, p: CqedParams, symbolic: bool = False) -> "Detunings":
        v = p.scalars(symbolic)
        return cls(v["omega1"] - v["omega_r"], v["omega2"] - v["omega_r"],
                   v["alpha1"], v["alpha2"], v["g1"], v["g2"])

    def swapped(self) -> "Detunings":
        """Qubit labels 1 and 2 interchanged."""
        return Detunings(self.delta2, self.delta1, self.alpha2, self.alpha1, self.g2, self.g1)

    @property
    def delta_minus(self) -> Scalar:
        return self.delta1 - self.delta2


class Zeta4Contributions(NamedTuple):
    """Fourth-order zeta split by the virtual states involved."""

    qubit: Scalar
    resonator: Scalar
    disp: Scalar

    @property
    def total(self) -> Scalar:
        return self.qubit + self.resonator


def _check_denominators(d: Detunings, named: Dict[str, Scalar], floor: Optional[float] = None) -> None:
    """Raise ResonanceError for the first numeric denominator at or below ``floor`` (relative)."""
    if any(isinstance(x, Expr) for x in d):
        return
    if floor is None:
        from ..settings import get_config

        floor = get_config().sweep.resonance_mask
    scale = max(abs(d.delta1), abs(d.delta2), abs(d.alpha1), abs(d.alpha2), 1e-300)
    for name, value in named.items():
        if abs(value) <= floor * scale:
            raise ResonanceError(name, float(value))


def _fourth_order_denominators(d: Detunings) -> Dict[str, Scalar]:
    return {
        "Delta1": d.delta1,
        "Delta2": d.delta2,
        "Delta1+alpha1": d.delta1 + d.alpha1,
        "Delta2+alpha2": d.delta2 + d.alpha2,
        "Delta_minus+alpha1": d.delta_minus + d.alpha1,
        "Delta_minus-alpha2": d.delta_minus - d.alpha2,
    }


def _exchange_020(d: Detunings) -> Scalar:
    """Leading effective coupling between |011> and |020>."""
    gg = d.g1 * d.g2
    return SQRT2 * gg / (2 * (d.alpha1 + d.delta1)) + SQRT2 * gg / (2 * d.delta2)


def _exchange_020_next(d: Detunings) -> Scalar:
    """Next-order correction to the |011> - |020> coupling."""
    # written for |002> in the qubit-swapped labels
    s = d.swapped()
    g1, g2, d1, d2, a2 = s.g1, s.g2, s.delta1, s.delta2, s.alpha2
    e = d2 + a2
    return (
        -SQRT2 * g1 * g2 ** 3 / (4 * e ** 3)
        + SQRT2 * g1 * g2 ** 3 / (8 * d2 ** 2 * e)
        - 7 * SQRT2 * g1 * g2 ** 3 / (4 * d1 * e ** 2)
        + 3 * SQRT2 * g1 * g2 ** 3 / (2 * d1 * d2 * e)
        - 5 * SQRT2 * g1 * g2 ** 3 / (8 * d1 * d2 ** 2)
        - 7 * SQRT2 * g1 ** 3 * g2 / (8 * d1 ** 2 * e)
        - SQRT2 * g1 ** 3 * g2 / (8 * d1 ** 3)
    )


def _gap_020(d: Detunings, corrected: bool) -> Scalar:
    """E(011) - E(020), optionally with its second-order shifts."""
    gap = -d.alpha1 - d.delta1 + d.delta2
    if corrected:
        gap = gap - 2 * d.g1 ** 2 / (d.alpha1 + d.delta1) + d.g2 ** 2 / d.delta2 + d.g1 ** 2 / d.delta1
    return gap


def _disp_term(d: Detunings) -> Scalar:
    v = _exchange_020(d)
    return v * v / _gap_020(d, corrected=False)


def _qubit_corrections(d: Detunings) -> Scalar:
    """Fourth-order terms through |020> beyond the exchange quotient."""
    gg = d.g1 ** 2 * d.g2 ** 2
    e = d.delta1 + d.alpha1
    return -gg / (2 * d.delta2 * e ** 2) - 3 * gg / (2 * d.delta2 ** 2 * e)


def zeta_disp(d: Detunings) -> ZzEstimate:
    """Exchange-only estimate V_020^2 / (E011 - E020) + V_002^2 / (E011 - E002)."""
    _check_denominators(d, _fourth_order_denominators(d))
    return ZzEstimate(_disp_term(d) + _disp_term(d.swapped()), "disp")


def zeta4_contributions(d: Detunings) -> Zeta4Contributions:
    """
    (zeta_t, zeta_r, zeta_disp): virtual processes through the second excited
    qubit states and through the second excited resonator state.
    """
    _check_denominators(d, _fourth_order_denominators(d))
    disp = _disp_term(d) + _disp_term(d.swapped())
    qubit = disp + _qubit_corrections(d) + _qubit_corrections(d.swapped())
    gg = d.g1 ** 2 * d.g2 ** 2
    resonator = 2 * gg / (d.delta1 * d.delta2 ** 2) + 2 * gg / (d.delta1 ** 2 * d.delta2)
    return Zeta4Contributions(qubit, resonator, disp)


def zeta4(d: Detunings) -> ZzEstimate:
    """
    Fourth-order zeta,
    2 g1^2 g2^2 (1/(D1^2 (D- - a2)) - 1/(D2^2 (D- + a1)) + (D1 + D2)/(D1^2 D2^2)).
    """
    _check_denominators(d, _fourth_order_denominators(d))
    gg = d.g1 ** 2 * d.g2 ** 2
    dm = d.delta_minus
    value = 2 * gg * (
        1 / (d.delta1 ** 2 * (dm - d.alpha2))
        - 1 / (d.delta2 ** 2 * (dm + d.alpha1))
        + (d.delta1 + d.delta2) / (d.delta1 ** 2 * d.delta2 ** 2)
    )
    return ZzEstimate(value, "zeta4")


def _rest6(d: Detunings) -> Scalar:
    """Sixth-order terms proportional to g1^2 g2^4 outside the exchange quotient."""
    d1, d2, a1, a2 = d.delta1, d.delta2, d.alpha1, d.alpha2
    e1 = d1 + a1
    e2 = d2 + a2
    return d.g1 ** 2 * d.g2 ** 4 * (
        9 / (4 * d2 ** 3 * e1 ** 2)
        + 23 / (4 * d2 ** 4 * e1)
        + 1 / (2 * d1 * e2 ** 4)
        - 1 / (4 * d1 * d2 ** 2 * e2 ** 2)
        - 4 / (d1 ** 3 * d2 * e2)
        + 7 / (2 * d1 ** 2 * e2 ** 3)
        - 5 / (2 * d1 ** 2 * d2 * e2 ** 2)
        + 3 / (4 * d1 ** 2 * d2 ** 2 * e2)
        - 4 / (d1 ** 2 * d2 ** 3)
        + 4 / (d1 ** 3 * e2 ** 2)
        - 6 / (d1 * d2 ** 4)
    )


def _exchange_quotient6(d: Detunings) -> Scalar:
    v = _exchange_020(d) + _exchange_020_next(d)
    return v * v / _gap_020(d, corrected=True)


def zeta6(d: Detunings) -> ZzEstimate:
    """
    zeta through sixth order: the corrected exchange quotients, the remaining
    fourth-order terms and the sixth-order rest.
    """
    named = _fourth_order_denominators(d)
    named["E011-E020"] = _gap_020(d, corrected=True)
    named["E011-E002"] = _gap_020(d.swapped(), corrected=True)
    _check_denominators(d, named)
    parts = zeta4_contributions(d)
    value = (
        _exchange_quotient6(d)
        + _exchange_quotient6(d.swapped())
        + (parts.total - parts.disp)
        + _rest6(d)
        + _rest6(d.swapped())
    )
    return ZzEstimate(value, "zeta6")


def zero_circle_residual(delta_plus: float, delta_minus: float, alpha: float) -> float:
    """(Delta_+ - alpha)^2 + Delta_-^2 - alpha^2."""
    return (delta_plus - alpha) ** 2 + delta_minus ** 2 - alpha ** 2


def circle_root(delta_minus: float, alpha: float) -> float:
    """The zero of zeta4 on the branch Delta_+ < alpha."""
    if abs(delta_minus) > abs(alpha):
        raise ComputationError("no zero: |Delta_-| exceeds |alpha|")
    return alpha - math.sqrt(alpha ** 2 - delta_minus ** 2)


def find_zero(f: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-15) -> float:
    """Root of ``f`` bracketed by [lo, hi]."""
    try:
        return brentq(f, lo, hi, xtol=xtol, maxiter=200)
    except ValueError as e:
        raise ComputationError(f"no sign change of the function on [{lo}, {hi}]: {e}") from e


# engine routes --------------------------------------------------------------

def _diagonal_zeta(h, basis) -> Scalar:
    energies = [h[basis.index(label), basis.index(label)] for label in COMPUTATIONAL_LABELS]
    if h.is_symbolic:
        return zz_from_energies(*energies)
    return zz_from_energies(*(float(e.real) for e in energies))


def npad8_targets(basis) -> List[List[tuple]]:
    return [[basis.pair(a, b) for a, b in group] for group in NPAD8_GROUPS]


def zeta_npad8(p: CqedParams, symbolic: bool = False) -> ZzEstimate:
    """Eight grouped Givens rotations on the two-excitation model, then zeta from the diagonal."""
    basis = qrq_basis(p, max_excitations=2)
    h = qubit_resonator_qubit(p, symbolic=symbolic, max_excitations=2)
    result = npad_targeted(h, npad8_targets(basis), grouped=True)
    return ZzEstimate(_diagonal_zeta(result.h_final, basis), "npad8")


def zeta_rswt_traced(p: CqedParams, order: int = 4, symbolic: bool = False) -> Tuple[ZzEstimate, RswtTrace]:
    """``zeta_rswt`` together with the RSWT trace."""
    basis = qrq_basis(p, max_excitations=2)
    h = qubit_resonator_qubit(p, symbolic=symbolic, max_excitations=2)
    final, trace = rswt(h, order)
    logger.debug("zeta_rswt order={} commutators={}", order, trace.total_commutators)
    return ZzEstimate(_diagonal_zeta(final, basis), "rswt"), trace


def zeta_rswt(p: CqedParams, order: int = 4, symbolic: bool = False) -> ZzEstimate:
    """RSWT to ``order`` on the two-excitation model, then zeta from the diagonal."""
    return zeta_rswt_traced(p, order, symbolic)[0]


def zeta_exact_qrq(p: CqedParams, max_excitations: Optional[int] = 2) -> ZzEstimate:
    """Reference zeta from the exact spectrum; ``max_excitations=None`` uses every level."""
    basis = qrq_basis(p, max_excitations=max_excitations)
    h = qubit_resonator_qubit(p, max_excitations=max_excitations)
    return zeta_numeric(h, basis, COMPUTATIONAL_LABELS)


def zero_shift(delta_minus: float, alpha: float, g_values: Sequence[float],
               below: float = 0.05, above: float = 0.2) -> List[float]:
    """
    Delta_+ location of the exact zeta zero at fixed Delta_-, one per coupling.

    The search brackets the fourth-order root from ``below`` under it to
    ``above`` over it; larger couplings move the zero toward Delta_+ = 0.
    """
    guess = circle_root(delta_minus, alpha)
    roots = []
    for g in g_values:
        def f(delta_plus, g=g):
            return zeta_exact_qrq(CqedParams.quasi_dispersive(delta_plus, delta_minus, alpha, g)).value

        roots.append(find_zero(f, guess - below, guess + above, xtol=1e-12))
        logger.debug("zero_shift g={} root={}", g, roots[-1])
    return roots
